#include "dwq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwq/domains.hpp"
#include "dwq/errors.hpp"
#include "dwq/formulas.hpp"
#include "dwq/integrator.hpp"
#include "dwq/rng.hpp"
#include "dwq/specfun.hpp"

namespace dwq {

namespace {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// formatting helpers

/// Shortest decimal representation that round-trips; the basis of the
/// byte-identical-output guarantee.
std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const ojson& cell) {
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
    if (cell.is_number_unsigned()) return std::to_string(cell.get<std::uint64_t>());
    if (cell.is_number_float()) return fmt(cell.get<double>());
    if (cell.is_null()) return "nan";
    return cell.dump();
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<ojson>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

ojson json_rows(const std::vector<std::string>& header,
                const std::vector<std::vector<ojson>>& rows) {
    ojson arr = ojson::array();
    for (const auto& row : rows) {
        ojson obj = ojson::object();
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr;
}

std::string to_json_table(const std::vector<std::string>& header,
                          const std::vector<std::vector<ojson>>& rows) {
    return json_rows(header, rows).dump(2) + "\n";
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

double parse_double_strict(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
    return v;
}

std::int64_t parse_int_strict(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument(what + ": cannot parse integer '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------
// shared run configuration

struct GlobalOpts {
    double L = 1.0;
    double c = 1.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::string format = "csv";
    std::uint64_t seed = 20252025;
    std::string out_path;

    ModelParams params() const { return ModelParams{L, c}; }
};

int write_output(const std::string& content, const std::string& path, std::ostream& out,
                 std::ostream& err) {
    if (path.empty()) {
        out << content;
        return kExitOk;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot open output file '" << path << "'\n";
        return kExitUsage;
    }
    f << content;
    if (!f) {
        err << "error: write failed for '" << path << "'\n";
        return kExitUsage;
    }
    return kExitOk;
}

int emit_table(const std::vector<std::string>& header,
               const std::vector<std::vector<ojson>>& rows, const GlobalOpts& g, std::ostream& out,
               std::ostream& err) {
    const std::string content =
        (g.format == "json") ? to_json_table(header, rows) : to_csv(header, rows);
    return write_output(content, g.out_path, out, err);
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
    std::string formula;
    double k = 1.0;
    double omega0 = 0.0;
    bool omega0_given = false;
    std::int64_t n = 0;
    std::vector<double> t_points;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t t_count = 0;
};

std::vector<double> eval_time_grid(const EvalOpts& o) {
    if (!o.t_points.empty() && o.t_count > 0)
        throw std::invalid_argument("eval: give either --t values or a --t-count grid, not both");
    if (o.t_count > 0) {
        if (!(o.t_max > o.t_min))
            throw std::invalid_argument("eval: grid needs --t-max greater than --t-min");
        return linspace(o.t_min, o.t_max, o.t_count);
    }
    if (!o.t_points.empty()) return o.t_points;
    return {0.0};
}

int cmd_eval(const GlobalOpts& g, const EvalOpts& o, std::ostream& out, std::ostream& err) {
    const ModelParams params = g.params();
    params.validate();
    const double k = o.omega0_given ? o.omega0 / params.wave_speed : o.k;
    const Mode mode{k, o.n};
    mode.validate();

    const std::vector<std::string> header = {"formula", "k", "n", "t", "value"};
    std::vector<std::vector<ojson>> rows;
    const auto push = [&](double t, const ojson& value) {
        rows.push_back({o.formula, mode.k, mode.n, t, value});
    };

    if (o.formula == "T") {
        const RecordingWindow win = recording_deadline(mode, params);
        push(0.0, win.recordable ? ojson(*win.deadline) : ojson("not recordable"));
        return emit_table(header, rows, g, out, err);
    }

    for (double t : eval_time_grid(o)) {
        if (o.formula == "omega_n") {
            push(t, omega_n(t, mode, params));
        } else if (o.formula == "Omega") {
            const auto W = capital_omega(t, mode, params);
            push(t, W ? ojson(*W) : ojson(std::numeric_limits<double>::quiet_NaN()));
        } else if (o.formula == "k_tilde") {
            push(t, k_threshold(o.n, t, params));
        } else if (o.formula == "lambda") {
            push(t, lifetime_lambda(t, mode, params));
        } else if (o.formula == "domain_size") {
            push(t, domain_size(o.n, t, params));
        }
    }
    return emit_table(header, rows, g, out, err);
}

// ---------------------------------------------------------------------------
// trace

struct TraceOpts {
    std::string system = "pair";
    double k = 1.0;
    double omega0 = 0.0;
    bool omega0_given = false;
    std::int64_t n = 0;
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t samples = 0;
    double max_step = 0.0;
    std::string init = "bessel";
};

std::array<double, 4> trace_initial_state(const TraceOpts& o, const OscillatorSystem& sys) {
    const std::size_t dim = sys.dimension();
    if (o.init == "zero") return {0.0, 0.0, 0.0, 0.0};
    if (o.init == "bessel") {
        const TransformParams tp(sys.mode.n, sys.mode.omega0(sys.params), sys.params);
        if (sys.form == SystemForm::damped_pair) {
            const PairJets j = analytic_pair_jets(o.t0, tp);
            return {j.u.value, j.u.d1, j.v.value, j.v.d1};
        }
        const Jet r = conjugate_r_jet(o.t0, tp);
        return {r.value, r.d1, 0.0, 0.0};
    }
    const auto parts = split(o.init, ',');
    if (parts.size() != dim)
        throw std::invalid_argument("trace: --init needs 'bessel', 'zero' or " +
                                    std::to_string(dim) + " comma-separated numbers");
    std::array<double, 4> state{};
    for (std::size_t i = 0; i < dim; ++i) state[i] = parse_double_strict(parts[i], "trace --init");
    return state;
}

int cmd_trace(const GlobalOpts& g, const TraceOpts& o, std::ostream& out, std::ostream& err) {
    OscillatorSystem sys;
    sys.form = (o.system == "parametric") ? SystemForm::parametric_r : SystemForm::damped_pair;
    sys.params = g.params();
    sys.mode.n = o.n;
    sys.mode.k = o.omega0_given ? o.omega0 / sys.params.wave_speed : o.k;
    sys.validate();

    IntegratorConfig cfg;
    cfg.rel_tol = g.rel_tol;
    cfg.abs_tol = g.abs_tol;
    cfg.max_step = o.max_step;
    cfg.dense_output = o.samples > 0;

    std::vector<double> t_eval;
    if (o.samples > 0) {
        for (std::size_t i = 1; i <= o.samples; ++i)
            t_eval.push_back(o.t0 +
                             (o.t1 - o.t0) * static_cast<double>(i) /
                                 static_cast<double>(o.samples));
    }

    const std::array<double, 4> init = trace_initial_state(o, sys);
    const Trajectory traj = integrate(sys, init, o.t0, o.t1, cfg, t_eval);

    const bool pair = sys.form == SystemForm::damped_pair;
    const std::vector<std::string> header =
        pair ? std::vector<std::string>{"t", "u", "udot", "v", "vdot"}
             : std::vector<std::string>{"t", "r", "rdot"};
    std::vector<std::vector<ojson>> rows;
    rows.reserve(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::vector<ojson> row{traj.times[s]};
        for (std::size_t i = 0; i < traj.dimension; ++i) row.push_back(traj.states[s][i]);
        rows.push_back(std::move(row));
    }

    if (g.format == "json") {
        ojson doc = ojson::object();
        doc["rows"] = json_rows(header, rows);
        doc["stats"] = ojson{{"steps_accepted", traj.stats.steps_accepted},
                             {"steps_rejected", traj.stats.steps_rejected},
                             {"rhs_evaluations", traj.stats.rhs_evaluations},
                             {"max_local_error", traj.stats.max_local_error}};
        return write_output(doc.dump(2) + "\n", g.out_path, out, err);
    }
    return emit_table(header, rows, g, out, err);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
    std::size_t samples = 10000;
    double tol_scale = 1.0;
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
};

CheckResult check_identity_omega_lambda(const VerifyOpts& o, UniformSampler& rng) {
    double worst = 0.0;
    for (std::size_t s = 0; s < o.samples; ++s) {
        const ModelParams params{rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0)};
        const std::int64_t n = rng.uniform_int(0, 50);
        const double ratio = rng.uniform(1.1, 50.0);  // 2*omega0/L, kept off the boundary
        const double omega0 = 0.5 * ratio * params.damping;
        const Mode mode{omega0 / params.wave_speed, n};
        const double T = *recording_deadline(mode, params).deadline;
        const double t = rng.uniform(0.0, 0.99 * T);
        const double lhs = capital_omega_sq(t, mode, params);
        const double lam = lifetime_lambda(t, mode, params);
        const double rhs = capital_omega_sq(0.0, mode, params) * std::exp(-2.0 * lam);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return {"identity_omega_lambda", worst, 1e-11};
}

CheckResult check_reality_equivalence(const VerifyOpts& o, UniformSampler& rng) {
    std::size_t violations = 0;
    for (std::size_t s = 0; s < o.samples; ++s) {
        const ModelParams params{rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0)};
        const std::int64_t n = rng.uniform_int(0, 50);
        const double ratio = rng.uniform(1.05, 50.0);
        const double omega0 = 0.5 * ratio * params.damping;
        const Mode mode{omega0 / params.wave_speed, n};
        const double T = *recording_deadline(mode, params).deadline;
        const double t = rng.uniform(0.0, 2.0 * T);
        const double kt = k_threshold(n, t, params);
        if (std::abs(t - T) < 1e-12 * std::max(1.0, T)) continue;      // boundary excluded
        if (std::abs(mode.k - kt) < 1e-12 * kt) continue;
        const bool within_window = t <= T;
        const bool above_cutoff = mode.k >= kt;
        if (within_window != above_cutoff) ++violations;
    }
    return {"reality_equivalence", static_cast<double>(violations), 0.0};
}

CheckResult check_bessel_anchors(const VerifyOpts&, UniformSampler& rng) {
    double worst = 0.0;
    const auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-300);
    };
    std::vector<double> zs = linspace(0.1, 80.0, 160);
    for (int s = 0; s < 200; ++s) zs.push_back(rng.uniform(0.1, 80.0));
    for (double z : zs) {
        const double sz = std::sin(z), cz = std::cos(z);
        worst = std::max(worst, rel(sph_bessel_j(0, z).value, sz / z));
        worst = std::max(worst, rel(sph_bessel_j(1, z).value, sz / (z * z) - cz / z));
        worst = std::max(worst, rel(sph_bessel_y(0, z).value, -cz / z));
        worst = std::max(worst, rel(sph_bessel_y(1, z).value, -cz / (z * z) - sz / z));
    }
    return {"bessel_anchors", worst, 1e-13};
}

CheckResult check_wronskian(const VerifyOpts& o, UniformSampler& rng) {
    double worst = 0.0;
    const std::size_t count = std::max<std::size_t>(200, o.samples / 10);
    for (std::size_t s = 0; s < count; ++s) {
        const int n = static_cast<int>(rng.uniform_int(0, 20));
        const double z = rng.uniform(0.1, 100.0);
        const BesselJet j = sph_bessel_jet(BesselKind::first, n, z);
        const BesselJet y = sph_bessel_jet(BesselKind::second, n, z);
        const double w = j.f * y.df - j.df * y.f;
        worst = std::max(worst, std::abs(w * z * z - 1.0));
    }
    return {"wronskian", worst, 1e-10};
}

struct ResidualSweep {
    double worst_u = 0.0;
    double worst_v = 0.0;
    double worst_r = 0.0;
    double worst_ratio = 0.0;
};

ResidualSweep residual_sweep(const ModelParams& params) {
    ResidualSweep sweep;
    for (std::int64_t n : {0, 1, 2, 5, 10}) {
        const double k = 2.0 / params.wave_speed * params.damping;  // 2*omega0/L = 4
        const Mode mode{k, n};
        const double T = *recording_deadline(mode, params).deadline;
        const TransformParams tp(n, mode.omega0(params), params);
        const std::vector<double> grid = linspace(0.0, 0.9 * T, 60);

        std::vector<PairJets> jets;
        double umax = 0.0;
        for (double t : grid) {
            jets.push_back(analytic_pair_jets(t, tp));
            umax = std::max(umax, std::abs(jets.back().u.value));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            sweep.worst_u =
                std::max(sweep.worst_u, residual(Equation::damped, t, jets[i].u, mode, params));
            sweep.worst_v =
                std::max(sweep.worst_v, residual(Equation::amplified, t, jets[i].v, mode, params));
            const Jet r = conjugate_r_jet(t, tp);
            sweep.worst_r =
                std::max(sweep.worst_r, residual(Equation::parametric, t, r, mode, params));
            if (std::abs(jets[i].u.value) > 1e-10 * umax) {
                const double expect = std::exp(params.damping * t);
                const double got = jets[i].v.value / jets[i].u.value;
                sweep.worst_ratio = std::max(sweep.worst_ratio, std::abs(got - expect) / expect);
            }
        }
    }
    return sweep;
}

int cmd_verify(const GlobalOpts& g, const VerifyOpts& o, std::ostream& out, std::ostream& err) {
    if (!(o.tol_scale > 0.0) || !std::isfinite(o.tol_scale))
        throw std::invalid_argument("verify: --tol-scale must be positive and finite");
    if (o.samples == 0) throw std::invalid_argument("verify: --samples must be >= 1");

    UniformSampler rng(g.seed);
    std::vector<CheckResult> checks;
    checks.push_back(check_identity_omega_lambda(o, rng));
    checks.push_back(check_reality_equivalence(o, rng));
    checks.push_back(check_bessel_anchors(o, rng));
    checks.push_back(check_wronskian(o, rng));
    const ResidualSweep sweep = residual_sweep(g.params());
    checks.push_back({"residual_u_damped", sweep.worst_u, 1e-8});
    checks.push_back({"residual_v_amplified", sweep.worst_v, 1e-8});
    checks.push_back({"residual_r_parametric", sweep.worst_r, 1e-8});
    checks.push_back({"ratio_v_over_u", sweep.worst_ratio, 1e-10});

    if (o.inject_fault) checks.front().measured += 1e-3;

    ojson report = ojson::object();
    report["checks"] = ojson::array();
    std::size_t passed = 0;
    for (const auto& ck : checks) {
        const double tol = ck.tolerance * o.tol_scale;
        const bool pass = ck.measured <= tol;
        passed += pass ? 1u : 0u;
        report["checks"].push_back(ojson{
            {"name", ck.name}, {"measured", ck.measured}, {"tolerance", tol}, {"pass", pass}});
    }
    report["summary"] = ojson{{"total", checks.size()},
                              {"passed", passed},
                              {"failed", checks.size() - passed},
                              {"seed", g.seed},
                              {"fault_injected", o.inject_fault}};

    const int write_rc = write_output(report.dump(2) + "\n", g.out_path, out, err);
    if (write_rc != kExitOk) return write_rc;
    return (passed == checks.size()) ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// figures

struct FigOpts {
    std::string fig = "both";
    std::vector<double> k_list = {0.75, 1.0, 1.25, 1.5, 2.0};
    std::int64_t n_fixed = 0;
    std::vector<std::int64_t> n_list = {0, 1, 2, 3};
    double k_fixed = 1.0;
    double t_max = 0.0;  // <= 0: auto from the largest deadline
    std::size_t t_count = 200;
    double lambda_max = kDefaultLambdaMax;
};

int cmd_figures(const GlobalOpts& g, const FigOpts& o, std::ostream& out, std::ostream& err) {
    if (g.out_path.empty())
        throw std::invalid_argument("figures: --out is required (a JSON deadline sidecar is "
                                    "written next to the CSV)");
    if (o.t_count < 2) throw std::invalid_argument("figures: --t-count must be >= 2");
    const ModelParams params = g.params();
    params.validate();
    const bool want1 = o.fig == "1" || o.fig == "both";
    const bool want2 = o.fig == "2" || o.fig == "both";
    if (!want1 && !want2) throw std::invalid_argument("figures: --fig must be 1, 2 or both");

    double t_max = o.t_max;
    if (!(t_max > 0.0)) {
        double deadline_max = 0.0;
        if (want1)
            for (double k : o.k_list) {
                const RecordingWindow w = recording_deadline(Mode{k, o.n_fixed}, params);
                if (w.recordable) deadline_max = std::max(deadline_max, *w.deadline);
            }
        if (want2)
            for (std::int64_t n : o.n_list) {
                const RecordingWindow w = recording_deadline(Mode{o.k_fixed, n}, params);
                if (w.recordable) deadline_max = std::max(deadline_max, *w.deadline);
            }
        if (!(deadline_max > 0.0))
            throw std::invalid_argument("figures: no recordable curve in the requested families");
        t_max = 0.999 * deadline_max;
    }
    const std::vector<double> t_grid = linspace(0.0, t_max, o.t_count);

    const std::vector<std::string> header = {"family_id", "k", "n", "t", "lambda"};
    std::vector<std::vector<ojson>> rows;
    ojson sidecar = ojson::object();
    const auto emit_family = [&](const char* family_id, const CurveFamily& fam) {
        ojson deadlines = ojson::array();
        for (const auto& curve : fam.curves) {
            deadlines.push_back(
                ojson{{"k", curve.k}, {"n", curve.n}, {"deadline", curve.deadline}});
            for (std::size_t i = 0; i < curve.t.size(); ++i)
                rows.push_back({family_id, curve.k, curve.n, curve.t[i], curve.lambda[i]});
        }
        sidecar[family_id] = std::move(deadlines);
        for (const auto& w : fam.warnings) err << "warning: " << family_id << ": " << w << "\n";
    };
    if (want1) emit_family("fig1", fig1_curves(o.k_list, o.n_fixed, params, t_grid, o.lambda_max));
    if (want2) emit_family("fig2", fig2_curves(o.n_list, o.k_fixed, params, t_grid, o.lambda_max));

    const int rc = write_output(to_csv(header, rows), g.out_path, out, err);
    if (rc != kExitOk) return rc;
    return write_output(sidecar.dump(2) + "\n", g.out_path + ".deadlines.json", out, err);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
    std::vector<std::int64_t> n_list = {0};
    std::vector<double> k_list = {1.0};
    std::vector<double> L_list;  // empty: use the global --L
    double t = 0.0;
};

int cmd_sweep(const GlobalOpts& g, const SweepOpts& o, std::ostream& out, std::ostream& err) {
    if (o.n_list.empty() || o.k_list.empty())
        throw std::invalid_argument("sweep: grid must be non-empty");
    std::vector<double> L_list = o.L_list.empty() ? std::vector<double>{g.L} : o.L_list;
    if (!(o.t >= 0.0) || !std::isfinite(o.t))
        throw std::invalid_argument("sweep: --t must be finite and >= 0");

    const std::vector<std::string> header = {"n",          "k", "L", "T", "k_tilde_at_t",
                                             "domain_size_at_t"};
    std::vector<std::vector<ojson>> rows;
    for (std::int64_t n : o.n_list) {
        for (double k : o.k_list) {
            for (double L : L_list) {
                const ModelParams params{L, g.c};
                params.validate();
                const Mode mode{k, n};
                mode.validate();
                const RecordingWindow win = recording_deadline(mode, params);
                rows.push_back({n, k, L,
                                win.recordable ? ojson(*win.deadline) : ojson("not recordable"),
                                k_threshold(n, o.t, params), domain_size(n, o.t, params)});
            }
        }
    }
    return emit_table(header, rows, g, out, err);
}

// ---------------------------------------------------------------------------
// registry

struct RegistryOpts {
    std::string script;
    std::vector<double> report_at;
};

struct ScriptEvent {
    double t = 0.0;
    StimulusSpectrum spectrum;
};

std::vector<ScriptEvent> parse_event_script(std::istream& in) {
    std::vector<ScriptEvent> events;
    std::string line;
    std::size_t lineno = 1;
    for (; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tok;
        std::string f;
        while (fields >> f) tok.push_back(f);
        if (tok.empty()) continue;
        const std::string where = "event script line " + std::to_string(lineno);
        if (tok.size() < 3 || tok.size() > 4)
            throw std::invalid_argument(where + ": expected 't n k1,k2,... [w1,w2,...]'");
        ScriptEvent ev;
        ev.t = parse_double_strict(tok[0], where);
        ev.spectrum.n = parse_int_strict(tok[1], where);
        for (const auto& ks : split(tok[2], ','))
            ev.spectrum.k.push_back(parse_double_strict(ks, where));
        if (tok.size() == 4)
            for (const auto& ws : split(tok[3], ','))
                ev.spectrum.weights.push_back(parse_double_strict(ws, where));
        events.push_back(std::move(ev));
    }
    return events;
}

ojson report_to_json(const PersistenceReport& rep) {
    ojson jr = ojson::object();
    jr["t"] = rep.t;
    jr["records"] = ojson::array();
    for (const auto& r : rep.records) {
        jr["records"].push_back(ojson{{"id", r.id},
                                      {"t_recorded", r.t_recorded},
                                      {"n", r.n},
                                      {"recorded_count", r.recorded_count},
                                      {"alive_count", r.alive_count},
                                      {"alive_fraction", r.alive_fraction},
                                      {"max_death_time", r.max_death_time},
                                      {"domain_size", r.domain_size},
                                      {"mean_wavelength", r.mean_wavelength}});
    }
    jr["overlaps"] = ojson::array();
    for (const auto& ov : rep.overlaps)
        jr["overlaps"].push_back(
            ojson{{"id_a", ov.id_a}, {"id_b", ov.id_b}, {"shared_modes", ov.shared_modes}});
    return jr;
}

int cmd_registry(const GlobalOpts& g, const RegistryOpts& o, std::ostream& out,
                 std::ostream& err) {
    std::ifstream f(o.script);
    if (!f) throw std::invalid_argument("registry: cannot open event script '" + o.script + "'");
    const std::vector<ScriptEvent> events = parse_event_script(f);

    MemoryRegistry registry(g.params());
    for (const auto& ev : events) registry.record_event(ev.spectrum, ev.t);

    std::vector<double> report_times = o.report_at;
    if (report_times.empty()) report_times.push_back(registry.clock());

    ojson doc = ojson::object();
    doc["params"] = ojson{{"L", g.L}, {"c", g.c}};
    doc["events"] = events.size();
    doc["reports"] = ojson::array();
    for (double t : report_times) doc["reports"].push_back(report_to_json(registry.persistence_report(t)));
    return write_output(doc.dump(2) + "\n", g.out_path, out, err);
}

// ---------------------------------------------------------------------------
// wiring

struct Cli {
    GlobalOpts global;
    EvalOpts eval;
    TraceOpts trace;
    VerifyOpts verify;
    FigOpts figures;
    SweepOpts sweep;
    RegistryOpts registry;

    CLI::App app{"dissipative mode-dynamics toolkit"};
    CLI::App* sub_eval = nullptr;
    CLI::App* sub_trace = nullptr;
    CLI::App* sub_verify = nullptr;
    CLI::App* sub_figures = nullptr;
    CLI::App* sub_sweep = nullptr;
    CLI::App* sub_registry = nullptr;
    CLI::Option* eval_omega0 = nullptr;
    CLI::Option* trace_omega0 = nullptr;

    Cli() { build(); }
    void build();
};

void Cli::build() {
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "flat key = value configuration file (keys: L, c, rel_tol, "
                                   "abs_tol, format, seed); flags win over file entries");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    app.add_option("--L", global.L, "environment coupling (damping) L > 0");
    app.add_option("--c", global.c, "propagation speed c > 0 (omega0 = k c)");
    app.add_option("--rel_tol", global.rel_tol, "integrator relative tolerance");
    app.add_option("--abs_tol", global.abs_tol, "integrator absolute tolerance");
    app.add_option("--format", global.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", global.seed, "seed for sampled property checks");
    app.add_option("--out", global.out_path, "output file path (default: stdout)");

    sub_eval = app.add_subcommand("eval", "evaluate closed-form mode quantities over a time grid");
    sub_eval->add_option("--formula", eval.formula, "which quantity to evaluate")
        ->required()
        ->check(CLI::IsMember({"omega_n", "Omega", "T", "k_tilde", "lambda", "domain_size"}));
    auto* eval_k = sub_eval->add_option("--k", eval.k, "wavenumber k > 0");
    eval_omega0 = sub_eval->add_option("--omega0", eval.omega0, "set omega0 = k c directly");
    eval_omega0->excludes(eval_k);
    sub_eval->add_option("--n", eval.n, "openness level n >= 0");
    sub_eval->add_option("--t", eval.t_points, "evaluation time(s); repeatable");
    sub_eval->add_option("--t-min", eval.t_min, "grid start");
    sub_eval->add_option("--t-max", eval.t_max, "grid end");
    sub_eval->add_option("--t-count", eval.t_count, "grid size (enables the linear grid)");

    sub_trace = app.add_subcommand("trace", "integrate a system and export the trajectory");
    sub_trace->add_option("--system", trace.system, "which system to integrate")
        ->check(CLI::IsMember({"pair", "parametric"}));
    auto* trace_k = sub_trace->add_option("--k", trace.k, "wavenumber k > 0");
    trace_omega0 = sub_trace->add_option("--omega0", trace.omega0, "set omega0 = k c directly");
    trace_omega0->excludes(trace_k);
    sub_trace->add_option("--n", trace.n, "openness level n >= 0");
    sub_trace->add_option("--t0", trace.t0, "start time");
    sub_trace->add_option("--t1", trace.t1, "end time")->required();
    sub_trace->add_option("--samples", trace.samples,
                          "sample count on a uniform grid (0: every accepted step)");
    sub_trace->add_option("--max-step", trace.max_step, "step size cap (0: span-limited)");
    sub_trace->add_option("--init", trace.init,
                          "'bessel' (analytic seed), 'zero', or comma-separated state");

    sub_verify = app.add_subcommand("verify",
                                    "run the identity, Wronskian, residual and ratio suites");
    sub_verify->add_option("--samples", verify.samples, "sample count for randomized checks");
    sub_verify->add_option("--tol-scale", verify.tol_scale,
                           "multiply every tolerance (e.g. 1e-6 to force failures)");
    sub_verify->add_flag("--inject-fault", verify.inject_fault,
                         "perturb the first check to exercise the failure path");

    sub_figures = app.add_subcommand("figures", "emit lifetime-curve data (long CSV + sidecar)");
    sub_figures->add_option("--fig", figures.fig, "which family: 1, 2 or both")
        ->check(CLI::IsMember({"1", "2", "both"}));
    sub_figures->add_option("--k-list", figures.k_list, "wavenumbers for the fixed-n family")
        ->delimiter(',');
    sub_figures->add_option("--n", figures.n_fixed, "fixed n for --fig 1");
    sub_figures->add_option("--n-list", figures.n_list, "openness levels for the fixed-k family")
        ->delimiter(',');
    sub_figures->add_option("--k", figures.k_fixed, "fixed k for --fig 2");
    sub_figures->add_option("--t-max", figures.t_max, "grid end (0: longest deadline)");
    sub_figures->add_option("--t-count", figures.t_count, "grid size");
    sub_figures->add_option("--lambda-max", figures.lambda_max, "clip curves at this Lambda");

    sub_sweep = app.add_subcommand("sweep", "tabulate T, k_tilde and domain size over a grid");
    sub_sweep->add_option("--n-list", sweep.n_list, "openness levels")->delimiter(',');
    sub_sweep->add_option("--k-list", sweep.k_list, "wavenumbers")->delimiter(',');
    sub_sweep->add_option("--L-list", sweep.L_list, "damping values (default: global --L)")
        ->delimiter(',');
    sub_sweep->add_option("--t", sweep.t, "time at which k_tilde and domain size are reported");

    sub_registry = app.add_subcommand("registry", "replay an event script, report persistence");
    sub_registry->add_option("--script", registry.script, "event script: 't n k1,k2,... "
                                                          "[w1,w2,...]' per line, # comments")
        ->required();
    sub_registry->add_option("--report-at", registry.report_at,
                             "report times (default: the final event time)")
        ->delimiter(',');
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Cli cli;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        cli.app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        cli.eval.omega0_given = cli.eval_omega0->count() > 0;
        cli.trace.omega0_given = cli.trace_omega0->count() > 0;
        if (cli.sub_eval->parsed()) return cmd_eval(cli.global, cli.eval, out, err);
        if (cli.sub_trace->parsed()) return cmd_trace(cli.global, cli.trace, out, err);
        if (cli.sub_verify->parsed()) return cmd_verify(cli.global, cli.verify, out, err);
        if (cli.sub_figures->parsed()) return cmd_figures(cli.global, cli.figures, out, err);
        if (cli.sub_sweep->parsed()) return cmd_sweep(cli.global, cli.sweep, out, err);
        if (cli.sub_registry->parsed()) return cmd_registry(cli.global, cli.registry, out, err);
        err << "error: no command selected\n";
        return kExitUsage;
    } catch (const integration_failure& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const clock_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace dwq
