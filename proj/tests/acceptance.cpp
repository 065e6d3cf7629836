// Acceptance gate: one PASS/FAIL line per criterion, exit code = failures.
// Every expected value is computed independently of the code path under test
// (closed forms, both sides of an identity, or frozen constants).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dwq/cli.hpp"
#include "dwq/domains.hpp"
#include "dwq/formulas.hpp"
#include "dwq/integrator.hpp"
#include "dwq/rng.hpp"
#include "dwq/specfun.hpp"

using namespace dwq;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    if (!pass) ++failures;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < count; ++i)
        out.push_back(lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(count - 1)));
    out.push_back(hi);  // exact endpoint, no roundoff past hi
    return out;
}

// --- C1: Omega(t)^2 = Omega(0)^2 e^{-2 Lambda(t)} -------------------------

void criterion1() {
    UniformSampler rng(101);
    double worst = 0.0;
    const int samples = 10000;
    for (int s = 0; s < samples; ++s) {
        const ModelParams params{rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0)};
        const std::int64_t n = rng.uniform_int(0, 50);
        const double ratio = rng.uniform(1.1, 50.0);
        const Mode mode{0.5 * ratio * params.damping / params.wave_speed, n};
        const double T = *recording_deadline(mode, params).deadline;
        const double t = rng.uniform(0.0, 0.99 * T);
        const double lhs = capital_omega_sq(t, mode, params);
        const double rhs = capital_omega_sq(0.0, mode, params) *
                           std::exp(-2.0 * lifetime_lambda(t, mode, params));
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    report("C1 exact-identity suite", worst <= 1e-11,
           "max rel error " + num(worst) + " <= 1e-11 over " + std::to_string(samples) +
               " samples");
}

// --- C2: (t <= T) iff (k >= k_tilde) ---------------------------------------

void criterion2() {
    UniformSampler rng(102);
    const int samples = 10000;
    int violations = 0;
    int tested = 0;
    for (int s = 0; s < samples; ++s) {
        const ModelParams params{rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0)};
        const std::int64_t n = rng.uniform_int(0, 50);
        const double ratio = rng.uniform(1.05, 50.0);
        const Mode mode{0.5 * ratio * params.damping / params.wave_speed, n};
        const double T = *recording_deadline(mode, params).deadline;
        const double t = rng.uniform(0.0, 2.0 * T);
        const double kt = k_threshold(n, t, params);
        if (std::abs(t - T) < 1e-12 * std::max(1.0, T)) continue;
        if (std::abs(mode.k - kt) < 1e-12 * kt) continue;
        ++tested;
        if ((t <= T) != (mode.k >= kt)) ++violations;
    }
    report("C2 reality-condition equivalence", violations == 0,
           std::to_string(violations) + " violations in " + std::to_string(tested) +
               " non-boundary samples");
}

// --- C3: Bessel anchors and Wronskian ---------------------------------------

void criterion3() {
    double worst_anchor = 0.0;
    const auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-300);
    };
    for (double z : linspace(0.1, 80.0, 400)) {
        const double s = std::sin(z), c = std::cos(z);
        worst_anchor = std::max(worst_anchor, rel(sph_bessel_j(0, z).value, s / z));
        worst_anchor =
            std::max(worst_anchor, rel(sph_bessel_j(1, z).value, s / (z * z) - c / z));
        worst_anchor = std::max(worst_anchor, rel(sph_bessel_y(0, z).value, -c / z));
    }
    UniformSampler rng(103);
    double worst_w = 0.0;
    for (int s = 0; s < 2000; ++s) {
        const int n = static_cast<int>(rng.uniform_int(0, 20));
        const double z = rng.uniform(0.1, 100.0);
        const BesselJet j = sph_bessel_jet(BesselKind::first, n, z);
        const BesselJet y = sph_bessel_jet(BesselKind::second, n, z);
        worst_w = std::max(worst_w, std::abs((j.f * y.df - j.df * y.f) * z * z - 1.0));
    }
    report("C3 Bessel certification", worst_anchor <= 1e-13 && worst_w <= 1e-10,
           "anchors " + num(worst_anchor) + " <= 1e-13, Wronskian " + num(worst_w) +
               " <= 1e-10");
}

// --- C4: analytic pair satisfies the equations; v/u = e^{Lt} ----------------

void criterion4() {
    const ModelParams params{1.0, 1.0};
    double worst_res = 0.0, worst_ratio = 0.0;
    for (std::int64_t n : {0, 1, 2, 5, 10}) {
        const Mode mode{2.0, n};  // 2 omega0 / L = 4
        const double T = *recording_deadline(mode, params).deadline;
        const TransformParams tp(n, mode.omega0(params), params);
        const std::vector<double> grid = linspace(0.0, 0.9 * T, 60);
        double umax = 0.0;
        std::vector<PairJets> jets;
        for (double t : grid) {
            jets.push_back(analytic_pair_jets(t, tp));
            umax = std::max(umax, std::abs(jets.back().u.value));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            worst_res = std::max(worst_res,
                                 residual(Equation::damped, t, jets[i].u, mode, params));
            worst_res = std::max(worst_res,
                                 residual(Equation::amplified, t, jets[i].v, mode, params));
            worst_res = std::max(
                worst_res, residual(Equation::parametric, t, conjugate_r_jet(t, tp), mode, params));
            if (std::abs(jets[i].u.value) > 1e-10 * umax) {
                const double expect = std::exp(params.damping * t);
                worst_ratio = std::max(
                    worst_ratio, std::abs(jets[i].v.value / jets[i].u.value - expect) / expect);
            }
        }
    }
    report("C4 transform exactness", worst_res < 1e-8 && worst_ratio <= 1e-10,
           "residual " + num(worst_res) + " < 1e-8, ratio error " + num(worst_ratio) +
               " <= 1e-10");
}

// --- C5: integration matches the analytic solution; order >= 4 --------------

void criterion5() {
    const ModelParams params{1.0, 1.0};
    IntegratorConfig cfg;
    cfg.dense_output = true;  // rel_tol 1e-9, abs_tol 1e-12 defaults
    double worst_mixed = 0.0;
    for (std::int64_t n : {0, 1, 2, 5, 10}) {
        const Mode mode{2.0, n};
        const double T = *recording_deadline(mode, params).deadline;
        const TransformParams tp(n, mode.omega0(params), params);
        const std::vector<double> grid = linspace(0.0, 0.9 * T, 60);
        const PairJets j0 = analytic_pair_jets(0.0, tp);
        const std::vector<double> t_eval(grid.begin() + 1, grid.end());
        const OscillatorSystem sys{SystemForm::damped_pair, mode, params};
        const Trajectory traj =
            integrate(sys, {j0.u.value, j0.u.d1, j0.v.value, j0.v.d1}, 0.0, grid.back(), cfg,
                      t_eval);
        double umax = 0.0, vmax = 0.0;
        std::vector<PairState> exact;
        for (double t : grid) {
            exact.push_back(analytic_pair(t, tp));
            umax = std::max(umax, std::abs(exact.back().u));
            vmax = std::max(vmax, std::abs(exact.back().v));
        }
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double du = std::abs(traj.states[i][0] - exact[i].u);
            const double dv = std::abs(traj.states[i][2] - exact[i].v);
            worst_mixed = std::max(worst_mixed, du / std::max(std::abs(exact[i].u), 0.1 * umax));
            worst_mixed = std::max(worst_mixed, dv / std::max(std::abs(exact[i].v), 0.1 * vmax));
        }
    }

    // order on the constant-frequency benchmark under forced fixed steps
    const OscillatorSystem bench{SystemForm::damped_pair, Mode{2.0, 1'000'000'000},
                                 ModelParams{1.0, 1.0}};
    const std::array<double, 4> init{1.0, -0.5, 1.0, 0.5};
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    tight.dense_output = true;
    const double ref = integrate(bench, init, 0.0, 2.0, tight, {2.0}).states[1][0];
    std::vector<double> errs;
    for (double h : {0.1, 0.05, 0.025}) {
        IntegratorConfig fixed;
        fixed.rel_tol = 9e-3;
        fixed.abs_tol = 9e-3;
        fixed.max_step = h;
        fixed.dense_output = true;
        errs.push_back(
            std::abs(integrate(bench, init, 0.0, 2.0, fixed, {2.0}).states[1][0] - ref));
    }
    const double order = std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));

    report("C5 numeric-vs-analytic", worst_mixed <= 1e-6 && order >= 4.0,
           "mixed-norm error " + num(worst_mixed) + " <= 1e-6, convergence order " + num(order) +
               " >= 4");
}

// --- C6: curve-family semantics ---------------------------------------------

void criterion6() {
    const ModelParams params{1.0, 1.0};
    bool ok = true;
    std::string why = "all curve-family properties hold";
    const auto check = [&](bool cond, const char* what) {
        if (ok && !cond) {
            ok = false;
            why = what;
        }
    };

    const std::vector<double> k_list{0.75, 1.0, 1.25, 1.5, 2.0};
    const std::vector<std::int64_t> n_list{0, 1, 2, 3};
    const double t_max1 = 0.999 * *recording_deadline(0, 2.0, params).deadline;
    const CurveFamily fam1 = fig1_curves(k_list, 0, params, linspace(0.0, t_max1, 300));
    const double t_max2 = 0.999 * *recording_deadline(3, 1.0, params).deadline;
    const CurveFamily fam2 = fig2_curves(n_list, 1.0, params, linspace(0.0, t_max2, 300));

    check(fam1.curves.size() == k_list.size(), "fig1 must keep every recordable k");
    check(fam2.curves.size() == n_list.size(), "fig2 must keep every recordable n");
    for (const CurveFamily* fam : {&fam1, &fam2}) {
        for (const LifetimeCurve& c : fam->curves) {
            check(!c.t.empty() && c.t.front() == 0.0 && c.lambda.front() == 0.0,
                  "curves must start at (0, 0)");
            for (std::size_t i = 1; i < c.lambda.size(); ++i)
                check(c.lambda[i] > c.lambda[i - 1], "Lambda must increase monotonically");
        }
    }
    for (std::size_t i = 1; i < fam1.curves.size(); ++i)
        check(fam1.curves[i].deadline > fam1.curves[i - 1].deadline,
              "fig1 deadlines must increase with k");
    for (std::size_t i = 1; i < fam2.curves.size(); ++i)
        check(fam2.curves[i].deadline > fam2.curves[i - 1].deadline,
              "fig2 deadlines must increase with n");
    const double d0 = fam2.curves[1].deadline - fam2.curves[0].deadline;
    for (std::size_t i = 2; i < fam2.curves.size(); ++i) {
        const double di = fam2.curves[i].deadline - fam2.curves[i - 1].deadline;
        check(std::abs(di - d0) <= 1e-13 * d0, "deadline successor difference must be constant");
    }
    report("C6 figure semantics", ok, why);
}

// --- C7: frozen-frequency limit ----------------------------------------------

void criterion7() {
    const ModelParams params{1.0, 1.0};
    const Mode mode{2.0, 1'000'000'000};
    const double omega0 = mode.omega0(params);
    double worst_drift = 0.0;
    for (double t : linspace(0.0, 10.0, 500))
        worst_drift =
            std::max(worst_drift, std::abs(omega_n(t, mode, params) - omega0) / omega0);

    const OscillatorSystem sys{SystemForm::parametric_r, mode, params};
    const Trajectory traj = integrate(sys, {1.0, 0.5, 0.0, 0.0}, 0.0, 10.0, {});
    const std::vector<double> e = energy_like_diagnostic(traj, sys);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    const double drift = *hi / *lo - 1.0;

    report("C7 frozen-frequency closure", worst_drift < 1e-8 && drift <= 1e-6,
           "frequency drift " + num(worst_drift) + " < 1e-8, energy variation " + num(drift) +
               " <= 1e-6");
}

// --- C8: registry monotonicity and ranking ------------------------------------

void criterion8() {
    const ModelParams params{1.0, 1.0};
    bool ok = true;
    std::string why = "shrinking alive sets, no late gains, high-k ranks first";
    const auto check = [&](bool cond, const char* what) {
        if (ok && !cond) {
            ok = false;
            why = what;
        }
    };

    MemoryRegistry reg(params);
    reg.record_event(StimulusSpectrum{0, {0.6, 1.2, 2.0}, {}}, 0.0);
    reg.record_event(StimulusSpectrum{0, {1.2, 2.5}, {}}, 0.5);

    std::size_t prev = 99;
    std::set<double> prev_k;
    bool first = true;
    for (double t : {0.0, 0.4, 0.9, 1.4, 2.0, 3.0}) {
        const std::vector<Mode> alive = reg.alive_modes(1, t);
        std::set<double> ks;
        for (const Mode& m : alive) ks.insert(m.k);
        if (!first) {
            check(ks.size() <= prev, "alive sets must never grow");
            check(std::includes(prev_k.begin(), prev_k.end(), ks.begin(), ks.end()),
                  "alive sets must shrink by inclusion");
        }
        prev = ks.size();
        prev_k = ks;
        first = false;
    }
    check(reg.alive_modes(1, 3.0).empty(), "all modes must eventually die");

    UniformSampler rng(108);
    for (int trial = 0; trial < 20; ++trial) {
        StimulusSpectrum stim;
        stim.n = rng.uniform_int(0, 3);
        double kv = rng.uniform(0.05, 0.3);
        for (int i = 0; i < 10; ++i) {
            kv += rng.uniform(0.05, 0.9);
            stim.k.push_back(kv);
        }
        MemoryRegistry r2(ModelParams{rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)});
        const MemoryRecord& early = r2.record_event(stim, 0.0);
        const MemoryRecord& late = r2.record_event(stim, rng.uniform(0.2, 2.5));
        std::set<double> ek, lk;
        for (const auto& m : early.modes) ek.insert(m.k);
        for (const auto& m : late.modes) lk.insert(m.k);
        check(std::includes(ek.begin(), ek.end(), lk.begin(), lk.end()),
              "a later identical stimulus must never gain modes");
    }

    const PersistenceReport rep = reg.persistence_report(0.6);
    check(rep.records.size() == 2 && rep.records[0].id == 2,
          "the higher-k record must rank first");
    check(rep.records[0].mean_wavelength < rep.records[1].mean_wavelength,
          "the higher-k record must localize more finely");
    check(!rep.overlaps.empty() && rep.overlaps[0].shared_modes == 1,
          "the shared alive mode must be reported");
    check(reg.persistence_report(0.95).overlaps.empty(),
          "the overlap must disappear once the shared mode dies");

    report("C8 registry monotonicity", ok, why);
}

// --- C9: CLI determinism and exit-code contract --------------------------------

struct CliRun {
    int rc = -1;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.rc = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion9() {
    bool ok = true;
    std::string why = "byte-identical reruns; exit codes 0/1/2 honored";
    const auto check = [&](bool cond, const char* what) {
        if (ok && !cond) {
            ok = false;
            why = what;
        }
    };

    const fs::path dir = fs::temp_directory_path() / "dwq_acceptance";
    fs::create_directories(dir);
    const fs::path cfg = dir / "fixed.cfg";
    {
        std::ofstream f(cfg, std::ios::binary);
        f << "seed = 123\nL = 1.5\n";
    }

    const CliRun v1 = cli({"--config", cfg.string(), "verify", "--samples", "500"});
    const CliRun v2 = cli({"--config", cfg.string(), "verify", "--samples", "500"});
    check(v1.rc == kExitOk, "verify must exit 0 when every check passes");
    check(v1.out == v2.out && !v1.out.empty(), "verify reruns must be byte-identical");

    const fs::path f1 = dir / "fig_a.csv";
    const fs::path f2 = dir / "fig_b.csv";
    check(cli({"--out", f1.string(), "figures"}).rc == kExitOk, "figures must exit 0");
    check(cli({"--out", f2.string(), "figures"}).rc == kExitOk, "figures rerun must exit 0");
    check(slurp(f1) == slurp(f2) && !slurp(f1).empty(),
          "figures reruns must be byte-identical");
    check(slurp(fs::path(f1.string() + ".deadlines.json")) ==
              slurp(fs::path(f2.string() + ".deadlines.json")),
          "sidecar reruns must be byte-identical");

    check(cli({"verify", "--samples", "500", "--inject-fault"}).rc == kExitVerifyFailed,
          "an injected fault must exit 1");
    check(cli({"eval", "--formula", "bogus"}).rc == kExitUsage, "usage errors must exit 2");
    check(cli({"--L", "20", "trace", "--t1", "20", "--init", "0,0,1,1"}).rc == kExitNumeric,
          "numeric failures must exit 3");

    report("C9 CLI determinism", ok, why);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures;
}
