#include "dwq/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dwq/errors.hpp"
#include "dwq/formulas.hpp"

namespace dwq {

void StimulusSpectrum::validate() const {
    if (n < 0) throw std::invalid_argument("StimulusSpectrum: openness n must be >= 0");
    if (k.empty()) throw std::invalid_argument("StimulusSpectrum: spectrum must be non-empty");
    for (double kv : k)
        if (!(kv > 0.0) || !std::isfinite(kv))
            throw std::invalid_argument("StimulusSpectrum: every k must be positive and finite");
    auto sorted = k;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("StimulusSpectrum: duplicate k in one event");
    if (!weights.empty()) {
        if (weights.size() != k.size())
            throw std::invalid_argument("StimulusSpectrum: weights must match k in length");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("StimulusSpectrum: weights must be positive and finite");
    }
}

double MemoryRecord::max_death_time() const {
    double m = t_recorded;
    for (const auto& rm : modes) m = std::max(m, rm.death_time);
    return m;
}

MemoryRegistry::MemoryRegistry(const ModelParams& params) : params_(params) {
    params_.validate();
}

const MemoryRecord& MemoryRegistry::record_event(const StimulusSpectrum& spectrum, double t) {
    spectrum.validate();
    if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument("record_event: t must be finite and >= 0");
    if (t < clock_)
        throw clock_error("record_event: time regression (t = " + std::to_string(t) +
                          " < clock = " + std::to_string(clock_) + ")");

    const double threshold = k_threshold(spectrum.n, t, params_);

    MemoryRecord rec;
    rec.id = static_cast<std::uint64_t>(records_.size()) + 1;
    rec.t_recorded = t;
    rec.n = spectrum.n;
    for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
        const double kv = spectrum.k[i];
        const RecordingWindow win = recording_deadline(spectrum.n, kv * params_.wave_speed, params_);
        if (!win.recordable || kv < threshold) {
            ++rec.rejected_count;
            continue;
        }
        RecordedMode rm;
        rm.k = kv;
        rm.weight = spectrum.weights.empty() ? 1.0 : spectrum.weights[i];
        rm.death_time = t + *win.deadline;
        rec.modes.push_back(rm);
    }
    std::sort(rec.modes.begin(), rec.modes.end(),
              [](const RecordedMode& a, const RecordedMode& b) { return a.k < b.k; });

    clock_ = t;
    records_.push_back(std::move(rec));
    return records_.back();
}

const MemoryRecord& MemoryRegistry::find(std::uint64_t id) const {
    if (id == 0 || id > records_.size())
        throw std::out_of_range("MemoryRegistry: unknown record id " + std::to_string(id));
    return records_[id - 1];
}

std::vector<Mode> MemoryRegistry::alive_modes(std::uint64_t id, double t) const {
    const MemoryRecord& rec = find(id);
    if (!std::isfinite(t) || t < rec.t_recorded)
        throw std::invalid_argument("alive_modes: t must be >= the record's t_recorded");
    std::vector<Mode> out;
    for (const auto& rm : rec.modes)
        if (rm.death_time > t) out.push_back(Mode{rm.k, rec.n});
    return out;
}

PersistenceReport MemoryRegistry::persistence_report(double t) const {
    if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument("persistence_report: t must be finite and >= 0");

    PersistenceReport report;
    report.t = t;
    for (const auto& rec : records_) {
        if (rec.t_recorded > t) continue;
        RecordSummary s;
        s.id = rec.id;
        s.t_recorded = rec.t_recorded;
        s.n = rec.n;
        s.recorded_count = rec.modes.size();
        s.max_death_time = rec.max_death_time();
        s.domain_size = domain_size(rec.n, t, params_);
        double wsum = 0.0, lsum = 0.0;
        for (const auto& rm : rec.modes) {
            if (rm.death_time > t) {
                ++s.alive_count;
                wsum += rm.weight;
                lsum += rm.weight * (kTwoPi / rm.k);
            }
        }
        s.alive_fraction = s.recorded_count
                               ? static_cast<double>(s.alive_count) /
                                     static_cast<double>(s.recorded_count)
                               : 0.0;
        s.mean_wavelength = (wsum > 0.0) ? lsum / wsum : 0.0;
        report.records.push_back(s);
    }
    std::sort(report.records.begin(), report.records.end(),
              [](const RecordSummary& a, const RecordSummary& b) {
                  if (a.max_death_time != b.max_death_time)
                      return a.max_death_time > b.max_death_time;
                  return a.id < b.id;
              });

    // Overlaps: identical (n, k) alive in both records. Quadratic scan; the
    // registry is a desk-scale structure.
    for (std::size_t a = 0; a < report.records.size(); ++a) {
        for (std::size_t b = a + 1; b < report.records.size(); ++b) {
            const MemoryRecord& ra = find(report.records[a].id);
            const MemoryRecord& rb = find(report.records[b].id);
            if (ra.n != rb.n) continue;
            std::size_t shared = 0;
            for (const auto& ma : ra.modes) {
                if (ma.death_time <= t) continue;
                for (const auto& mb : rb.modes)
                    if (mb.death_time > t && mb.k == ma.k) ++shared;
            }
            if (shared > 0) {
                const std::uint64_t lo = std::min(ra.id, rb.id);
                const std::uint64_t hi = std::max(ra.id, rb.id);
                report.overlaps.push_back(OverlapNote{lo, hi, shared});
            }
        }
    }
    std::sort(report.overlaps.begin(), report.overlaps.end(),
              [](const OverlapNote& x, const OverlapNote& y) {
                  return x.id_a != y.id_a ? x.id_a < y.id_a : x.id_b < y.id_b;
              });
    return report;
}

namespace {

void check_t_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("lifetime curves: empty t grid");
    double prev = -1.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < 0.0 || t <= prev)
            throw std::invalid_argument(
                "lifetime curves: t grid must be strictly increasing and >= 0");
        prev = t;
    }
}

LifetimeCurve sample_curve(double k, std::int64_t n, const ModelParams& params,
                           const std::vector<double>& t_grid, double lambda_max) {
    LifetimeCurve c;
    c.k = k;
    c.n = n;
    const Mode mode{k, n};
    const RecordingWindow win = recording_deadline(mode, params);
    c.recordable = win.recordable;
    if (!win.recordable) return c;
    c.deadline = *win.deadline;
    for (double t : t_grid) {
        if (!(t < c.deadline)) break;
        const double lam = lifetime_lambda(t, mode, params);
        if (lam > lambda_max) break;
        c.t.push_back(t);
        c.lambda.push_back(lam);
    }
    return c;
}

}  // namespace

CurveFamily fig1_curves(const std::vector<double>& k_list, std::int64_t n,
                        const ModelParams& params, const std::vector<double>& t_grid,
                        double lambda_max) {
    params.validate();
    check_t_grid(t_grid);
    if (k_list.empty()) throw std::invalid_argument("fig1_curves: empty k list");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("fig1_curves: lambda_max must be > 0");
    CurveFamily fam;
    for (double k : k_list) {
        LifetimeCurve c = sample_curve(k, n, params, t_grid, lambda_max);
        if (!c.recordable) {
            fam.warnings.push_back("k = " + std::to_string(k) +
                                   ": not recordable (2 k c / L <= 1), curve skipped");
            continue;
        }
        fam.curves.push_back(std::move(c));
    }
    return fam;
}

CurveFamily fig2_curves(const std::vector<std::int64_t>& n_list, double k,
                        const ModelParams& params, const std::vector<double>& t_grid,
                        double lambda_max) {
    params.validate();
    check_t_grid(t_grid);
    if (n_list.empty()) throw std::invalid_argument("fig2_curves: empty n list");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("fig2_curves: lambda_max must be > 0");
    CurveFamily fam;
    for (std::int64_t n : n_list) {
        LifetimeCurve c = sample_curve(k, n, params, t_grid, lambda_max);
        if (!c.recordable) {
            fam.warnings.push_back("n = " + std::to_string(n) +
                                   ": not recordable (2 k c / L <= 1), curve skipped");
            continue;
        }
        fam.curves.push_back(std::move(c));
    }
    return fam;
}

}  // namespace dwq
