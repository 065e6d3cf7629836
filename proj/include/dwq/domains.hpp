#ifndef DWQ_DOMAINS_HPP
#define DWQ_DOMAINS_HPP

/*
 * Memory-event bookkeeping on top of the closed-form mode laws.
 *
 * A stimulus carries a spectrum of wavenumbers at one openness level n.
 * Recording at time t keeps exactly the modes satisfying the reality
 * condition k >= k_tilde(n, t); each survivor gets an absolute death time
 * t + T_{k,n} (the deadline restarts at the recording instant, so every
 * record carries its own time origin). Records are append-only and the
 * registry clock never moves backward.
 *
 * Weights are a reporting convenience only: they shape the mean-wavelength
 * localization figure in persistence reports but never decide survival.
 */

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "dwq/model.hpp"

namespace dwq {

/// Curves are emitted only while Lambda <= this clip value by default
/// (e^{-2*30} is already below meaningful double resolution).
inline constexpr double kDefaultLambdaMax = 30.0;

/// One stimulus: a set of distinct wavenumbers sharing a single openness n,
/// with optional positive per-mode weights (same length as k when present).
struct StimulusSpectrum {
    std::int64_t n = 0;
    std::vector<double> k;
    std::vector<double> weights;

    void validate() const;
};

/// A surviving mode inside a record.
struct RecordedMode {
    double k = 0.0;
    double weight = 1.0;
    double death_time = 0.0;  ///< absolute: t_recorded + T_{k,n}
};

/// Result of one recording event. modes is sorted by k ascending and holds
/// only the survivors; rejected_count says how many spectrum entries failed
/// the reality condition at t_recorded.
struct MemoryRecord {
    std::uint64_t id = 0;
    double t_recorded = 0.0;
    std::int64_t n = 0;
    std::vector<RecordedMode> modes;
    std::size_t rejected_count = 0;

    bool empty() const { return modes.empty(); }
    /// Latest absolute death time; t_recorded itself for an empty record.
    double max_death_time() const;
};

/// Per-record slice of a persistence report.
struct RecordSummary {
    std::uint64_t id = 0;
    double t_recorded = 0.0;
    std::int64_t n = 0;
    std::size_t recorded_count = 0;
    std::size_t alive_count = 0;
    double alive_fraction = 0.0;  ///< alive/recorded, 0 for empty records
    double max_death_time = 0.0;
    double domain_size = 0.0;     ///< lambda_tilde(n, t) at the report time
    double mean_wavelength = 0.0; ///< weighted mean 2*pi/k over alive modes, 0 if none
};

/// Alive-mode overlap between two records: count of identical (n, k) pairs
/// alive in both at the report time. Association/confusion of memories is
/// surfaced only through this count.
struct OverlapNote {
    std::uint64_t id_a = 0;
    std::uint64_t id_b = 0;
    std::size_t shared_modes = 0;
};

/// Records sorted most-persistent-first (max death time descending, id
/// ascending on ties); only records with t_recorded <= t are included.
struct PersistenceReport {
    double t = 0.0;
    std::vector<RecordSummary> records;
    std::vector<OverlapNote> overlaps;  ///< pairs with shared_modes > 0 only
};

/// Append-only record store with a non-decreasing clock. Single writer;
/// records live in a deque, so references stay valid across later appends.
class MemoryRegistry {
public:
    explicit MemoryRegistry(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    double clock() const { return clock_; }
    const std::deque<MemoryRecord>& records() const { return records_; }

    /// Record a stimulus at time t >= clock(); advances the clock to t.
    /// Throws clock_error on time regression. The returned record may be
    /// empty (all modes below threshold).
    const MemoryRecord& record_event(const StimulusSpectrum& spectrum, double t);

    /// Modes of one record still alive at t (death time strictly greater).
    /// Requires t >= the record's t_recorded. Unknown id -> std::out_of_range.
    std::vector<Mode> alive_modes(std::uint64_t id, double t) const;

    PersistenceReport persistence_report(double t) const;

    const MemoryRecord& find(std::uint64_t id) const;

private:
    ModelParams params_;
    double clock_ = 0.0;
    std::deque<MemoryRecord> records_;
};

/// One sampled lifetime curve Lambda_{k,n}(t). Samples stop at the clip
/// value lambda_max; the divergence abscissa is carried separately as
/// `deadline` so plots can draw the asymptote.
struct LifetimeCurve {
    double k = 0.0;
    std::int64_t n = 0;
    bool recordable = false;
    double deadline = 0.0;  ///< T_{k,n}; meaningless when !recordable
    std::vector<double> t;
    std::vector<double> lambda;
};

struct CurveFamily {
    std::vector<LifetimeCurve> curves;
    std::vector<std::string> warnings;  ///< one entry per skipped non-recordable mode
};

/// Lifetime curves for several k at fixed n, sampled on t_grid (strictly
/// increasing, starting at >= 0). Non-recordable k are skipped with a warning.
CurveFamily fig1_curves(const std::vector<double>& k_list, std::int64_t n,
                        const ModelParams& params, const std::vector<double>& t_grid,
                        double lambda_max = kDefaultLambdaMax);

/// Lifetime curves for several n at fixed k; roles exchanged relative to
/// fig1_curves.
CurveFamily fig2_curves(const std::vector<std::int64_t>& n_list, double k,
                        const ModelParams& params, const std::vector<double>& t_grid,
                        double lambda_max = kDefaultLambdaMax);

}  // namespace dwq

#endif  // DWQ_DOMAINS_HPP
