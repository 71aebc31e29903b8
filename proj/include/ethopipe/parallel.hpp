#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ethopipe {

/// Thrown when a pool job fails; carries the identity of the failing job.
/// When several jobs fail concurrently the lowest index is reported.
class PoolJobError : public std::runtime_error {
public:
    PoolJobError(std::size_t job, const std::string& msg, bool io = false)
        : std::runtime_error("job " + std::to_string(job) + " failed: " + msg),
          job_index(job),
          io_error(io) {}
    std::size_t job_index;
    bool io_error;  // underlying failure was an IoError
};

struct PoolRun {
    std::vector<double> busy_s;  // per-worker busy time
    double wall_s = 0;
    int workers = 0;
};

/// Execute `job(i)` for i in [0, item_count) on `workers` threads pulling
/// from a shared dynamic queue (no static striping). Jobs must be pure
/// functions of their index writing only to their own output slot, so the
/// merged result is identical to serial execution in job-index order.
/// The first job failure cancels the pool and is rethrown as PoolJobError.
PoolRun run_pool(std::size_t item_count, int workers,
                 const std::function<void(std::size_t)>& job);

/// Serial reference executor: same contract, job-index order, one worker.
/// Kept alongside the pool so tests can compare outputs directly.
PoolRun run_serial(std::size_t item_count, const std::function<void(std::size_t)>& job);

/// max busy time / mean busy time; 1.0 for an idle or perfectly even pool.
double imbalance_index(const std::vector<double>& busy_s);

struct ScalingRow {
    int workers = 0;
    double wall_time_s = 0;
    double speedup = 0;         // vs the 1-worker row
    double imbalance = 0;       // max/mean busy time
    std::vector<double> utilization;  // per-worker busy fraction of wall time
};

struct ScalingBenchReport {
    std::vector<ScalingRow> rows;
    int plateau_workers = 0;
    bool plateau_observed = false;
};

struct PlateauResult {
    int workers = 0;
    bool observed = false;
};

/// Smallest worker count from which every consecutive marginal gain
/// (T(p) - T(next)) / T(p) stays below eps. Falls back to the largest
/// tested count, flagged unobserved, when no such point exists.
PlateauResult detect_plateau(const std::vector<std::pair<int, double>>& rows, double eps = 0.05);

/// A benchmarkable workload: an optional serial part run once per
/// repetition plus independent items for the pool.
struct Workload {
    std::string name;
    std::function<void()> serial_part;  // may be null
    std::size_t item_count = 0;
    std::function<void(std::size_t)> job;
};

/// Run the workload at each worker count (ascending, starting at 1),
/// >= `repetitions` times each, keeping the median wall time.
ScalingBenchReport bench_scaling(const Workload& workload, const std::vector<int>& worker_counts,
                                 int repetitions = 3, double plateau_eps = 0.05);

/// Default benchmark workload: movement-pattern rendering over `windows`
/// synthetic 45-frame mask sequences.
Workload make_pattern_workload(std::size_t windows);

/// Synthetic workload with an injected serial fraction, built from
/// timed waits so the Amdahl model holds independently of host core count.
Workload make_amdahl_workload(double serial_fraction, std::size_t items, double total_s);

void write_bench_csv(const ScalingBenchReport& report, const std::string& path);
std::string render_speedup_svg(const ScalingBenchReport& report);

}  // namespace ethopipe
