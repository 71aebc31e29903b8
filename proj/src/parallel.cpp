#include "ethopipe/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "ethopipe/errors.hpp"
#include "ethopipe/patterns.hpp"
#include "ethopipe/svg.hpp"

namespace ethopipe {

PoolRun run_pool(std::size_t item_count, int workers,
                 const std::function<void(std::size_t)>& job) {
    if (workers < 1) throw ValidationError("run_pool: worker count must be >= 1");

    PoolRun run;
    run.workers = workers;
    run.busy_s.assign(workers, 0.0);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> cancel{false};
    std::mutex err_mutex;
    std::size_t err_index = static_cast<std::size_t>(-1);
    std::string err_msg;
    bool err_io = false;

    auto record_error = [&](std::size_t i, const std::string& msg, bool io) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < err_index) {
            err_index = i;
            err_msg = msg;
            err_io = io;
        }
        cancel.store(true, std::memory_order_relaxed);
    };

    omp_set_dynamic(0);
    const double t0 = omp_get_wtime();
#pragma omp parallel num_threads(workers)
    {
        const int w = omp_get_thread_num();
        double busy = 0.0;
        while (!cancel.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= item_count) break;
            const double s = omp_get_wtime();
            try {
                job(i);
            } catch (const IoError& e) {
                record_error(i, e.what(), true);
            } catch (const std::exception& e) {
                record_error(i, e.what(), false);
            } catch (...) {
                record_error(i, "unknown error", false);
            }
            busy += omp_get_wtime() - s;
        }
        if (w < workers) run.busy_s[w] = busy;  // team may be capped by the runtime
    }
    run.wall_s = omp_get_wtime() - t0;
    if (err_index != static_cast<std::size_t>(-1)) throw PoolJobError(err_index, err_msg, err_io);
    return run;
}

PoolRun run_serial(std::size_t item_count, const std::function<void(std::size_t)>& job) {
    PoolRun run;
    run.workers = 1;
    run.busy_s.assign(1, 0.0);
    const double t0 = omp_get_wtime();
    for (std::size_t i = 0; i < item_count; ++i) {
        const double s = omp_get_wtime();
        try {
            job(i);
        } catch (const PoolJobError&) {
            throw;
        } catch (const IoError& e) {
            throw PoolJobError(i, e.what(), true);
        } catch (const std::exception& e) {
            throw PoolJobError(i, e.what());
        }
        run.busy_s[0] += omp_get_wtime() - s;
    }
    run.wall_s = omp_get_wtime() - t0;
    return run;
}

double imbalance_index(const std::vector<double>& busy_s) {
    if (busy_s.empty()) return 1.0;
    double sum = 0.0, max = 0.0;
    for (double b : busy_s) {
        sum += b;
        max = std::max(max, b);
    }
    const double mean = sum / static_cast<double>(busy_s.size());
    if (mean <= 0.0) return 1.0;
    return max / mean;
}

PlateauResult detect_plateau(const std::vector<std::pair<int, double>>& rows, double eps) {
    if (rows.size() < 2) throw ValidationError("detect_plateau: need at least 2 rows");
    const std::size_t m = rows.size();
    // suffix_ok[i]: every consecutive marginal gain from row i onward is < eps
    std::vector<bool> suffix_ok(m, true);
    for (std::size_t i = m - 1; i-- > 0;) {
        const double gain = (rows[i].second - rows[i + 1].second) / rows[i].second;
        suffix_ok[i] = gain < eps && suffix_ok[i + 1];
    }
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (suffix_ok[i]) return {rows[i].first, true};
    return {rows.back().first, false};  // "no plateau observed"
}

ScalingBenchReport bench_scaling(const Workload& workload, const std::vector<int>& worker_counts,
                                 int repetitions, double plateau_eps) {
    if (worker_counts.empty()) throw ValidationError("bench_scaling: empty worker_counts");
    if (worker_counts.front() != 1)
        throw ValidationError("bench_scaling: worker_counts must start at 1");
    for (std::size_t i = 1; i < worker_counts.size(); ++i)
        if (worker_counts[i] <= worker_counts[i - 1])
            throw ValidationError("bench_scaling: worker_counts must be ascending");
    if (repetitions < 1) throw ValidationError("bench_scaling: repetitions must be >= 1");

    ScalingBenchReport report;
    for (int workers : worker_counts) {
        std::vector<std::pair<double, PoolRun>> reps;
        for (int r = 0; r < repetitions; ++r) {
            const double t0 = omp_get_wtime();
            if (workload.serial_part) workload.serial_part();
            PoolRun pr = run_pool(workload.item_count, workers, workload.job);
            const double wall = omp_get_wtime() - t0;
            reps.push_back({wall, std::move(pr)});
        }
        // lower median keeps a matching busy-time vector attached
        std::sort(reps.begin(), reps.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const auto& med = reps[(reps.size() - 1) / 2];

        ScalingRow row;
        row.workers = workers;
        row.wall_time_s = med.first;
        row.imbalance = imbalance_index(med.second.busy_s);
        for (double b : med.second.busy_s) row.utilization.push_back(b / med.first);
        report.rows.push_back(std::move(row));
    }
    const double t1 = report.rows.front().wall_time_s;
    for (auto& row : report.rows) row.speedup = t1 / row.wall_time_s;

    std::vector<std::pair<int, double>> times;
    for (const auto& row : report.rows) times.push_back({row.workers, row.wall_time_s});
    if (times.size() >= 2) {
        const PlateauResult p = detect_plateau(times, plateau_eps);
        report.plateau_workers = p.workers;
        report.plateau_observed = p.observed;
    } else {
        report.plateau_workers = worker_counts.front();
        report.plateau_observed = false;
    }
    return report;
}

namespace {

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Workload make_pattern_workload(std::size_t windows) {
    auto sink = std::make_shared<std::vector<std::uint64_t>>(windows, 0);
    Workload w;
    w.name = "pattern-render";
    w.item_count = windows;
    w.job = [sink](std::size_t i) {
        // A synthetic 45-frame window: a square blob wandering over a 96x96
        // grid, deterministic in the window index.
        Animation anim;
        anim.video_id = "synthetic";
        anim.start_frame = static_cast<int>(i);
        const int T = 45, side = 12, grid = 96;
        for (int t = 0; t < T; ++t) {
            Mask m(grid, grid);
            const int cx = 8 + static_cast<int>((i * 7 + static_cast<std::size_t>(t) * 2) % 68);
            const int cy = 8 + static_cast<int>((i * 13 + static_cast<std::size_t>(t) * 3) % 68);
            for (int y = cy; y < cy + side; ++y)
                for (int x = cx; x < cx + side; ++x) m.set(x, y, 1);
            anim.masks.push_back(std::move(m));
        }
        const MovementPattern pat = render_movement_pattern(anim);
        (*sink)[i] = fnv1a64(pat.canvas.px.data(), pat.canvas.px.size());
    };
    return w;
}

Workload make_amdahl_workload(double serial_fraction, std::size_t items, double total_s) {
    if (serial_fraction < 0 || serial_fraction > 1)
        throw ValidationError("make_amdahl_workload: serial fraction must lie in [0,1]");
    if (items == 0) throw ValidationError("make_amdahl_workload: items must be >= 1");
    Workload w;
    w.name = "amdahl-synthetic";
    const double serial_s = serial_fraction * total_s;
    const double job_s = (1.0 - serial_fraction) * total_s / static_cast<double>(items);
    w.serial_part = [serial_s] {
        std::this_thread::sleep_for(std::chrono::duration<double>(serial_s));
    };
    w.item_count = items;
    w.job = [job_s](std::size_t) {
        std::this_thread::sleep_for(std::chrono::duration<double>(job_s));
    };
    return w;
}

void write_bench_csv(const ScalingBenchReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write benchmark report: " + path);
    out << "workers,wall_time_s,speedup,imbalance_index\n";
    char buf[160];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.4f,%.4f\n", row.workers, row.wall_time_s,
                      row.speedup, row.imbalance);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string render_speedup_svg(const ScalingBenchReport& report) {
    const double W = 640, H = 420, ml = 60, mr = 20, mt = 20, mb = 50;
    SvgDoc svg(W, H);
    if (report.rows.empty()) return svg.str();

    double max_workers = 1, max_speedup = 1;
    for (const auto& row : report.rows) {
        max_workers = std::max(max_workers, static_cast<double>(row.workers));
        max_speedup = std::max(max_speedup, row.speedup);
    }
    max_speedup = std::max(max_speedup, 1.0) * 1.1;

    auto px = [&](double workers) { return ml + (workers - 1) / std::max(max_workers - 1, 1.0) * (W - ml - mr); };
    auto py = [&](double speedup) { return H - mb - speedup / max_speedup * (H - mt - mb); };

    svg.line(ml, H - mb, W - mr, H - mb, "black");
    svg.line(ml, H - mb, ml, mt, "black");
    svg.text(W / 2, H - 12, "workers", 12, "middle");
    svg.text(14, mt + 10, "speedup", 12, "start");

    // ideal linear scaling for reference
    svg.polyline({{px(1), py(1)}, {px(max_workers), py(std::min(max_workers, max_speedup))}},
                 "#bbbbbb", 1.0);

    std::vector<std::pair<double, double>> pts;
    for (const auto& row : report.rows) {
        pts.push_back({px(row.workers), py(row.speedup)});
        svg.text(px(row.workers), H - mb + 16, std::to_string(row.workers), 11, "middle");
        svg.rect(px(row.workers) - 2.5, py(row.speedup) - 2.5, 5, 5, "#1f4f9f");
    }
    svg.polyline(pts, "#1f4f9f", 1.5);
    if (report.plateau_observed)
        svg.text(px(report.plateau_workers), mt + 12,
                 "plateau @" + std::to_string(report.plateau_workers), 11, "middle");
    return svg.str();
}

}  // namespace ethopipe
