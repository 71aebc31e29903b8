#include "ethopipe/detection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "ethopipe/errors.hpp"
#include "ethopipe/imageio.hpp"
#include "ethopipe/rng.hpp"

namespace ethopipe {

FrameDetection detect(const DetectorAdapter& adapter, const Image& frame, int frame_index) {
    return adapter.detect(frame_index, frame.width, frame.height);
}

GroundTruthPlayback::GroundTruthPlayback(Dataset dataset) : dataset_(std::move(dataset)) {
    std::set<std::string> cats(dataset_.categories.begin(), dataset_.categories.end());
    if (cats.size() > 1)
        throw ValidationError(
            "ground-truth playback requires a single animal category per run; found " +
            std::to_string(cats.size()));
    for (const auto& rec : dataset_.images) ordered_.push_back(&rec);
    std::sort(ordered_.begin(), ordered_.end(),
              [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });
}

FrameDetection GroundTruthPlayback::detect(int frame_index, int width, int height) const {
    if (frame_index < 0 || frame_index >= static_cast<int>(ordered_.size()))
        throw ValidationError("playback has no annotations for frame " +
                              std::to_string(frame_index));
    const ImageRecord* rec = ordered_[frame_index];
    if (rec->width != width || rec->height != height)
        throw ValidationError("annotation record " + std::to_string(rec->width) + "x" +
                              std::to_string(rec->height) + " does not match frame " +
                              std::to_string(width) + "x" + std::to_string(height) + " (frame " +
                              std::to_string(frame_index) + ")");
    FrameDetection det;
    det.frame_index = frame_index;
    for (const auto* ann : dataset_.annotations_for(rec->id))
        det.instances.push_back({rasterize_polygon(ann->polygon, width, height), 1.0});
    return det;
}

std::string sidecar_mask_path(const std::string& dir, int frame_index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "mask_%06d.png", frame_index);
    return dir + "/" + buf;
}

ExternalMaskImport::ExternalMaskImport(std::string mask_dir) : dir_(std::move(mask_dir)) {
    const std::string index_path = dir_ + "/index.jsonl";
    std::ifstream in(index_path);
    if (!in) return;  // single-instance convention throughout
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("mask index line " + std::to_string(line_no) + ": " + e.what());
        }
        const int frame = j.at("frame").get<int>();
        const int level = j.at("level").get<int>();
        const int instance = j.at("instance").get<int>();
        if (frame < 0 || level < 1 || level > 254)
            throw ValidationError("mask index line " + std::to_string(line_no) +
                                  ": frame must be >= 0 and level in 1..254");
        if (frame >= static_cast<int>(levels_by_frame_.size()))
            levels_by_frame_.resize(frame + 1);
        levels_by_frame_[frame].push_back({level, instance});
    }
}

FrameDetection ExternalMaskImport::detect(int frame_index, int width, int height) const {
    const std::string path = sidecar_mask_path(dir_, frame_index);
    if (!std::filesystem::exists(path))
        throw IoError("missing mask file for frame " + std::to_string(frame_index) + ": " + path);
    const GrayImage g = read_gray_png(path);
    if (g.width != width || g.height != height)
        throw ValidationError("mask sized " + std::to_string(g.width) + "x" +
                              std::to_string(g.height) + " does not match frame " +
                              std::to_string(width) + "x" + std::to_string(height) + " (frame " +
                              std::to_string(frame_index) + ")");

    FrameDetection det;
    det.frame_index = frame_index;
    const bool indexed = frame_index < static_cast<int>(levels_by_frame_.size()) &&
                         !levels_by_frame_[frame_index].empty();
    if (indexed) {
        for (const auto& [level, instance] : levels_by_frame_[frame_index])
            det.instances.push_back({gray_to_mask(g, static_cast<std::uint8_t>(level)), 1.0});
    } else {
        Mask m(g.width, g.height);
        for (std::size_t i = 0; i < g.px.size(); ++i) m.bits[i] = g.px[i] != 0;
        det.instances.push_back({std::move(m), 1.0});
    }
    return det;
}

void write_mask_sidecar(const std::string& dir, int frame_index,
                        const std::vector<Mask>& instances) {
    if (instances.empty()) throw ValidationError("write_mask_sidecar: no instances");
    if (instances.size() > 254) throw ValidationError("write_mask_sidecar: too many instances");
    GrayImage g;
    g.width = instances[0].width;
    g.height = instances[0].height;
    g.px.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    if (instances.size() == 1) {
        for (std::size_t i = 0; i < instances[0].bits.size(); ++i)
            if (instances[0].bits[i]) g.px[i] = 255;
    } else {
        std::ofstream index(dir + "/index.jsonl", std::ios::app);
        if (!index) throw IoError("cannot write mask index in " + dir);
        for (std::size_t k = 0; k < instances.size(); ++k) {
            const Mask& m = instances[k];
            if (m.width != g.width || m.height != g.height)
                throw ValidationError("write_mask_sidecar: instance dimensions differ");
            const int level = static_cast<int>(k) + 1;
            for (std::size_t i = 0; i < m.bits.size(); ++i)
                if (m.bits[i]) g.px[i] = static_cast<std::uint8_t>(level);
            index << "{\"frame\":" << frame_index << ",\"level\":" << level
                  << ",\"instance\":" << k << "}\n";
        }
    }
    write_gray_png(sidecar_mask_path(dir, frame_index), g);
}

std::pair<double, double> coverage_metrics(const Mask& pred, const Mask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw ValidationError("coverage_metrics: mask dimensions differ");
    std::size_t inter = 0, pred_n = 0, gt_n = 0;
    for (std::size_t i = 0; i < gt.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
        inter += p && g;
        pred_n += p;
        gt_n += g;
    }
    if (gt_n == 0) throw ValidationError("coverage_metrics: empty ground-truth mask");
    const double coverage = static_cast<double>(inter) / static_cast<double>(gt_n);
    const double spill =
        pred_n == 0 ? 0.0 : static_cast<double>(pred_n - inter) / static_cast<double>(pred_n);
    return {coverage, spill};
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::accurate: return "accurate";
        case Verdict::under_detection: return "under_detection";
        case Verdict::over_detection: return "over_detection";
    }
    return "?";
}

CoverageReport classify_detection(double coverage, double spill) {
    if (coverage < 0 || coverage > 1 || spill < 0 || spill > 1)
        throw ValidationError("classify_detection: coverage and spill must lie in [0,1]");
    CoverageReport r;
    r.coverage = coverage;
    r.spill = spill;
    r.is_under = coverage < 0.95;
    r.is_over = spill > 0.05;
    // Under-detection takes precedence when both flags hold.
    r.verdict = r.is_under ? Verdict::under_detection
                           : (r.is_over ? Verdict::over_detection : Verdict::accurate);
    return r;
}

CoverageReport evaluate_frame(const FrameDetection& pred, const std::vector<Mask>& gt_instances) {
    std::size_t gt_total = 0;
    for (const Mask& g : gt_instances) gt_total += g.count();
    if (gt_total == 0) throw ValidationError("evaluate_frame: empty ground truth");

    std::vector<std::size_t> pred_counts;
    for (const auto& inst : pred.instances) {
        for (const Mask& g : gt_instances)
            if (inst.mask.width != g.width || inst.mask.height != g.height)
                throw ValidationError("evaluate_frame: mask dimensions differ");
        pred_counts.push_back(inst.mask.count());
    }

    // All pairwise intersections, then greedy one-to-one matching by
    // descending intersection (ties broken by pred index, then gt index).
    struct PairInter {
        std::size_t inter;
        std::size_t pi, gi;
    };
    std::vector<PairInter> pairs;
    for (std::size_t pi = 0; pi < pred.instances.size(); ++pi) {
        const Mask& p = pred.instances[pi].mask;
        for (std::size_t gi = 0; gi < gt_instances.size(); ++gi) {
            const Mask& g = gt_instances[gi];
            std::size_t inter = 0;
            for (std::size_t i = 0; i < p.bits.size(); ++i) inter += (p.bits[i] && g.bits[i]);
            pairs.push_back({inter, pi, gi});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const PairInter& a, const PairInter& b) {
        if (a.inter != b.inter) return a.inter > b.inter;
        if (a.pi != b.pi) return a.pi < b.pi;
        return a.gi < b.gi;
    });

    std::vector<bool> pred_used(pred.instances.size(), false);
    std::vector<bool> gt_used(gt_instances.size(), false);
    std::size_t covered = 0;
    std::vector<std::size_t> matched_inter(pred.instances.size(), 0);
    for (const auto& pr : pairs) {
        if (pr.inter == 0 || pred_used[pr.pi] || gt_used[pr.gi]) continue;
        pred_used[pr.pi] = true;
        gt_used[pr.gi] = true;
        covered += pr.inter;
        matched_inter[pr.pi] = pr.inter;
    }

    std::size_t pred_total = 0, spill_px = 0;
    for (std::size_t pi = 0; pi < pred_counts.size(); ++pi) {
        pred_total += pred_counts[pi];
        spill_px += pred_counts[pi] - matched_inter[pi];  // unmatched => pure spill
    }

    const double coverage = static_cast<double>(covered) / static_cast<double>(gt_total);
    const double spill =
        pred_total == 0 ? 0.0 : static_cast<double>(spill_px) / static_cast<double>(pred_total);
    return classify_detection(coverage, spill);
}

std::vector<int> sample_review_frames(int frame_count, int n, std::uint64_t seed) {
    if (n < 0 || n > frame_count)
        throw ValidationError("sample_review_frames: n must lie in [0, frame_count]");
    std::vector<int> idx(frame_count);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed, 0x5eed, 0);
    for (int i = 0; i < n; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(frame_count - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    return idx;
}

VideoAccuracyReport video_accuracy(const std::string& video_id,
                                   const std::vector<CoverageReport>& reports) {
    if (reports.empty()) throw ValidationError("video_accuracy: no coverage reports");
    VideoAccuracyReport r;
    r.video_id = video_id;
    r.n_frames_evaluated = static_cast<int>(reports.size());
    for (const auto& c : reports) {
        switch (c.verdict) {
            case Verdict::accurate: ++r.n_accurate; break;
            case Verdict::under_detection: ++r.n_under; break;
            case Verdict::over_detection: ++r.n_over; break;
        }
    }
    r.accuracy = static_cast<double>(r.n_accurate) / r.n_frames_evaluated;
    return r;
}

std::pair<double, double> aggregate_accuracy(const std::vector<VideoAccuracyReport>& reports) {
    if (reports.empty()) throw ValidationError("aggregate_accuracy: no reports");
    double mean = 0;
    for (const auto& r : reports) mean += r.accuracy;
    mean /= static_cast<double>(reports.size());
    double var = 0;
    for (const auto& r : reports) var += (r.accuracy - mean) * (r.accuracy - mean);
    var /= static_cast<double>(reports.size());  // population SD
    return {mean, std::sqrt(var)};
}

}  // namespace ethopipe
