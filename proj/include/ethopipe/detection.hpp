#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ethopipe/annotations.hpp"
#include "ethopipe/image.hpp"

namespace ethopipe {

struct FrameDetection {
    struct Instance {
        Mask mask;
        double confidence = 1.0;  // carried but not thresholded by the protocol
    };
    int frame_index = 0;
    std::vector<Instance> instances;
};

/// Per-frame animal detection boundary. The bundled adapters never consume
/// frame pixels, but every returned mask is validated against the frame
/// dimensions. Implementations must be safe for concurrent use.
class DetectorAdapter {
public:
    virtual ~DetectorAdapter() = default;
    virtual FrameDetection detect(int frame_index, int width, int height) const = 0;
};

FrameDetection detect(const DetectorAdapter& adapter, const Image& frame, int frame_index);

/// Replays ground-truth polygons as detections at confidence 1.0.
/// Frame k maps to the k-th image record in ascending-id order.
class GroundTruthPlayback : public DetectorAdapter {
public:
    explicit GroundTruthPlayback(Dataset dataset);
    FrameDetection detect(int frame_index, int width, int height) const override;
    int frame_count() const { return static_cast<int>(ordered_.size()); }

private:
    Dataset dataset_;
    std::vector<const ImageRecord*> ordered_;
};

/// Reads per-frame sidecar masks `mask_%06d.png` from a directory:
/// 8-bit grayscale, 0 = background, 255 = animal. Multi-instance frames use
/// distinct gray levels 1..254 declared in an `index.jsonl` file whose lines
/// are {"frame": F, "level": L, "instance": I}. Stateless and concurrent-safe.
class ExternalMaskImport : public DetectorAdapter {
public:
    explicit ExternalMaskImport(std::string mask_dir);
    FrameDetection detect(int frame_index, int width, int height) const override;

private:
    std::string dir_;
    std::vector<std::vector<std::pair<int, int>>> levels_by_frame_;  // (level, instance)
};

std::string sidecar_mask_path(const std::string& dir, int frame_index);

/// Writes instances for one frame in the sidecar format above. Appends to
/// `index.jsonl` when more than one instance is present.
void write_mask_sidecar(const std::string& dir, int frame_index, const std::vector<Mask>& instances);

/// coverage = |pred ∩ gt| / |gt|; spill = |pred \ gt| / |pred| (0 when pred
/// is empty). Throws on dimension mismatch or empty ground truth.
std::pair<double, double> coverage_metrics(const Mask& pred, const Mask& gt);

enum class Verdict { accurate, under_detection, over_detection };
const char* verdict_name(Verdict v);

struct CoverageReport {
    double coverage = 0;
    double spill = 0;
    Verdict verdict = Verdict::accurate;
    bool is_under = false;
    bool is_over = false;
};

/// The detector-accuracy rule: accurate iff coverage >= 0.95 and
/// spill <= 0.05 (inclusive bounds). A frame failing both records both
/// flags with verdict under_detection.
CoverageReport classify_detection(double coverage, double spill);

/// Frame-level protocol for multi-instance frames: predictions are matched
/// to ground-truth instances by maximal intersection, greedily, one-to-one;
/// unmatched predictions count as pure spill.
CoverageReport evaluate_frame(const FrameDetection& pred, const std::vector<Mask>& gt_instances);

/// n distinct frame indices drawn uniformly without replacement,
/// deterministic in seed, returned sorted ascending.
std::vector<int> sample_review_frames(int frame_count, int n, std::uint64_t seed);

struct VideoAccuracyReport {
    std::string video_id;
    int n_frames_evaluated = 0;
    int n_accurate = 0;
    int n_under = 0;
    int n_over = 0;
    double accuracy = 0;  // n_accurate / n_frames_evaluated
};

VideoAccuracyReport video_accuracy(const std::string& video_id,
                                   const std::vector<CoverageReport>& reports);

/// Mean and population standard deviation of per-video accuracies.
std::pair<double, double> aggregate_accuracy(const std::vector<VideoAccuracyReport>& reports);

}  // namespace ethopipe
