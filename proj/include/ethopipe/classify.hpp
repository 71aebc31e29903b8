#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ethopipe/detection.hpp"
#include "ethopipe/patterns.hpp"

namespace ethopipe {

inline constexpr int kFeatureCount = 8;

/// Hand-defined motion features of an (animation, movement-pattern) pair.
/// Centroids are mask pixel centroids; "successive" walks the nonempty-mask
/// frames in order, so gaps chain rather than reset:
///   0: mean centroid speed (px/frame between successive nonempty frames)
///      divided by the union bounding-box diagonal
///   1: straightness = |net displacement| / path length (0 when path = 0)
///   2: coefficient of variation of mask area (population SD / mean)
///   3: mean |delta area| between successive frames / mean area
///   4: mean bounding-box aspect ratio (w/h) over nonempty frames
///   5: mean mask IoU between adjacent nonempty frames
///   6: pattern ink fraction (non-white share of the pattern canvas)
///   7: |horizontal| / (|horizontal| + |vertical|) net displacement share
///      (0.5 when both are 0)
/// Fewer than two nonempty masks zero the motion features and set the
/// low_signal flag.
struct FeatureVector {
    std::array<double, kFeatureCount> v{};
    bool low_signal = false;
};

FeatureVector extract_features(const Animation& anim, const MovementPattern& pattern);

struct CategoriserModel {
    std::vector<std::string> categories;                 // K >= 2
    std::array<double, kFeatureCount> feature_mean{};
    std::array<double, kFeatureCount> feature_sd{};      // zero-variance stored as 1
    std::array<bool, kFeatureCount> zero_variance{};
    std::vector<std::array<double, kFeatureCount + 1>> weights;  // K rows, last = bias
    int iterations = 0;
    double final_loss = 0;
    std::uint64_t seed = 0;
};

struct TrainOptions {
    double eta = 0.1;
    int iterations = 2000;
    double lambda = 1e-3;
    std::uint64_t seed = 0;
};

struct TrainingSet {
    std::vector<std::string> categories;
    std::vector<FeatureVector> features;
    std::vector<int> labels;  // index into categories
};

/// L2-regularized multinomial cross-entropy on z-normalized features,
/// minimized by full-batch gradient descent from zero weights. The loss is
/// mean-normalized and accumulated pairwise, so training is order-robust
/// and duplicating every example leaves the final weights unchanged.
/// A loss increase beyond 1e-12 halves eta and restarts once, then fails.
CategoriserModel train_baseline(const TrainingSet& set, const TrainOptions& opts = {});

/// Training objective on pre-normalized inputs (bias column included):
/// mean cross-entropy + (lambda/2)*||W||^2 over non-bias weights.
/// Exposed so tests can difference it against the analytic gradient.
double softmax_loss_gradient(const std::vector<std::array<double, kFeatureCount + 1>>& inputs,
                             const std::vector<int>& labels, int n_categories, double lambda,
                             const std::vector<double>& weights, std::vector<double>* gradient);

std::vector<double> predict(const CategoriserModel& model, const FeatureVector& fv);

struct ProbabilityTimeline {
    std::vector<std::string> categories;
    std::vector<double> times_s;               // strictly increasing
    std::vector<std::vector<double>> probs;    // one row per time, sums to 1
};

/// Slide a window over per-frame detections: for each start s in
/// {0, stride, ...} with s + window <= frame count, build the animation and
/// pattern, extract features, predict. Timestamp = (s + window - 1) / fps
/// (window-end convention).
ProbabilityTimeline classify_frames(int frame_count, int width, int height, double fps,
                                    const DetectorAdapter& adapter,
                                    const CategoriserModel& model, int window = 45,
                                    int stride = 5, int workers = 1);

/// File-based variant; frame dimensions are taken from the first frame.
ProbabilityTimeline classify_video(const FrameSequence& seq, const DetectorAdapter& adapter,
                                   const CategoriserModel& model, int window = 45,
                                   int stride = 5, int workers = 1);

/// Versioned text model format, 17 significant digits; write -> read ->
/// write is byte-identical.
std::string serialize_model(const CategoriserModel& model);
CategoriserModel parse_model(const std::string& text);
void save_model(const CategoriserModel& model, const std::string& path);
CategoriserModel load_model(const std::string& path);

/// Timeline CSV `time_s,<category>...`, one row per window.
std::string serialize_timeline_csv(const ProbabilityTimeline& tl);
ProbabilityTimeline parse_timeline_csv(const std::string& text);
void write_timeline_csv(const ProbabilityTimeline& tl, const std::string& path);
ProbabilityTimeline read_timeline_csv(const std::string& path);

/// Reads `probs.csv` (header `id,<category>...`) produced by an external
/// categoriser; validates ids against the manifest, the category set, and
/// that each row sums to 1 within 1e-6. Rows return in manifest order.
std::vector<std::vector<double>> read_external_probabilities(
    const std::string& probs_csv_path, const std::vector<std::string>& manifest_ids,
    const std::vector<std::string>& categories);

}  // namespace ethopipe
