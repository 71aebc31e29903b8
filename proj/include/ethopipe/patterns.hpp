#pragma once

#include <array>
#include <string>
#include <vector>

#include "ethopipe/detection.hpp"
#include "ethopipe/ethogram.hpp"
#include "ethopipe/image.hpp"

namespace ethopipe {

/// An on-disk frame sequence: `frame_%06d.png` files plus a `video.meta`
/// text file declaring `fps=<float>`. Container decoding is external.
struct FrameSequence {
    std::string video_id;
    double fps = 0;
    std::vector<std::string> frame_paths;  // gap-free, index order

    int frame_count() const { return static_cast<int>(frame_paths.size()); }
};

FrameSequence load_frame_sequence(const std::string& dir);

/// Fixed-length excerpt with the single tracked instance's mask per frame.
struct Animation {
    std::string video_id;
    int start_frame = 0;
    std::vector<Mask> masks;  // length = window length; empty masks allowed

    int length() const { return static_cast<int>(masks.size()); }
};

/// One tracked instance per frame: the largest-area instance, earliest
/// index winning ties. Frames with no detection get an empty 0x0 mask.
std::vector<Mask> track_largest_instance(const std::vector<FrameDetection>& detections,
                                         int width, int height);

/// Slice `length` consecutive per-frame masks starting at start_frame.
/// Throws when the window exceeds the video bounds.
Animation extract_window(const std::string& video_id, const std::vector<Mask>& tracked_masks,
                         int start_frame, int length);

/// Linear blue -> red ramp over the window: (0,0,255) at t = 0,
/// (255,0,0) at t = T-1, components rounded half-up.
std::array<std::uint8_t, 3> time_colour(int t, int window_length);

/// Time-coloured composite of the tracked instance's outer contours
/// (set pixels with at least one unset 4-neighbour), later frames
/// overdrawing earlier ones, on a white canvas covering the union
/// bounding box of all window masks plus 5% padding (minimum 16x16).
/// Canvas pixels map 1:1 to video pixels at offset (origin_x, origin_y).
struct MovementPattern {
    Image canvas;
    int origin_x = 0;
    int origin_y = 0;
    double scale = 1.0;  // canvas px per video px

    bool operator==(const MovementPattern&) const = default;
};

MovementPattern render_movement_pattern(const Animation& anim);

struct BehaviourExample {
    Animation animation;
    MovementPattern pattern;
    std::string label;
};

struct GenerateOptions {
    int window = 45;   // training default; inference uses stride 5
    int stride = 45;
    bool emit_background = false;
    std::vector<std::string> categories;  // configured category set (labels must be drawn from it)
};

inline constexpr const char* kBackgroundLabel = "background";

/// Interval [s,e) seconds covers frames ceil(s*fps) .. floor(e*fps).
std::pair<int, int> interval_frame_range(const EthogramInterval& iv, double fps);

/// Emits one labelled example per grid position s in {0, stride, 2*stride, ...}
/// whose frame span lies entirely within a single ground-truth interval
/// (pure-window rule). Windows intersecting no interval become `background`
/// examples when enabled; straddling windows are skipped.
std::vector<BehaviourExample> generate_examples(const FrameSequence& seq,
                                                const std::vector<FrameDetection>& detections,
                                                const std::vector<EthogramInterval>& ethogram,
                                                const GenerateOptions& opt);

}  // namespace ethopipe
