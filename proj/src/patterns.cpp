#include "ethopipe/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "ethopipe/errors.hpp"

namespace ethopipe {

FrameSequence load_frame_sequence(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a frame directory: " + dir);

    FrameSequence seq;
    seq.video_id = fs::path(dir).filename().string();

    const std::string meta_path = dir + "/video.meta";
    std::ifstream meta(meta_path);
    if (!meta) throw IoError("missing video.meta in " + dir);
    std::string line;
    while (std::getline(meta, line)) {
        if (line.rfind("fps=", 0) == 0) {
            try {
                seq.fps = std::stod(line.substr(4));
            } catch (const std::exception&) {
                throw ValidationError("video.meta: cannot parse '" + line + "'");
            }
        }
    }
    if (!(seq.fps > 0)) throw ValidationError("video.meta must declare fps > 0 in " + dir);

    std::set<int> indices;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        int idx = -1;
        if (std::sscanf(name.c_str(), "frame_%d.png", &idx) == 1 && idx >= 0)
            indices.insert(idx);
    }
    if (indices.empty()) throw ValidationError("no frame_%06d.png files in " + dir);
    int expect = 0;
    for (int idx : indices) {
        if (idx != expect)
            throw ValidationError("frame sequence has a gap: expected frame " +
                                  std::to_string(expect) + " in " + dir);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "frame_%06d.png", idx);
        seq.frame_paths.push_back(dir + "/" + buf);
        ++expect;
    }
    return seq;
}

std::vector<Mask> track_largest_instance(const std::vector<FrameDetection>& detections,
                                         int width, int height) {
    std::vector<Mask> out;
    out.reserve(detections.size());
    for (const auto& det : detections) {
        const Mask* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& inst : det.instances) {
            const std::size_t c = inst.mask.count();
            if (!best || c > best_count) {
                best = &inst.mask;
                best_count = c;
            }
        }
        if (best && best_count > 0)
            out.push_back(*best);
        else
            out.push_back(Mask(width, height));
    }
    return out;
}

Animation extract_window(const std::string& video_id, const std::vector<Mask>& tracked_masks,
                         int start_frame, int length) {
    if (length < 1) throw ValidationError("extract_window: length must be >= 1");
    if (start_frame < 0 ||
        start_frame + length > static_cast<int>(tracked_masks.size()))
        throw ValidationError("extract_window: window [" + std::to_string(start_frame) + ", " +
                              std::to_string(start_frame + length) + ") exceeds video bounds (" +
                              std::to_string(tracked_masks.size()) + " frames)");
    Animation anim;
    anim.video_id = video_id;
    anim.start_frame = start_frame;
    anim.masks.assign(tracked_masks.begin() + start_frame,
                      tracked_masks.begin() + start_frame + length);
    return anim;
}

std::array<std::uint8_t, 3> time_colour(int t, int window_length) {
    if (window_length < 2) throw ValidationError("time_colour: window length must be >= 2");
    if (t < 0 || t >= window_length)
        throw ValidationError("time_colour: frame index out of range");
    const double u = static_cast<double>(t) / static_cast<double>(window_length - 1);
    const int r = round_half_up(255.0 * u);
    const int b = round_half_up(255.0 * (1.0 - u));
    return {static_cast<std::uint8_t>(r), 0, static_cast<std::uint8_t>(b)};
}

namespace {

constexpr int kMinCanvas = 16;

bool is_contour(const Mask& m, int x, int y) {
    if (!m.get(x, y)) return false;
    // Outside the mask bounds counts as unset.
    if (x == 0 || !m.get(x - 1, y)) return true;
    if (x == m.width - 1 || !m.get(x + 1, y)) return true;
    if (y == 0 || !m.get(x, y - 1)) return true;
    if (y == m.height - 1 || !m.get(x, y + 1)) return true;
    return false;
}

}  // namespace

MovementPattern render_movement_pattern(const Animation& anim) {
    // Union bounding box over all window masks, in video coordinates.
    bool any = false;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    for (const Mask& m : anim.masks) {
        const Mask::Box b = m.bbox();
        if (!b.valid) continue;
        if (!any) {
            x0 = b.x0; y0 = b.y0; x1 = b.x1; y1 = b.y1;
            any = true;
        } else {
            x0 = std::min(x0, b.x0);
            y0 = std::min(y0, b.y0);
            x1 = std::max(x1, b.x1);
            y1 = std::max(y1, b.y1);
        }
    }

    MovementPattern pat;
    int w = kMinCanvas, h = kMinCanvas;
    if (any) {
        const int pad_x = static_cast<int>(std::ceil(0.05 * (x1 - x0)));
        const int pad_y = static_cast<int>(std::ceil(0.05 * (y1 - y0)));
        pat.origin_x = x0 - pad_x;
        pat.origin_y = y0 - pad_y;
        w = (x1 - x0) + 2 * pad_x;
        h = (y1 - y0) + 2 * pad_y;
        if (w < kMinCanvas) {
            pat.origin_x -= (kMinCanvas - w) / 2;
            w = kMinCanvas;
        }
        if (h < kMinCanvas) {
            pat.origin_y -= (kMinCanvas - h) / 2;
            h = kMinCanvas;
        }
    }
    pat.canvas = Image(w, h, 255, 255, 255);

    const int T = anim.length();
    if (T < 2) return pat;  // nothing to colour without a ramp
    for (int t = 0; t < T; ++t) {
        const Mask& m = anim.masks[t];
        const Mask::Box b = m.bbox();
        if (!b.valid) continue;
        const auto colour = time_colour(t, T);
        for (int y = b.y0; y < b.y1; ++y) {
            for (int x = b.x0; x < b.x1; ++x) {
                if (!is_contour(m, x, y)) continue;
                const int cx = x - pat.origin_x;
                const int cy = y - pat.origin_y;
                if (cx < 0 || cx >= w || cy < 0 || cy >= h) continue;
                std::uint8_t* p = pat.canvas.at(cx, cy);
                p[0] = colour[0];
                p[1] = colour[1];
                p[2] = colour[2];
            }
        }
    }
    return pat;
}

std::pair<int, int> interval_frame_range(const EthogramInterval& iv, double fps) {
    // The 1e-9 nudge keeps exact-decimal boundaries stable against binary
    // rounding of start*fps.
    const int f0 = static_cast<int>(std::ceil(iv.start_s * fps - 1e-9));
    const int f1 = static_cast<int>(std::floor(iv.end_s * fps + 1e-9));
    return {f0, f1};
}

std::vector<BehaviourExample> generate_examples(const FrameSequence& seq,
                                                const std::vector<FrameDetection>& detections,
                                                const std::vector<EthogramInterval>& ethogram,
                                                const GenerateOptions& opt) {
    if (opt.stride < 1) throw ValidationError("generate_examples: stride must be >= 1");
    if (opt.window < 2) throw ValidationError("generate_examples: window must be >= 2");
    if (!(seq.fps > 0)) throw ValidationError("generate_examples: fps must be > 0");
    // The pure-window rule needs globally disjoint intervals, otherwise a
    // window could sit inside two labels at once.
    {
        std::vector<std::pair<double, double>> spans;
        for (const auto& iv : ethogram) spans.push_back({iv.start_s, iv.end_s});
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first < spans[i - 1].second)
                throw ValidationError("generate_examples: overlapping ethogram intervals");
    }

    const std::set<std::string> known(opt.categories.begin(), opt.categories.end());
    for (const auto& iv : ethogram)
        if (!known.count(iv.label))
            throw ValidationError("unknown label in ethogram: '" + iv.label + "'");

    struct Range {
        int f0, f1;
        const std::string* label;
    };
    std::vector<Range> ranges;
    for (const auto& iv : ethogram) {
        const auto [f0, f1] = interval_frame_range(iv, seq.fps);
        if (f1 >= f0) ranges.push_back({f0, f1, &iv.label});
    }

    const int n = seq.frame_count();
    if (static_cast<int>(detections.size()) != n)
        throw ValidationError("generate_examples: need one detection per frame");
    int mask_w = 0, mask_h = 0;
    for (const auto& det : detections) {
        if (!det.instances.empty()) {
            mask_w = det.instances[0].mask.width;
            mask_h = det.instances[0].mask.height;
            break;
        }
    }
    const std::vector<Mask> tracked = track_largest_instance(detections, mask_w, mask_h);

    std::vector<BehaviourExample> out;
    for (int s = 0; s + opt.window <= n; s += opt.stride) {
        const int last = s + opt.window - 1;
        const std::string* label = nullptr;
        bool intersects = false;
        for (const auto& r : ranges) {
            if (s <= r.f1 && last >= r.f0) {
                intersects = true;
                if (s >= r.f0 && last <= r.f1) {
                    label = r.label;
                    break;
                }
            }
        }
        if (!label) {
            if (intersects || !opt.emit_background) continue;  // pure-window rule
            static const std::string bg = kBackgroundLabel;
            label = &bg;
        }
        BehaviourExample ex;
        ex.animation = extract_window(seq.video_id, tracked, s, opt.window);
        ex.pattern = render_movement_pattern(ex.animation);
        ex.label = *label;
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace ethopipe
