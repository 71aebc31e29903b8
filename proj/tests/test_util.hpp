#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ethopipe/annotations.hpp"
#include "ethopipe/detection.hpp"
#include "ethopipe/errors.hpp"
#include "ethopipe/image.hpp"
#include "ethopipe/rng.hpp"

namespace testutil {

inline std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_bytes(const std::vector<std::uint8_t>& v) {
    return fnv1a64(v.data(), v.size());
}

inline std::uint64_t hash_string(const std::string& s) {
    return fnv1a64(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

// Star-shaped (hence simple) polygon: sorted angles, random radii.
inline ethopipe::Polygon random_star_polygon(ethopipe::Rng& rng, double cx, double cy,
                                             double r_min, double r_max, int n_min = 5,
                                             int n_max = 16) {
    const int n = n_min + static_cast<int>(rng.uniform_int(n_max - n_min + 1));
    ethopipe::Polygon p;
    for (int i = 0; i < n; ++i) {
        const double jitter = rng.uniform(0.05, 0.95);
        const double theta = 2.0 * M_PI * (i + jitter) / n;
        const double r = rng.uniform(r_min, r_max);
        p.vertices.push_back({cx + r * std::cos(theta), cy + r * std::sin(theta)});
    }
    return p;
}

// Classic even-odd crossing test, independent of the scanline rasterizer.
inline bool point_in_polygon(const ethopipe::Polygon& poly, double px, double py) {
    bool inside = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > py) != (v[j].y > py) &&
            px < (v[j].x - v[i].x) * (py - v[i].y) / (v[j].y - v[i].y) + v[i].x)
            inside = !inside;
    }
    return inside;
}

// Regular polygon approximating a disk.
inline ethopipe::Polygon disk_polygon(double cx, double cy, double radius, int sides = 48) {
    ethopipe::Polygon p;
    for (int i = 0; i < sides; ++i) {
        const double theta = 2.0 * M_PI * i / sides;
        p.vertices.push_back({cx + radius * std::cos(theta), cy + radius * std::sin(theta)});
    }
    return p;
}

// In-memory detector playback over a fixed mask-per-frame sequence.
class MaskPlayback : public ethopipe::DetectorAdapter {
public:
    explicit MaskPlayback(std::vector<ethopipe::Mask> masks) : masks_(std::move(masks)) {}
    ethopipe::FrameDetection detect(int frame_index, int width, int height) const override {
        ethopipe::FrameDetection det;
        det.frame_index = frame_index;
        const auto& m = masks_.at(frame_index);
        if (m.width != width || m.height != height)
            throw ethopipe::ValidationError("MaskPlayback: dimension mismatch");
        if (m.count() > 0) det.instances.push_back({m, 1.0});
        return det;
    }

private:
    std::vector<ethopipe::Mask> masks_;
};

inline ethopipe::Mask square_mask_at(int w, int h, int x0, int y0, int side) {
    ethopipe::Mask m(w, h);
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x)
            if (x >= 0 && x < w && y >= 0 && y < h) m.set(x, y, 1);
    return m;
}

// Synthetic 45-frame motion windows: "RG-like" sweeps a wide circular arc,
// "RH-like" jitters in place. Linearly separable in the motion features.
inline std::vector<ethopipe::Mask> synthetic_motion_window(ethopipe::Rng& rng, bool rg_like,
                                                           int grid = 64, int frames = 45) {
    std::vector<ethopipe::Mask> masks;
    const double cx = grid / 2.0 + rng.uniform(-3.0, 3.0);
    const double cy = grid / 2.0 + rng.uniform(-3.0, 3.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    for (int t = 0; t < frames; ++t) {
        double x, y;
        if (rg_like) {
            const double theta = phase + 0.30 * t;
            x = cx + 14.0 * std::cos(theta);
            y = cy + 14.0 * std::sin(theta);
        } else {
            x = cx + rng.uniform(-1.5, 1.5);
            y = cy + rng.uniform(-1.5, 1.5);
        }
        masks.push_back(square_mask_at(grid, grid, static_cast<int>(x) - 4,
                                       static_cast<int>(y) - 4, 8));
    }
    return masks;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        base_ = std::filesystem::temp_directory_path() /
                ("ethopipe_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(base_);
        std::filesystem::create_directories(base_);
    }
    ~TempDir() { std::filesystem::remove_all(base_); }
    std::string path(const std::string& rel = "") const {
        return rel.empty() ? base_.string() : (base_ / rel).string();
    }
    std::string mksubdir(const std::string& rel) const {
        std::filesystem::create_directories(base_ / rel);
        return (base_ / rel).string();
    }

private:
    std::filesystem::path base_;
};

}  // namespace testutil
