#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ethopipe {

/// 8-bit interleaved RGB raster, row-major, origin top-left, x right, y down.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> px;  // size = 3 * width * height

    Image() = default;
    Image(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::uint8_t* at(int x, int y) {
        return px.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* at(int x, int y) const {
        return px.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    bool operator==(const Image&) const = default;
};

/// Binary instance raster; 1 = animal pixel. Dimensions match the owning frame.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t get(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        bits[static_cast<std::size_t>(y) * width + x] = v;
    }

    std::size_t count() const;

    /// Tight bounding box of set pixels, half-open [x0,x1) x [y0,y1).
    struct Box {
        int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
        bool valid = false;  // false when the mask is empty
        int w() const { return x1 - x0; }
        int h() const { return y1 - y0; }
    };
    Box bbox() const;

    bool operator==(const Mask&) const = default;
};

struct PointF {
    double x = 0;
    double y = 0;

    bool operator==(const PointF&) const = default;
};

/// round(x + 0.5) rounding; the single rounding rule used for every
/// pixel-count computation in the pipeline.
int round_half_up(double v);

}  // namespace ethopipe
