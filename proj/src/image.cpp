#include "ethopipe/image.hpp"

#include <algorithm>
#include <cmath>

namespace ethopipe {

Image::Image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), px(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < px.size(); i += 3) {
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    }
}

std::size_t Mask::count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) n += b != 0;
    return n;
}

Mask::Box Mask::bbox() const {
    Box box;
    int x0 = width, y0 = height, x1 = 0, y1 = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!get(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x + 1);
            y1 = std::max(y1, y + 1);
        }
    }
    if (x1 > x0 && y1 > y0) box = {x0, y0, x1, y1, true};
    return box;
}

int round_half_up(double v) {
    return static_cast<int>(std::floor(v + 0.5));
}

}  // namespace ethopipe
