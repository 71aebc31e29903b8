#pragma once

#include <string>

#include "ethopipe/image.hpp"

namespace ethopipe {

/// 8-bit single-channel raster (sidecar mask files).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> px;

    std::uint8_t get(int x, int y) const {
        return px[static_cast<std::size_t>(y) * width + x];
    }
};

Image read_image(const std::string& path);  // PNG or JPEG
void write_png(const std::string& path, const Image& img);

GrayImage read_gray_png(const std::string& path);
void write_gray_png(const std::string& path, const GrayImage& img);

/// Single-instance sidecar convention: 0 = background, 255 = animal.
Mask gray_to_mask(const GrayImage& g, std::uint8_t level);
void write_mask_png(const std::string& path, const Mask& m);

}  // namespace ethopipe
