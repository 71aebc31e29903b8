#include "ethopipe/imageio.hpp"

#include <opencv2/imgcodecs.hpp>

#include "ethopipe/errors.hpp"

namespace ethopipe {

Image read_image(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_COLOR);
    if (m.empty()) throw IoError("cannot read image: " + path);
    Image img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            std::uint8_t* p = img.at(x, y);
            p[0] = row[3 * x + 2];  // BGR -> RGB
            p[1] = row[3 * x + 1];
            p[2] = row[3 * x + 0];
        }
    }
    return img;
}

void write_png(const std::string& path, const Image& img) {
    cv::Mat m(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.at(x, y);
            row[3 * x + 0] = p[2];
            row[3 * x + 1] = p[1];
            row[3 * x + 2] = p[0];
        }
    }
    if (!cv::imwrite(path, m)) throw IoError("cannot write image: " + path);
}

GrayImage read_gray_png(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_GRAYSCALE);
    if (m.empty()) throw IoError("cannot read mask image: " + path);
    GrayImage g;
    g.width = m.cols;
    g.height = m.rows;
    g.px.resize(static_cast<std::size_t>(m.cols) * m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(y);
        std::copy(row, row + m.cols, g.px.begin() + static_cast<std::size_t>(y) * m.cols);
    }
    return g;
}

void write_gray_png(const std::string& path, const GrayImage& img) {
    cv::Mat m(img.height, img.width, CV_8UC1);
    for (int y = 0; y < img.height; ++y)
        std::copy(img.px.begin() + static_cast<std::size_t>(y) * img.width,
                  img.px.begin() + static_cast<std::size_t>(y + 1) * img.width,
                  m.ptr<std::uint8_t>(y));
    if (!cv::imwrite(path, m)) throw IoError("cannot write mask image: " + path);
}

Mask gray_to_mask(const GrayImage& g, std::uint8_t level) {
    Mask m(g.width, g.height);
    for (std::size_t i = 0; i < g.px.size(); ++i) m.bits[i] = g.px[i] == level;
    return m;
}

void write_mask_png(const std::string& path, const Mask& m) {
    GrayImage g;
    g.width = m.width;
    g.height = m.height;
    g.px.resize(m.bits.size());
    for (std::size_t i = 0; i < m.bits.size(); ++i) g.px[i] = m.bits[i] ? 255 : 0;
    write_gray_png(path, g);
}

}  // namespace ethopipe
