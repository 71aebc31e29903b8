#include "ethopipe/svg.hpp"

#include <cstdio>

namespace ethopipe {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

SvgDoc::SvgDoc(double width, double height) : width_(width), height_(height) {}

void SvgDoc::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                  double stroke_width) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) +
             "\"/>\n";
}

void SvgDoc::rect(double x, double y, double w, double h, const std::string& fill,
                  double opacity) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) +
             "\"/>\n";
}

void SvgDoc::polyline(const std::vector<std::pair<double, double>>& pts,
                      const std::string& stroke, double stroke_width) {
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(stroke_width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) body_ += " ";
        body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
}

void SvgDoc::text(double x, double y, const std::string& s, int font_px,
                  const std::string& anchor) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" " +
             "font-size=\"" + std::to_string(font_px) + "\" text-anchor=\"" + anchor + "\">" +
             escape(s) + "</text>\n";
}

std::string SvgDoc::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" "
           "width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " +
           num(width_) + " " + num(height_) + "\">\n<rect x=\"0.00\" y=\"0.00\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" fill=\"white\" fill-opacity=\"1.00\"/>\n" +
           body_ + "</svg>\n";
}

}  // namespace ethopipe
