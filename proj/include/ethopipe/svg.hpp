#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ethopipe {

/// Minimal deterministic SVG builder. All coordinates are emitted with two
/// decimals so identical inputs always produce byte-identical documents.
class SvgDoc {
public:
    SvgDoc(double width, double height);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void rect(double x, double y, double w, double h, const std::string& fill,
              double opacity = 1.0);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double stroke_width = 1.5);
    void text(double x, double y, const std::string& s, int font_px = 12,
              const std::string& anchor = "start");

    std::string str() const;

private:
    double width_, height_;
    std::string body_;
};

}  // namespace ethopipe
