#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hamcap {

// Minimal deterministic SVG line-plot writer (no timestamps or metadata).
class SvgPlot {
public:
    SvgPlot(double width, double height, double x0, double x1, double y0,
            double y1, std::string title = "");

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke = 1.0,
                  const std::string& dash = "");
    void line(double xa, double ya, double xb, double yb,
              const std::string& color, double stroke = 1.0,
              const std::string& dash = "");
    void marker(double x, double y, const std::string& color, double r = 2.5);
    void text(double x, double y, const std::string& s,
              const std::string& color = "#333333");
    void axes();

    std::string str() const;

private:
    double sx(double x) const;
    double sy(double y) const;
    double w_, h_, x0_, x1_, y0_, y1_;
    std::string body_;
};

}  // namespace hamcap
