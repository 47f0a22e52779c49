#include "hamcap/svg.hpp"

#include <cstdio>
#include <sstream>

namespace hamcap {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kMargin = 42.0;

}  // namespace

SvgPlot::SvgPlot(double width, double height, double x0, double x1, double y0,
                 double y1, std::string title)
    : w_(width), h_(height), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (!title.empty())
        body_ += "<text x=\"" + num(w_ / 2) + "\" y=\"16\" font-size=\"13\" "
                 "text-anchor=\"middle\" fill=\"#111111\">" + title +
                 "</text>\n";
}

double SvgPlot::sx(double x) const {
    return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 2 * kMargin);
}

double SvgPlot::sy(double y) const {
    return h_ - kMargin - (y - y0_) / (y1_ - y0_) * (h_ - 2 * kMargin);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts,
                       const std::string& color, double stroke,
                       const std::string& dash) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << num(stroke) << "\"";
    if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    for (auto& [x, y] : pts) os << num(sx(x)) << "," << num(sy(y)) << " ";
    os << "\"/>\n";
    body_ += os.str();
}

void SvgPlot::line(double xa, double ya, double xb, double yb,
                   const std::string& color, double stroke,
                   const std::string& dash) {
    std::ostringstream os;
    os << "<line x1=\"" << num(sx(xa)) << "\" y1=\"" << num(sy(ya))
       << "\" x2=\"" << num(sx(xb)) << "\" y2=\"" << num(sy(yb))
       << "\" stroke=\"" << color << "\" stroke-width=\"" << num(stroke)
       << "\"";
    if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
    os << "/>\n";
    body_ += os.str();
}

void SvgPlot::marker(double x, double y, const std::string& color, double r) {
    body_ += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) +
             "\" r=\"" + num(r) + "\" fill=\"" + color + "\"/>\n";
}

void SvgPlot::text(double x, double y, const std::string& s,
                   const std::string& color) {
    body_ += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(sy(y)) +
             "\" font-size=\"11\" fill=\"" + color + "\">" + s + "</text>\n";
}

void SvgPlot::axes() {
    line(x0_, 0.0 < y0_ ? y0_ : (0.0 > y1_ ? y1_ : 0.0), x1_,
         0.0 < y0_ ? y0_ : (0.0 > y1_ ? y1_ : 0.0), "#888888", 0.8);
    line(0.0 < x0_ ? x0_ : (0.0 > x1_ ? x1_ : 0.0), y0_,
         0.0 < x0_ ? x0_ : (0.0 > x1_ ? x1_ : 0.0), y1_, "#888888", 0.8);
    // corner labels
    text(x0_, y0_, num(x0_) + "," + num(y0_), "#777777");
    text(x1_ - 0.12 * (x1_ - x0_), y1_ - 0.04 * (y1_ - y0_),
         num(x1_) + "," + num(y1_), "#777777");
}

std::string SvgPlot::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w_)
       << "\" height=\"" << num(h_) << "\" viewBox=\"0 0 " << num(w_) << " "
       << num(h_) << "\">\n<rect width=\"100%\" height=\"100%\" "
          "fill=\"#ffffff\"/>\n"
       << body_ << "</svg>\n";
    return os.str();
}

}  // namespace hamcap
