#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mirror_margin {

/// Minimal SVG emitter: enough polylines, circles and text for the
/// experiment figures without a plotting dependency.
class SvgWriter {
public:
    SvgWriter(double width, double height) : w_(width), h_(height) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\""
              << h_ << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
        body_ << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width = 1.5) {
        if (pts.size() < 2) return;
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
              << stroke_width << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << x << "," << y << " ";
        body_ << "\"/>\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                 const std::string& fill = "none", double stroke_width = 1.5) {
        if (pts.size() < 3) return;
        body_ << "<polygon fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << stroke_width << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << x << "," << y << " ";
        body_ << "\"/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke = "none") {
        body_ << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\""
              << fill << "\" stroke=\"" << stroke << "\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double stroke_width = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
              << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, double size = 12.0,
              const std::string& color = "black") {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" fill=\"" << color << "\">" << escape(s) << "</text>\n";
    }

    // Five-pointed star marker.
    void star(double cx, double cy, double r, const std::string& fill) {
        body_ << "<polygon fill=\"" << fill << "\" points=\"";
        for (int k = 0; k < 10; ++k) {
            double rr = (k % 2 == 0) ? r : 0.4 * r;
            double a = -1.5707963267948966 + k * 0.6283185307179586;
            body_ << cx + rr * std::cos(a) << "," << cy + rr * std::sin(a) << " ";
        }
        body_ << "\"/>\n";
    }

    void save(const std::string& path) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write SVG: " + path);
        out << body_.str() << "</svg>\n";
    }

private:
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '&') out += "&amp;";
            else out += c;
        }
        return out;
    }

    double w_, h_;
    std::ostringstream body_;
};

}  // namespace mirror_margin
