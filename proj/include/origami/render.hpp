#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cyclic.hpp"
#include "euclid.hpp"
#include "numerics.hpp"

namespace origami::render {

using euclid::Line;
using euclid::Point;
using numerics::Real;

// Fixed-point decimal with the sign of -0 scrubbed, so identical geometry
// always prints identical bytes.
inline std::string fmt_fixed(const Real& x, unsigned decimals) {
    std::string s = x.str(decimals, std::ios_base::fixed);
    bool zeros = true;
    for (char c : s)
        if (c >= '1' && c <= '9') {
            zeros = false;
            break;
        }
    if (zeros && !s.empty() && s[0] == '-') s = s.substr(1);
    return s;
}

// All emitters write to a temp file and rename, so failures never leave a
// partial artifact behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// SVG scene: labeled points, clipped lines, polygon outlines. Insertion
// order is preserved; coordinates print with exactly 6 decimals; the y axis
// is flipped so counterclockwise math orientation stays counterclockwise
// on screen.
// ---------------------------------------------------------------------------

class SvgScene {
public:
    void add_point(const Point& p, const std::string& label) {
        elements_.push_back(PointEl{p, label});
        grow(p);
    }
    void add_line(const Line& l, const std::string& label) {
        elements_.push_back(LineEl{l, label});
    }
    void add_polygon(const std::vector<Point>& vs, const std::string& label) {
        elements_.push_back(PolyEl{vs, label});
        for (const Point& p : vs) grow(p);
    }

    std::string to_svg() const {
        Real x0 = have_box_ ? xmin_ : Real(-1), x1 = have_box_ ? xmax_ : Real(2);
        Real y0 = have_box_ ? ymin_ : Real(-1), y1 = have_box_ ? ymax_ : Real(2);
        Real w = x1 - x0, h = y1 - y0;
        Real dim = (std::max)((std::max)(w, h), Real(1));
        Real m = dim / 10;
        Real bx0 = x0 - m, bx1 = x1 + m;
        Real by0 = y0 - m, by1 = y1 + m;
        Real bw = bx1 - bx0, bh = by1 - by0;
        Real span = (std::max)(bw, bh);
        Real stroke = span / 250, dot = span / 80, font = span / 25;

        auto X = [&](const Real& x) { return fmt_fixed(x, 6); };
        auto Y = [&](const Real& y) { return fmt_fixed(-y, 6); }; // flip

        std::string out;
        out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + X(bx0) +
               " " + fmt_fixed(-by1, 6) + " " + fmt_fixed(bw, 6) + " " + fmt_fixed(bh, 6) +
               "\">\n";

        for (const Element& el : elements_) {
            if (const LineEl* le = std::get_if<LineEl>(&el)) {
                auto seg = clip(le->l, bx0, bx1, by0, by1);
                if (!seg) continue;
                const auto& [p, q] = *seg;
                out += "  <line x1=\"" + X(p.x) + "\" y1=\"" + Y(p.y) + "\" x2=\"" + X(q.x) +
                       "\" y2=\"" + Y(q.y) + "\" stroke=\"#2472a4\" stroke-width=\"" +
                       fmt_fixed(stroke, 6) + "\"/>\n";
                if (!le->label.empty()) {
                    Point mid = Real(0.5) * (p + q);
                    out += text(mid.x + stroke * 2, mid.y + stroke * 2, font, le->label);
                }
            } else if (const PolyEl* pe = std::get_if<PolyEl>(&el)) {
                const auto& vs = pe->vs;
                if (vs.empty()) continue;
                std::string d = "M " + X(vs[0].x) + " " + Y(vs[0].y);
                for (std::size_t i = 1; i < vs.size(); ++i)
                    d += " L " + X(vs[i].x) + " " + Y(vs[i].y);
                d += " Z";
                out += "  <path d=\"" + d + "\" fill=\"none\" stroke=\"#1e8449\" stroke-width=\"" +
                       fmt_fixed(stroke, 6) + "\"/>\n";
                if (!pe->label.empty()) {
                    Point c{0, 0};
                    for (const Point& v : vs) c = c + v;
                    c = (Real(1) / Real(static_cast<long>(vs.size()))) * c;
                    out += text(c.x, c.y, font, pe->label);
                }
            } else {
                const PointEl& pt = std::get<PointEl>(el);
                out += "  <circle cx=\"" + X(pt.p.x) + "\" cy=\"" + Y(pt.p.y) + "\" r=\"" +
                       fmt_fixed(dot, 6) + "\" fill=\"#b03a2e\"/>\n";
                if (!pt.label.empty()) out += text(pt.p.x + dot, pt.p.y + dot, font, pt.label);
            }
        }
        out += "</svg>\n";
        return out;
    }

    void write(const std::string& path) const { write_file_atomic(path, to_svg()); }

private:
    std::string text(const Real& x, const Real& y, const Real& font, const std::string& s) const {
        return "  <text x=\"" + fmt_fixed(x, 6) + "\" y=\"" + fmt_fixed(-y, 6) +
               "\" font-size=\"" + fmt_fixed(font, 6) +
               "\" font-family=\"sans-serif\" fill=\"#333333\">" + escape(s) + "</text>\n";
    }
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&')
                out += "&amp;";
            else if (c == '<')
                out += "&lt;";
            else if (c == '>')
                out += "&gt;";
            else
                out += c;
        }
        return out;
    }

    void grow(const Point& p) {
        if (!have_box_) {
            xmin_ = xmax_ = p.x;
            ymin_ = ymax_ = p.y;
            have_box_ = true;
            return;
        }
        xmin_ = (std::min)(xmin_, p.x);
        xmax_ = (std::max)(xmax_, p.x);
        ymin_ = (std::min)(ymin_, p.y);
        ymax_ = (std::max)(ymax_, p.y);
    }

    // Liang–Barsky clip of an infinite line against the viewbox.
    static std::optional<std::pair<Point, Point>> clip(const Line& l, const Real& x0,
                                                       const Real& x1, const Real& y0,
                                                       const Real& y1) {
        Point ctr{(x0 + x1) / 2, (y0 + y1) / 2};
        Real d = euclid::line_eval(l, ctr);
        Point p0{ctr.x - d * l.a, ctr.y - d * l.b}; // foot of center on the line
        Point dir{l.b, -l.a};
        Real span = (x1 - x0) + (y1 - y0);
        Real tlo = -2 * span, thi = 2 * span;
        auto narrow = [&](const Real& den, const Real& num) {
            if (den == 0) return num >= 0; // parallel: inside iff num >= 0
            Real t = num / den;
            if (den > 0)
                thi = (std::min)(thi, t);
            else
                tlo = (std::max)(tlo, t);
            return true;
        };
        if (!narrow(dir.x, x1 - p0.x)) return std::nullopt;
        if (!narrow(-dir.x, p0.x - x0)) return std::nullopt;
        if (!narrow(dir.y, y1 - p0.y)) return std::nullopt;
        if (!narrow(-dir.y, p0.y - y0)) return std::nullopt;
        if (tlo >= thi) return std::nullopt;
        return std::make_pair(Point{p0.x + tlo * dir.x, p0.y + tlo * dir.y},
                              Point{p0.x + thi * dir.x, p0.y + thi * dir.y});
    }

    struct PointEl {
        Point p;
        std::string label;
    };
    struct LineEl {
        Line l;
        std::string label;
    };
    struct PolyEl {
        std::vector<Point> vs;
        std::string label;
    };
    using Element = std::variant<PointEl, LineEl, PolyEl>;

    std::vector<Element> elements_;
    bool have_box_ = false;
    Real xmin_, xmax_, ymin_, ymax_;
};

// ---------------------------------------------------------------------------
// OBJ mesh: base fan plus lateral triangles per pyramid; 9-decimal vertices,
// 1-based face indices, every edge shared by exactly two faces.
// ---------------------------------------------------------------------------

class ObjMesh {
public:
    void add_pyramid(const cyclic::Pyramid& pyr) {
        long base = static_cast<long>(vertices_.size());
        std::size_t n = pyr.base.size();
        for (const cyclic::Point3& v : pyr.base) vertices_.push_back(v);
        vertices_.push_back(pyr.apex);
        long apex = base + static_cast<long>(n) + 1; // 1-based below

        // bottom fan, wound clockwise seen from above = outward-facing down
        for (std::size_t j = 1; j + 1 < n; ++j)
            faces_.push_back({base + 1, base + static_cast<long>(j) + 2,
                              base + static_cast<long>(j) + 1});
        // lateral walls, counterclockwise seen from outside
        for (std::size_t j = 0; j < n; ++j)
            faces_.push_back({base + static_cast<long>(j) + 1,
                              base + static_cast<long>((j + 1) % n) + 1, apex});
    }

    std::string to_obj() const {
        std::string out;
        for (const cyclic::Point3& v : vertices_)
            out += "v " + fmt_fixed(v.x, 9) + " " + fmt_fixed(v.y, 9) + " " + fmt_fixed(v.z, 9) +
                   "\n";
        for (const auto& f : faces_)
            out += "f " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " +
                   std::to_string(f[2]) + "\n";
        return out;
    }

    void write(const std::string& path) const { write_file_atomic(path, to_obj()); }

    const std::vector<std::array<long, 3>>& faces() const { return faces_; }
    std::size_t vertex_count() const { return vertices_.size(); }

private:
    std::vector<cyclic::Point3> vertices_;
    std::vector<std::array<long, 3>> faces_;
};

} // namespace origami::render
