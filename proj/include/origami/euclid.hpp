#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace origami::euclid {

using numerics::Real;
using numerics::Tolerance;
using numerics::default_tolerance;
using numerics::real_near;

struct Point {
    Real x{0};
    Real y{0};
};

inline Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
inline Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
inline Point operator*(const Real& s, const Point& p) { return {s * p.x, s * p.y}; }

inline Real dot(const Point& p, const Point& q) { return p.x * q.x + p.y * q.y; }
inline Real cross(const Point& p, const Point& q) { return p.x * q.y - p.y * q.x; }
inline Real norm(const Point& p) { return sqrt(dot(p, p)); }
inline Real dist(const Point& p, const Point& q) { return norm(p - q); }

inline bool points_equal(const Point& p, const Point& q, const Tolerance& tol = default_tolerance()) {
    return real_near(p.x, q.x, tol) && real_near(p.y, q.y, tol);
}

// Oriented line a*x + b*y + c = 0 in canonical form: a^2 + b^2 = 1 and
// (a > 0, or a == 0 and b > 0) up to tolerance, so a geometric line has one
// representation (its negation normalizes to the same triple).
struct Line {
    Real a{0};
    Real b{1};
    Real c{0};
};

inline Line make_line(Real a, Real b, Real c, const Tolerance& tol = default_tolerance()) {
    Real n = sqrt(a * a + b * b);
    if (n <= tol.eps_abs)
        throw CoincidentPoints("line normal vanishes");
    a /= n;
    b /= n;
    c /= n;
    bool flip = false;
    if (a < -tol.eps_abs)
        flip = true;
    else if (abs(a) <= tol.eps_abs && b < 0)
        flip = true;
    if (flip) {
        a = -a;
        b = -b;
        c = -c;
    }
    return {a, b, c};
}

// Signed distance of p from l (normal is unit length).
inline Real line_eval(const Line& l, const Point& p) { return l.a * p.x + l.b * p.y + l.c; }

inline bool point_on_line(const Point& p, const Line& l, const Tolerance& tol = default_tolerance()) {
    return real_near(line_eval(l, p), Real(0), tol);
}

inline bool lines_equal(const Line& l, const Line& m, const Tolerance& tol = default_tolerance()) {
    bool same = real_near(l.a, m.a, tol) && real_near(l.b, m.b, tol) && real_near(l.c, m.c, tol);
    bool anti = real_near(l.a, -m.a, tol) && real_near(l.b, -m.b, tol) && real_near(l.c, -m.c, tol);
    return same || anti;
}

// Direction angle in [0, pi); the canonical sort key of a crease.
inline Real direction_angle(const Line& l) {
    Real t = atan2(-l.a, l.b);
    if (t < 0) t += numerics::pi();
    if (t >= numerics::pi()) t -= numerics::pi();
    return t;
}

// Ordered, deduplicated collection of creases. Order: direction angle,
// then offset c. Geometric duplicates within tolerance appear once.
class LineSet {
public:
    LineSet() = default;
    explicit LineSet(std::vector<Line> lines, const Tolerance& tol = default_tolerance()) {
        std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
            Real tx = direction_angle(x), ty = direction_angle(y);
            if (tx != ty) return tx < ty;
            return x.c < y.c;
        });
        for (const Line& l : lines) {
            bool dup = false;
            for (const Line& kept : lines_)
                if (lines_equal(l, kept, tol)) {
                    dup = true;
                    break;
                }
            if (!dup) lines_.push_back(l);
        }
    }

    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    const Line& operator[](std::size_t i) const { return lines_[i]; }
    const Line& at(std::size_t i) const {
        if (i >= lines_.size())
            throw IndexOutOfRange("index " + std::to_string(i) + " out of range; " +
                                  std::to_string(lines_.size()) + " solution(s)");
        return lines_[i];
    }
    auto begin() const { return lines_.begin(); }
    auto end() const { return lines_.end(); }
    const std::vector<Line>& items() const { return lines_; }

private:
    std::vector<Line> lines_;
};

inline Point reflect_point(const Point& p, const Line& l) {
    Real d = line_eval(l, p);
    return {p.x - 2 * d * l.a, p.y - 2 * d * l.b};
}

// ---------------------------------------------------------------------------
// Axioms. Multi-solution axioms return a LineSet; the rest a single Line.
// ---------------------------------------------------------------------------

// O1: the line through p and q.
inline Line O1(const Point& p, const Point& q, const Tolerance& tol = default_tolerance()) {
    if (points_equal(p, q, tol)) throw CoincidentPoints("O1 needs two distinct points");
    return make_line(p.y - q.y, q.x - p.x, p.x * q.y - p.y * q.x, tol);
}

// O2: fold p onto q; the perpendicular bisector.
inline Line O2(const Point& p, const Point& q, const Tolerance& tol = default_tolerance()) {
    if (points_equal(p, q, tol)) throw CoincidentPoints("O2 needs two distinct points");
    Point n = q - p;
    Point mid = Real(0.5) * (p + q);
    return make_line(n.x, n.y, -dot(n, mid), tol);
}

// O3: fold l onto m; one or two angle bisectors.
inline LineSet O3(const Line& l, const Line& m, const Tolerance& tol = default_tolerance()) {
    Real den = l.a * m.b - l.b * m.a;
    if (abs(den) <= tol.eps_abs) {
        // parallel: align orientations, midline unless coincident
        Real ma = m.a, mb = m.b, mc = m.c;
        if (l.a * ma + l.b * mb < 0) {
            ma = -ma;
            mb = -mb;
            mc = -mc;
        }
        if (real_near(l.c, mc, tol)) throw CoincidentLines("O3 needs two distinct lines");
        return LineSet({make_line(l.a, l.b, (l.c + mc) / 2, tol)}, tol);
    }
    return LineSet({make_line(l.a + m.a, l.b + m.b, l.c + m.c, tol),
                    make_line(l.a - m.a, l.b - m.b, l.c - m.c, tol)},
                   tol);
}

// O4: the line through p perpendicular to l.
inline Line O4(const Point& p, const Line& l, const Tolerance& tol = default_tolerance()) {
    return make_line(-l.b, l.a, l.b * p.x - l.a * p.y, tol);
}

// O5: folds through q taking p onto l; 0, 1 or 2 creases. The degenerate
// call p = q has no finite answer (no fold moves q off itself, and every
// fold through q fixes it), so it yields the empty set.
inline LineSet O5(const Point& p, const Line& l, const Point& q,
                  const Tolerance& tol = default_tolerance()) {
    if (points_equal(p, q, tol)) return LineSet();
    Real radius = dist(p, q);
    Real d = line_eval(l, q);
    Point foot{q.x - d * l.a, q.y - d * l.b};
    Real h2 = radius * radius - d * d;

    std::vector<Point> targets;
    if (h2 < 0) {
        if (real_near(radius, abs(d), tol)) targets.push_back(foot); // tangent
    } else {
        Real h = sqrt(h2);
        Point dir{l.b, -l.a};
        targets.push_back(foot + h * dir);
        targets.push_back(foot - h * dir);
    }

    std::vector<Line> creases;
    for (const Point& t : targets) {
        if (points_equal(p, t, tol))
            creases.push_back(O1(q, p, tol)); // p already on l: folding along qp fixes it
        else
            creases.push_back(O2(p, t, tol));
    }
    return LineSet(std::move(creases), tol);
}

// O7: the crease perpendicular to l2 taking p onto l1; 0 or 1 creases.
inline LineSet O7(const Point& p, const Line& l1, const Line& l2,
                  const Tolerance& tol = default_tolerance()) {
    Point nc{-l2.b, l2.a}; // crease normal: perpendicular to l2's normal
    Real den = l1.a * nc.x + l1.b * nc.y;
    if (abs(den) <= tol.eps_abs) {
        // l1 parallel to l2: a perpendicular crease maps p within its own
        // l1-parallel, so solutions exist only for p on l1 (then any crease
        // works; the one through p is the canonical pick).
        if (!point_on_line(p, l1, tol)) return LineSet();
        return LineSet({make_line(nc.x, nc.y, -dot(nc, p), tol)}, tol);
    }
    Real t = line_eval(l1, p) / (2 * den) - dot(nc, p);
    return LineSet({make_line(nc.x, nc.y, t, tol)}, tol);
}

// LI: intersection point of two lines.
inline Point LI(const Line& l, const Line& m, const Tolerance& tol = default_tolerance()) {
    Real det = l.a * m.b - l.b * m.a;
    if (abs(det) <= tol.eps_abs) throw ParallelLines("LI needs non-parallel lines");
    return {(l.b * m.c - m.b * l.c) / det, (m.a * l.c - l.a * m.c) / det};
}

// ---------------------------------------------------------------------------
// Real roots of a cubic with Real coefficients (ascending, possibly with a
// vanishing leading term). Monotone-piece bisection to width 10^(5-digits),
// then Newton polish. Near-double roots are reported once.
// ---------------------------------------------------------------------------

namespace detail {

inline Real eval3(const Real& c0, const Real& c1, const Real& c2, const Real& c3, const Real& x) {
    return ((c3 * x + c2) * x + c1) * x + c0;
}

inline Real bisect_newton(const Real& c0, const Real& c1, const Real& c2, const Real& c3,
                          Real lo, Real hi, const Real& flo_sign) {
    unsigned digits = numerics::precision();
    Real width_stop = numerics::pow10(5 - static_cast<long>(digits));
    bool lo_pos = flo_sign > 0;
    while (hi - lo > width_stop) {
        Real mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) break; // ran out of resolution
        Real fm = eval3(c0, c1, c2, c3, mid);
        if (fm == 0) return mid;
        if ((fm > 0) == lo_pos)
            lo = mid;
        else
            hi = mid;
    }
    Real x = (lo + hi) / 2;
    for (int it = 0; it < 12; ++it) {
        Real f = eval3(c0, c1, c2, c3, x);
        Real fp = (3 * c3 * x + 2 * c2) * x + c1;
        if (fp == 0) break;
        Real step = f / fp;
        Real nx = x - step;
        if (nx < lo || nx > hi) break; // Newton left the bracket; bisection value stands
        x = nx;
        if (abs(step) <= width_stop * numerics::pow10(-5)) break;
    }
    return x;
}

} // namespace detail

inline std::vector<Real> cubic_real_roots(const Real& c0, const Real& c1, const Real& c2,
                                          const Real& c3,
                                          const Tolerance& tol = default_tolerance()) {
    using numerics::pow10;
    Real scale = (std::max)((std::max)(abs(c0), abs(c1)), (std::max)(abs(c2), abs(c3)));
    std::vector<Real> roots;
    if (scale == 0) return roots;
    Real drop = scale * tol.eps_abs;

    if (abs(c3) <= drop) {
        if (abs(c2) <= drop) {
            if (abs(c1) <= drop) return roots; // constant
            roots.push_back(-c0 / c1);
            return roots;
        }
        // quadratic
        Real disc = c1 * c1 - 4 * c2 * c0;
        Real dscale = (std::max)(c1 * c1, abs(4 * c2 * c0));
        if (disc < 0) {
            if (abs(disc) <= tol.eps_abs * (1 + dscale)) roots.push_back(-c1 / (2 * c2));
            return roots;
        }
        if (abs(disc) <= tol.eps_abs * (1 + dscale)) {
            roots.push_back(-c1 / (2 * c2));
            return roots;
        }
        Real sq = sqrt(disc);
        Real q = c1 >= 0 ? (-c1 - sq) / 2 : (-c1 + sq) / 2;
        if (abs(q) <= drop) { // c1 ~ 0 and c0 ~ 0
            roots.push_back(Real(0));
            roots.push_back(-c1 / c2);
        } else {
            roots.push_back(q / c2);
            roots.push_back(c0 / q);
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    // monic cubic x^3 + p x^2 + q x + r
    Real p = c2 / c3, q = c1 / c3, r = c0 / c3;
    Real bound = 1 + (std::max)((std::max)(abs(p), abs(q)), abs(r));

    std::vector<Real> cuts{-bound};
    Real cdisc = p * p - 3 * q;
    if (cdisc > 0) {
        Real sq = sqrt(cdisc);
        cuts.push_back((-p - sq) / 3);
        cuts.push_back((-p + sq) / 3);
    }
    cuts.push_back(bound);

    // band for "the critical value is zero": rounding noise at working
    // precision, scaled by the term magnitudes there
    auto zero_band = [&](const Real& x) {
        Real m = (std::max)(Real(1), abs(x));
        return pow10(12 - static_cast<long>(numerics::precision())) * (abs(r) + m * (abs(q) + m * (abs(p) + m)));
    };

    std::vector<Real> fvals;
    for (const Real& x : cuts) fvals.push_back(detail::eval3(r, q, p, Real(1), x));

    for (std::size_t i = 0; i < cuts.size(); ++i) {
        bool interior = i > 0 && i + 1 < cuts.size();
        if (interior && abs(fvals[i]) <= zero_band(cuts[i])) {
            roots.push_back(cuts[i]); // (near-)double root at a critical point
        }
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Real fl = fvals[i], fr = fvals[i + 1];
        bool l_zero = i > 0 && abs(fl) <= zero_band(cuts[i]);
        bool r_zero = i + 2 < cuts.size() && abs(fr) <= zero_band(cuts[i + 1]);
        if (l_zero || r_zero) continue; // already reported at the critical point
        if ((fl > 0) == (fr > 0)) continue;
        roots.push_back(detail::bisect_newton(r, q, p, Real(1), cuts[i], cuts[i + 1], fl));
    }

    std::sort(roots.begin(), roots.end());
    std::vector<Real> unique;
    for (const Real& x : roots) {
        if (!unique.empty() && abs(x - unique.back()) <= tol.eps_abs * (1 + abs(x))) continue;
        unique.push_back(x);
    }
    return unique;
}

// ---------------------------------------------------------------------------
// O6: folds taking p1 onto l1 and p2 onto l2 simultaneously — the common
// tangents of two parabolas. Non-vertical creases y = m x + s satisfy a cubic
// in m; a second pass in swapped coordinates picks up near-vertical creases.
// Every candidate is validated by its reflection residuals before inclusion.
// ---------------------------------------------------------------------------

namespace detail {

struct Parabola {
    Point focus;
    Line directrix;
    Real d; // signed distance focus-to-directrix, nonzero
};

// Tangency of y = m x + s to the parabola (focus u, directrix l) eliminates
// s via the tangent condition; pairing two parabolas leaves a cubic in m.
inline void o6_cubic(const Parabola& P1, const Parabola& P2, Real& c3, Real& c2, Real& c1,
                     Real& c0) {
    const Real &a1 = P1.directrix.a, &b1 = P1.directrix.b;
    const Real &a2 = P2.directrix.a, &b2 = P2.directrix.b;
    Real du = P1.focus.x - P2.focus.x;
    Real dv = P1.focus.y - P2.focus.y;
    const Real &D1 = P1.d, &D2 = P2.d;

    c0 = 2 * dv * b1 * b2 - D1 * b2 + D2 * b1;
    c1 = -2 * (dv * (a1 * b2 + a2 * b1) + du * b1 * b2) + D1 * a2 - D2 * a1;
    c2 = 2 * (dv * a1 * a2 + du * (a1 * b2 + a2 * b1)) - D1 * b2 + D2 * b1;
    c3 = -2 * du * a1 * a2 + D1 * a2 - D2 * a1;
}

// Intercept of the tangent with slope m, from whichever parabola is
// non-degenerate for this slope; nullopt when both are (vertical crease).
inline std::optional<Real> o6_intercept(const Parabola& P1, const Parabola& P2, const Real& m,
                                        const Real& guard) {
    for (const Parabola* P : {&P1, &P2}) {
        Real den = P->directrix.b - P->directrix.a * m;
        if (abs(den) > guard)
            return P->focus.y - m * P->focus.x - P->d * (1 + m * m) / (2 * den);
    }
    return std::nullopt;
}

inline Point swap_xy(const Point& p) { return {p.y, p.x}; }
inline Line swap_xy(const Line& l, const Tolerance& tol) { return make_line(l.b, l.a, l.c, tol); }

} // namespace detail

inline LineSet O6(const Point& p1, const Line& l1, const Point& p2, const Line& l2,
                  const Tolerance& tol = default_tolerance()) {
    Real d1 = line_eval(l1, p1), d2 = line_eval(l2, p2);
    if (abs(d1) <= tol.eps_abs || abs(d2) <= tol.eps_abs)
        throw DegenerateParabola("O6 focus lies on its directrix");
    if (points_equal(p1, p2, tol) && lines_equal(l1, l2, tol))
        throw DegenerateParabola("O6 parabolas coincide; every tangent is common");

    Real geom_scale = (std::max)({Real(1), abs(p1.x), abs(p1.y), abs(p2.x), abs(p2.y), abs(l1.c),
                                  abs(l2.c)});
    Real vtol = tol.eps_abs * geom_scale * geom_scale;
    Real guard = tol.eps_abs * geom_scale;

    std::vector<Line> creases;
    auto harvest = [&](const detail::Parabola& P1, const detail::Parabola& P2, bool swapped) {
        Real c3, c2, c1, c0;
        detail::o6_cubic(P1, P2, c3, c2, c1, c0);
        for (const Real& m : cubic_real_roots(c0, c1, c2, c3, tol)) {
            if (swapped && abs(m) > 1) continue; // primary pass owns these
            auto s = detail::o6_intercept(P1, P2, m, guard);
            if (!s) continue;
            Line crease = swapped ? make_line(Real(1), -m, -*s, tol)
                                  : make_line(m, Real(-1), *s, tol);
            Real r1 = line_eval(l1, reflect_point(p1, crease));
            Real r2 = line_eval(l2, reflect_point(p2, crease));
            if (abs(r1) <= vtol && abs(r2) <= vtol) creases.push_back(crease);
        }
    };

    detail::Parabola P1{p1, l1, d1}, P2{p2, l2, d2};
    harvest(P1, P2, false);

    detail::Parabola S1{detail::swap_xy(p1), detail::swap_xy(l1, tol), Real(0)};
    detail::Parabola S2{detail::swap_xy(p2), detail::swap_xy(l2, tol), Real(0)};
    S1.d = line_eval(S1.directrix, S1.focus);
    S2.d = line_eval(S2.directrix, S2.focus);
    harvest(S1, S2, true);

    return LineSet(std::move(creases), tol);
}

} // namespace origami::euclid
