#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "euclid.hpp"
#include "numerics.hpp"

namespace origami::cyclic {

using euclid::Line;
using euclid::LineSet;
using euclid::Point;
using numerics::Rational;
using numerics::Real;
using numerics::Tolerance;
using numerics::asin_clamped;
using numerics::default_tolerance;
using numerics::pi;
using numerics::real_near;

// complex product on points viewed as x + iy
inline Point cmul(const Point& p, const Point& q) {
    return {p.x * q.x - p.y * q.y, p.x * q.y + p.y * q.x};
}

struct RootOfUnity {
    unsigned n;
    Point value; // cos(2*pi/n) + i sin(2*pi/n)
};

inline RootOfUnity root_of_unity(unsigned n) {
    if (n == 0) throw std::invalid_argument("root_of_unity needs n >= 1");
    Real t = 2 * pi() / n;
    return {n, Point{cos(t), sin(t)}};
}

// ---------------------------------------------------------------------------
// Side lengths and the circumradius equation.
// ---------------------------------------------------------------------------

struct SideLengths {
    std::vector<Real> values;

    explicit SideLengths(std::vector<Real> v) : values(std::move(v)) {
        if (values.size() < 3)
            throw TooFewSides("need at least 3 side lengths, got " +
                              std::to_string(values.size()));
        for (const Real& a : values)
            if (a <= 0) throw std::invalid_argument("side lengths must be positive");
    }

    std::size_t size() const { return values.size(); }
    const Real& operator[](std::size_t i) const { return values[i]; }

    std::size_t max_index() const {
        std::size_t m = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] > values[m]) m = i;
        return m;
    }
    Real sum() const {
        Real s(0);
        for (const Real& a : values) s += a;
        return s;
    }
};

// Closability: twice the longest side may not exceed the perimeter.
inline void require_closable(const SideLengths& a, const Tolerance& tol = default_tolerance()) {
    Real mx = a[a.max_index()], total = a.sum();
    Real gap = 2 * mx - total;
    Real band = tol.eps_abs * (1 + total);
    if (gap > band)
        throw ConditionViolated("2*max side " + numerics::format_real(2 * mx) +
                                " exceeds perimeter " + numerics::format_real(total));
    if (gap >= -band)
        throw DegenerateFlat("2*max side equals the perimeter; the polygon is flat");
}

struct CircumradiusSolution {
    Real r;
    bool central;       // circumcenter strictly inside
    bool boundary;      // circumcenter on the longest side (right-polygon case)
    std::size_t max_index;
};

namespace detail {

inline Real bisection_width() {
    return numerics::pow10(5 - static_cast<long>(numerics::precision()));
}

// Central closure: angles around the center sum to 2*pi.
inline Real closure_f(const SideLengths& a, const Real& r) {
    Real s(0);
    for (const Real& ai : a.values) s += asin_clamped(ai / (2 * r));
    return s - pi();
}

} // namespace detail

// Radius of the unique convex polygon inscribed in a circle with the given
// side lengths in order. Central when the center falls strictly inside,
// boundary when it sits on the longest side, otherwise non-central.
inline CircumradiusSolution circumradius_solve(const SideLengths& a,
                                               const Tolerance& tol = default_tolerance()) {
    require_closable(a, tol);
    std::size_t M = a.max_index();
    Real mx = a[M];

    Real f0 = detail::closure_f(a, mx / 2);
    if (abs(f0) <= tol.eps_abs)
        return {mx / 2, false, true, M};

    Real width = detail::bisection_width();

    if (f0 > 0) {
        // central: F is strictly decreasing in r, F(max/2) > 0 > F(inf)
        Real lo = mx / 2, hi = mx;
        while (detail::closure_f(a, hi) > 0) hi *= 2;
        while (hi - lo > width) {
            Real mid = (lo + hi) / 2;
            if (mid <= lo || mid >= hi) break;
            if (detail::closure_f(a, mid) > 0)
                lo = mid;
            else
                hi = mid;
        }
        Real r = (lo + hi) / 2;
        for (int it = 0; it < 8; ++it) { // Newton polish
            Real f = detail::closure_f(a, r);
            Real fp(0);
            for (const Real& ai : a.values) {
                Real u = ai / (2 * r);
                Real rad = 1 - u * u;
                if (rad <= 0) { fp = 0; break; }
                fp -= ai / (2 * r * r * sqrt(rad));
            }
            if (fp == 0) break;
            Real nr = r - f / fp;
            if (nr <= mx / 2) break;
            r = nr;
        }
        return {r, true, false, M};
    }

    // Non-central. Solve in u = max/(2r), u in (0,1); the gap chord spanned
    // by the other sides must match the longest one:
    //   G(u) = sin(S(u)) - u,  S(u) = sum_{i != M} asin((a_i/max) u).
    // Evaluated cancellation-free as (1-u) - 2 sin^2(pi/4 - S(u)/2) so the
    // sign survives u -> 1 (radius just above max/2).
    auto S = [&](const Real& u) {
        Real s(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i != M) s += asin_clamped(a[i] / mx * u);
        return s;
    };
    auto G = [&](const Real& u) {
        Real half = pi() / 4 - S(u) / 2;
        Real sh = sin(half);
        return (1 - u) - 2 * sh * sh;
    };

    Real hi = 1; // G(1) = -2 sin^2(pi/4 - S(1)/2) < 0 since S(1) < pi/2 here
    Real lo = Real(1) / 2;
    while (G(lo) <= 0) lo /= 2; // G > 0 near 0 by the strict closability margin
    while (hi - lo > width) {
        Real mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) break;
        if (G(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    Real u = (lo + hi) / 2;
    for (int it = 0; it < 8; ++it) {
        Real g = G(u);
        Real sp(0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == M) continue;
            Real k = a[i] / mx;
            Real rad = 1 - k * u * (k * u);
            if (rad <= 0) { sp = 0; break; }
            sp += k / sqrt(rad);
        }
        Real gp = cos(S(u)) * sp - 1;
        if (gp == 0) break;
        Real nu = u - g / gp;
        if (nu <= 0 || nu >= 1) break;
        u = nu;
    }
    return {mx / (2 * u), false, false, M};
}

// ---------------------------------------------------------------------------
// Cyclic polygons and placement.
// ---------------------------------------------------------------------------

struct CyclicPolygon {
    std::vector<Point> vertices; // counterclockwise
    Point center;
    Real radius{0};
    bool central = false;  // center strictly inside
    bool boundary = false; // center on an edge (within tolerance)

    std::size_t size() const { return vertices.size(); }
    Real side(std::size_t i) const {
        return euclid::dist(vertices[i], vertices[(i + 1) % vertices.size()]);
    }
    std::vector<Real> side_lengths() const {
        std::vector<Real> out(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) out[i] = side(i);
        return out;
    }
};

// Recomputes the center-vs-edges classification from coordinates.
inline void classify_centrality(CyclicPolygon& P, const Tolerance& tol = default_tolerance()) {
    Real band = tol.eps_abs * (1 + P.radius);
    bool on_edge = false;
    bool outside = false;
    std::size_t n = P.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point e = P.vertices[(i + 1) % n] - P.vertices[i];
        Real len = euclid::norm(e);
        if (len <= band) continue;
        Real sd = euclid::cross(e, P.center - P.vertices[i]) / len;
        if (abs(sd) <= band)
            on_edge = true;
        else if (sd < 0)
            outside = true;
    }
    P.boundary = on_edge && !outside;
    P.central = !on_edge && !outside;
}

// Central angle of each side; the longest side takes the reflex complement
// when the center lies outside (or on) it.
inline std::vector<Real> central_angles(const SideLengths& a, const CircumradiusSolution& sol) {
    std::vector<Real> theta(a.size());
    Real rest(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        theta[i] = 2 * asin_clamped(a[i] / (2 * sol.r));
        if (i != sol.max_index) rest += theta[i];
    }
    if (!sol.central) theta[sol.max_index] = 2 * pi() - rest;
    return theta;
}

// Vertices on the solution circle anchored at A1, A2 (first side A1->A2,
// counterclockwise). |A2 - A1| must match the first side length.
inline CyclicPolygon place_cyclic(const SideLengths& a, const CircumradiusSolution& sol,
                                  const Point& A1, const Point& A2,
                                  const Tolerance& tol = default_tolerance()) {
    Real d = euclid::dist(A1, A2);
    if (!real_near(d, a[0], tol))
        throw SideMismatch("anchor distance " + numerics::format_real(d) +
                           " does not match first side " + numerics::format_real(a[0]));

    std::vector<Real> theta = central_angles(a, sol);

    // canonical frame: A1 at origin, A2 on the positive x axis
    Real half = a[0] / 2;
    Real h2 = sol.r * sol.r - half * half;
    Real h = h2 > 0 ? sqrt(h2) : Real(0);
    bool center_below = !sol.central && !sol.boundary && sol.max_index == 0;
    Point C{half, center_below ? -h : h};

    Real phi = atan2(-C.y, -C.x); // angle of A1 as seen from the center
    std::vector<Point> verts;
    verts.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        verts.push_back({C.x + sol.r * cos(phi), C.y + sol.r * sin(phi)});
        phi += theta[i];
    }

    // rigid map onto the requested anchors
    Real rot = atan2(A2.y - A1.y, A2.x - A1.x);
    Real cr = cos(rot), sr = sin(rot);
    auto map = [&](const Point& p) {
        return Point{A1.x + cr * p.x - sr * p.y, A1.y + sr * p.x + cr * p.y};
    };
    CyclicPolygon P;
    for (const Point& v : verts) P.vertices.push_back(map(v));
    // The first edge is anchored by contract; scrub the trig/rigid-map noise.
    P.vertices[0] = A1;
    P.vertices[1] = A2;
    P.center = map(C);
    P.radius = sol.r;
    classify_centrality(P, tol);
    return P;
}

inline LineSet side_lines(const CyclicPolygon& P, const Tolerance& tol = default_tolerance()) {
    std::vector<Line> ls;
    for (std::size_t i = 0; i < P.size(); ++i)
        ls.push_back(euclid::O1(P.vertices[i], P.vertices[(i + 1) % P.size()], tol));
    return LineSet(std::move(ls), tol);
}

inline bool is_regular(const CyclicPolygon& P, const Tolerance& tol = default_tolerance()) {
    Real s0 = P.side(0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (!real_near(P.side(i), s0, tol)) return false;
        if (!real_near(euclid::dist(P.vertices[i], P.center), P.radius, tol)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// rpa: regular (n+1)-gon -> regular n-gon sharing the first two vertices.
// The new polygon is B_i = C + zeta^(i-1) (B_1 - C) around its own center
// C = (A_2 - A_1 zeta) / (1 - zeta), zeta = e^(2 pi i / n).
// ---------------------------------------------------------------------------

struct FoldResult {
    CyclicPolygon polygon;
    LineSet creases; // sides of the new polygon: the simultaneous fold lines
};

inline FoldResult rpa(const CyclicPolygon& P, const Tolerance& tol = default_tolerance()) {
    if (P.size() < 4)
        throw TooFewSides("rpa input must have at least 4 vertices");
    if (!is_regular(P, tol))
        throw NotRegular("rpa needs a regular polygon");
    unsigned n = static_cast<unsigned>(P.size()) - 1;

    Point zeta = root_of_unity(n).value;
    Point A1 = P.vertices[0], A2 = P.vertices[1];
    // C = (A2 - A1 * zeta) / (1 - zeta)
    Point num = A2 - cmul(A1, zeta);
    Point den{1 - zeta.x, -zeta.y};
    Real den2 = den.x * den.x + den.y * den.y;
    Point C = cmul(num, Point{den.x / den2, -den.y / den2});

    CyclicPolygon Q;
    Point arm = A1 - C;
    for (unsigned i = 0; i < n; ++i) {
        Q.vertices.push_back(C + arm);
        arm = cmul(arm, zeta);
    }
    Q.center = C;
    Q.radius = euclid::dist(A1, C);
    classify_centrality(Q, tol);

    if (Q.radius >= P.radius - tol.eps_abs)
        throw RadiusNotDecreasing("rpa radius " + numerics::format_real(Q.radius) +
                                  " did not shrink from " + numerics::format_real(P.radius));
    return {Q, side_lines(Q, tol)};
}

// ---------------------------------------------------------------------------
// cpa: central cyclic (n+k)-gon -> cyclic n-gon on its first n side lengths,
// anchored on the shared first side. k is 1 or 2.
// ---------------------------------------------------------------------------

inline FoldResult cpa(const CyclicPolygon& P1, unsigned k,
                      const Tolerance& tol = default_tolerance()) {
    if (k != 1 && k != 2) throw std::invalid_argument("cpa needs k in {1, 2}");
    if (P1.size() < 3 + k)
        throw TooFewSides("cpa input must keep at least 3 sides");

    CyclicPolygon check = P1;
    classify_centrality(check, tol);
    if (!check.central)
        throw NotCentral("cpa needs the circumcenter strictly inside the polygon");

    std::size_t n = P1.size() - k;
    std::vector<Real> kept;
    for (std::size_t i = 0; i < n; ++i) kept.push_back(P1.side(i));
    SideLengths a(std::move(kept));
    require_closable(a, tol);

    CircumradiusSolution sol = circumradius_solve(a, tol);
    if (sol.r >= P1.radius - tol.eps_abs)
        throw RadiusNotDecreasing("cpa radius " + numerics::format_real(sol.r) +
                                  " did not shrink from " + numerics::format_real(P1.radius));

    CyclicPolygon Q = place_cyclic(a, sol, P1.vertices[0], P1.vertices[1], tol);
    return {Q, side_lines(Q, tol)};
}

// ---------------------------------------------------------------------------
// General cyclic construction. Pick an exact dyadic radius R = m/8 just
// above 1.05x the target radius, lay the chords on the R-circle, close it
// into a central helper polygon with one chord (swept arc > pi) or two
// chords through the antipode of A2 (swept arc <= pi), then fold with cpa.
// ---------------------------------------------------------------------------

struct CyclicConstruction {
    CyclicPolygon polygon;  // the requested n-gon
    LineSet creases;        // fold lines of the final cpa
    CyclicPolygon helper;   // auxiliary central (n+k)-gon on the R-circle
    Rational R;             // its exact circumradius
    unsigned k;             // number of closing chords used (1 or 2)
};

inline CyclicConstruction construct_cyclic(const Point& A1, const Point& A2, const SideLengths& a,
                                           const Tolerance& tol = default_tolerance()) {
    Real d = euclid::dist(A1, A2);
    if (!real_near(d, a[0], tol))
        throw SideMismatch("anchor distance " + numerics::format_real(d) +
                           " does not match first side " + numerics::format_real(a[0]));
    require_closable(a, tol);
    CircumradiusSolution target = circumradius_solve(a, tol);

    // smallest eighth strictly above 1.05 * r
    Rational R = [&] {
        Real scaled = target.r * Real(21) / Real(20) * 8;
        numerics::Integer m = numerics::Integer(floor(scaled)) + 1;
        return Rational(m) / 8;
    }();
    Real Rr = numerics::to_real(R);

    Real W(0);
    std::vector<Real> theta(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        theta[i] = 2 * asin_clamped(a[i] / (2 * Rr));
        W += theta[i];
    }

    std::vector<Real> helper_sides(a.values);
    unsigned k;
    if (W > pi()) {
        k = 1; // one closing chord spans the remaining arc 2*pi - W < pi
        helper_sides.push_back(2 * Rr * sin(W / 2));
    } else {
        k = 2; // route the closure through the antipode of A2
        helper_sides.push_back(2 * Rr * sin((pi() + theta[0] - W) / 2));
        helper_sides.push_back(2 * Rr * cos(theta[0] / 2));
    }

    // The helper closes centrally at radius exactly R by construction; no
    // second solve is needed to place it.
    SideLengths ha(std::move(helper_sides));
    CircumradiusSolution hsol{Rr, true, false, ha.max_index()};
    CyclicPolygon helper = place_cyclic(ha, hsol, A1, A2, tol);

    FoldResult folded = cpa(helper, k, tol);
    return {folded.polygon, folded.creases, helper, R, k};
}

// ---------------------------------------------------------------------------
// Pyramid: right pyramid with apex over the circumcenter, all lateral edges
// of length R. Exists iff every chord fits (a_i < 2R) and the apex angles
// sum below 2*pi; its base is the cyclic polygon on the given sides.
// ---------------------------------------------------------------------------

struct Point3 {
    Real x{0}, y{0}, z{0};
};

struct Pyramid {
    std::vector<Point3> base; // counterclockwise in the z = 0 plane
    Point3 apex;
    Real slant;       // R: apex distance to every base vertex
    Real base_radius; // r: circumradius of the base polygon
    Real height;      // sqrt(R^2 - r^2)
    CircumradiusSolution base_solution;
};

inline Pyramid pyramid(const Real& R, const SideLengths& a,
                       const Tolerance& tol = default_tolerance()) {
    if (R <= 0) throw std::invalid_argument("slant length must be positive");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= 2 * R)
            throw ChordTooLong("side " + numerics::format_real(a[i]) +
                               " cannot chord a circle of radius " + numerics::format_real(R));

    Real apex_sum(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        apex_sum += 2 * asin_clamped(a[i] / (2 * R));
    if (apex_sum >= 2 * pi() - tol.eps_abs)
        throw ApexAngleOverflow("apex angles sum to " + numerics::format_real(apex_sum) +
                                " >= 2*pi; the faces cannot fold into a cone");

    CircumradiusSolution sol = circumradius_solve(a, tol);
    Real h2 = R * R - sol.r * sol.r;
    if (h2 <= 0)
        throw ApexAngleOverflow("base radius does not leave room for a positive height");

    Pyramid pyr;
    pyr.slant = R;
    pyr.base_radius = sol.r;
    pyr.height = sqrt(h2);
    pyr.base_solution = sol;
    pyr.apex = {Real(0), Real(0), pyr.height};

    std::vector<Real> theta = central_angles(a, sol);
    Real phi(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        pyr.base.push_back({sol.r * cos(phi), sol.r * sin(phi), Real(0)});
        phi += theta[i];
    }
    return pyr;
}

// ---------------------------------------------------------------------------
// Regular n-gon on a given first side, constructed with the plane axioms:
// a power-of-two gon from repeated angle bisection, then rpa descent.
// ---------------------------------------------------------------------------

inline FoldResult regular_ngon(unsigned n, const Point& A1, const Point& A2,
                               const Tolerance& tol = default_tolerance()) {
    if (n < 3) throw TooFewSides("regular_ngon needs n >= 3");
    Real d = euclid::dist(A1, A2);
    if (d <= tol.eps_abs) throw CoincidentPoints("regular_ngon anchors coincide");

    // m = 2^(ceil(log2(n+1)) + 1): the power-of-two gon the descent starts from
    unsigned k = 0;
    while ((1u << k) < n + 1) ++k;
    ++k;
    unsigned m = 1u << k;

    // canonical frame: first side from the origin along +x with true length
    Point B1{Real(0), Real(0)}, B2{d, Real(0)};
    Line base = euclid::O1(B1, B2, tol);
    Line perp1 = euclid::O4(B1, base, tol);
    Line perp2 = euclid::O4(B2, base, tol);

    Real half_pi = pi() / 2;
    // interior bisector at B2: direction pi/2 + pi/m by halving from 3*pi/4
    auto chain = [&](const Line& vertical, const Line& start, bool above) {
        // pick from O3 the bisector strictly between pi/2 and the previous
        // direction (or on the requested side of pi/2 for the first step)
        Line prev = start;
        Real prev_angle = euclid::direction_angle(prev);
        for (unsigned step = 2; step < k; ++step) {
            LineSet bis = euclid::O3(vertical, prev, tol);
            bool found = false;
            for (const Line& cand : bis) {
                Real t = euclid::direction_angle(cand);
                bool ok = above ? (t > half_pi && t < prev_angle)
                                : (t < half_pi && t > prev_angle);
                if (ok) {
                    prev = cand;
                    prev_angle = t;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("bisector chain lost its bracket");
        }
        return prev;
    };

    // first halving: bisect the base with the perpendicular at each anchor
    auto pick_first = [&](const Line& vertical, bool above) {
        LineSet bis = euclid::O3(base, vertical, tol);
        for (const Line& cand : bis) {
            Real t = euclid::direction_angle(cand);
            if (above ? t > half_pi : t < half_pi) return cand;
        }
        throw std::logic_error("first bisector missing");
    };

    Line at2 = chain(perp2, pick_first(perp2, true), true);   // pi/2 + pi/m through B2
    Line at1 = chain(perp1, pick_first(perp1, false), false); // pi/2 - pi/m through B1

    Point center = euclid::LI(at1, at2, tol);

    CyclicPolygon gon;
    gon.vertices = {B1, B2};
    for (unsigned i = 2; i < m; ++i) {
        Line mirror = euclid::O1(center, gon.vertices[i - 1], tol);
        gon.vertices.push_back(euclid::reflect_point(gon.vertices[i - 2], mirror));
    }
    gon.center = center;
    gon.radius = euclid::dist(center, B1);
    classify_centrality(gon, tol);

    // map the canonical frame onto the requested anchors
    Real rot = atan2(A2.y - A1.y, A2.x - A1.x);
    Real cr = cos(rot), sr = sin(rot);
    auto map = [&](const Point& p) {
        return Point{A1.x + cr * p.x - sr * p.y, A1.y + sr * p.x + cr * p.y};
    };
    for (Point& v : gon.vertices) v = map(v);
    gon.center = map(gon.center);

    while (gon.size() > n) gon = rpa(gon, tol).polygon;
    return {gon, side_lines(gon, tol)};
}

} // namespace origami::cyclic
