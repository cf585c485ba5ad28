#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include <origami/algebra.hpp>
#include <origami/euclid.hpp>

using namespace origami;
using euclid::Line;
using euclid::LineSet;
using euclid::Point;
using numerics::Integer;
using numerics::Rational;
using numerics::Real;

namespace {

Real tol_eps() { return numerics::default_tolerance().eps_abs; }

Real slope(const Line& l) { return -l.a / l.b; }

Point rand_point(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-12, 12), den(1, 5);
    return {numerics::to_real(Rational(num(rng), den(rng))),
            numerics::to_real(Rational(num(rng), den(rng)))};
}

// frozen reference values
const char* kTanPi8 = "0.4142135623730950488016887242096980785696718753769481";
const char* kCbrt2 = "1.259921049894873164767210607278228350570251464701508";
const char* kBelochRoot = "1.769292354238631415240409464335033492670553045898857";

} // namespace

TEST_CASE("points and lines", "[euclid]") {
    Point p{Real(3), Real(4)};
    REQUIRE(euclid::norm(p) == 5);
    REQUIRE(euclid::dist(p, Point{Real(0), Real(4)}) == 3);
    REQUIRE(euclid::cross(Point{Real(1), Real(0)}, Point{Real(0), Real(1)}) == 1);

    Line l = euclid::make_line(Real(-2), Real(0), Real(4));
    REQUIRE(l.a == 1); // canonical: unit normal, a > 0
    REQUIRE(l.b == 0);
    REQUIRE(l.c == -2);
    REQUIRE(euclid::point_on_line(Point{Real(2), Real(7)}, l));
    REQUIRE(euclid::line_eval(l, Point{Real(5), Real(0)}) == 3); // signed distance

    // negation is the same geometric line
    REQUIRE(euclid::lines_equal(euclid::make_line(Real(0), Real(-3), Real(6)),
                                euclid::make_line(Real(0), Real(1), Real(-2))));
    REQUIRE_THROWS_AS(euclid::make_line(Real(0), Real(0), Real(1)), CoincidentPoints);
}

TEST_CASE("direction_angle spans [0, pi)", "[euclid]") {
    REQUIRE(euclid::direction_angle(euclid::make_line(Real(0), Real(1), Real(0))) == 0);
    Real vert = euclid::direction_angle(euclid::make_line(Real(1), Real(0), Real(0)));
    REQUIRE(abs(vert - numerics::pi() / 2) < tol_eps());
    Real diag = euclid::direction_angle(euclid::make_line(Real(1), Real(-1), Real(0)));
    REQUIRE(abs(diag - numerics::pi() / 4) < tol_eps());
}

TEST_CASE("O1 is symmetric down to the bits", "[euclid]") {
    std::mt19937 rng(40923);
    for (int i = 0; i < 50; ++i) {
        Point p = rand_point(rng), q = rand_point(rng);
        if (euclid::points_equal(p, q)) continue;
        Line pq = euclid::O1(p, q), qp = euclid::O1(q, p);
        REQUIRE(pq.a == qp.a);
        REQUIRE(pq.b == qp.b);
        REQUIRE(pq.c == qp.c);
        REQUIRE(euclid::point_on_line(p, pq));
        REQUIRE(euclid::point_on_line(q, pq));
    }
    Line h = euclid::O1(Point{Real(0), Real(2)}, Point{Real(5), Real(2)});
    REQUIRE(euclid::lines_equal(h, euclid::make_line(Real(0), Real(1), Real(-2))));
    REQUIRE_THROWS_AS(euclid::O1(Point{}, Point{}), CoincidentPoints);
}

TEST_CASE("O2 folds p onto q", "[euclid]") {
    Line bis = euclid::O2(Point{Real(0), Real(0)}, Point{Real(2), Real(0)});
    REQUIRE(euclid::lines_equal(bis, euclid::make_line(Real(1), Real(0), Real(-1)))); // x = 1

    std::mt19937 rng(40924);
    for (int i = 0; i < 100; ++i) {
        Point p = rand_point(rng), q = rand_point(rng);
        if (euclid::points_equal(p, q)) continue;
        Line m = euclid::O2(p, q);
        REQUIRE(euclid::points_equal(euclid::reflect_point(p, m), q));
        // symmetric in its arguments
        Line m2 = euclid::O2(q, p);
        REQUIRE(m.a == m2.a);
        REQUIRE(m.b == m2.b);
        REQUIRE(m.c == m2.c);
        // every point of the crease is equidistant from p and q
        Point foot{-m.c * m.a, -m.c * m.b};
        REQUIRE(abs(euclid::dist(foot, p) - euclid::dist(foot, q)) < tol_eps() * 100);
    }
    REQUIRE_THROWS_AS(euclid::O2(Point{Real(1), Real(1)}, Point{Real(1), Real(1)}),
                      CoincidentPoints);
}

TEST_CASE("O3 bisects", "[euclid]") {
    Line xaxis = euclid::make_line(Real(0), Real(1), Real(0));
    Line diag = euclid::make_line(Real(1), Real(-1), Real(0)); // y = x

    SECTION("intersecting lines get two bisectors, sorted by direction") {
        LineSet bis = euclid::O3(xaxis, diag);
        REQUIRE(bis.size() == 2);
        REQUIRE(abs(slope(bis[0]) - Real(kTanPi8)) < tol_eps());
        REQUIRE(abs(euclid::direction_angle(bis[0]) - numerics::pi() / 8) < tol_eps());
        REQUIRE(abs(euclid::direction_angle(bis[1]) - 5 * numerics::pi() / 8) < tol_eps());
        REQUIRE(euclid::point_on_line(Point{Real(0), Real(0)}, bis[0]));
        REQUIRE(euclid::point_on_line(Point{Real(0), Real(0)}, bis[1]));
        // a bisector maps one line onto the other: reflect two probe points
        for (const Line& b : bis) {
            Point probe{Real(3), Real(0)};
            REQUIRE(euclid::point_on_line(euclid::reflect_point(probe, b), diag));
        }
        // the two bisectors are perpendicular
        REQUIRE(abs(bis[0].a * bis[1].a + bis[0].b * bis[1].b) < tol_eps());
    }
    SECTION("parallel lines get the midline") {
        Line y2 = euclid::make_line(Real(0), Real(1), Real(-2));
        LineSet bis = euclid::O3(xaxis, y2);
        REQUIRE(bis.size() == 1);
        REQUIRE(euclid::lines_equal(bis[0], euclid::make_line(Real(0), Real(1), Real(-1))));
        // orientation of the arguments must not matter
        LineSet bis2 = euclid::O3(xaxis, euclid::make_line(Real(0), Real(-1), Real(2)));
        REQUIRE(bis2.size() == 1);
        REQUIRE(euclid::lines_equal(bis2[0], bis[0]));
    }
    SECTION("coincident lines are rejected") {
        REQUIRE_THROWS_AS(euclid::O3(xaxis, xaxis), CoincidentLines);
        REQUIRE_THROWS_AS(euclid::O3(diag, euclid::make_line(Real(-2), Real(2), Real(0))),
                          CoincidentLines);
    }
}

TEST_CASE("O4 drops a perpendicular", "[euclid]") {
    Line xaxis = euclid::make_line(Real(0), Real(1), Real(0));
    Line perp = euclid::O4(Point{Real(3), Real(4)}, xaxis);
    REQUIRE(euclid::lines_equal(perp, euclid::make_line(Real(1), Real(0), Real(-3)))); // x = 3

    std::mt19937 rng(40925);
    for (int i = 0; i < 50; ++i) {
        Point p = rand_point(rng), a = rand_point(rng), b = rand_point(rng);
        if (euclid::points_equal(a, b)) continue;
        Line l = euclid::O1(a, b);
        Line t = euclid::O4(p, l);
        REQUIRE(euclid::point_on_line(p, t));
        REQUIRE(abs(l.a * t.a + l.b * t.b) < tol_eps()); // normals orthogonal
    }
}

TEST_CASE("O5 folds p onto l through q", "[euclid]") {
    Line xaxis = euclid::make_line(Real(0), Real(1), Real(0));
    Point p{Real(0), Real(2)};

    SECTION("two creases through the corner") {
        LineSet s = euclid::O5(p, xaxis, Point{Real(0), Real(0)});
        REQUIRE(s.size() == 2);
        REQUIRE(euclid::lines_equal(s[0], euclid::make_line(Real(1), Real(-1), Real(0))));
        REQUIRE(euclid::lines_equal(s[1], euclid::make_line(Real(1), Real(1), Real(0))));
    }
    SECTION("tangent circle gives one crease") {
        LineSet s = euclid::O5(p, xaxis, Point{Real(0), Real(1)});
        REQUIRE(s.size() == 1);
        REQUIRE(euclid::lines_equal(s[0], euclid::make_line(Real(0), Real(1), Real(-1))));
    }
    SECTION("unreachable line gives none") {
        REQUIRE(euclid::O5(p, xaxis, Point{Real(0), Real(3)}).empty());
    }
    SECTION("p == q gives none") {
        REQUIRE(euclid::O5(p, xaxis, p).empty());
    }
    SECTION("p already on l keeps the crease through p and q") {
        Point on{Real(1), Real(0)}, q{Real(0), Real(2)};
        LineSet s = euclid::O5(on, xaxis, q);
        REQUIRE(s.size() == 2);
        bool through_both = false;
        for (const Line& l : s)
            through_both |= euclid::point_on_line(on, l) && euclid::point_on_line(q, l);
        REQUIRE(through_both);
    }
    SECTION("every returned crease is sound") {
        std::mt19937 rng(40926);
        for (int i = 0; i < 60; ++i) {
            Point pp = rand_point(rng), qq = rand_point(rng);
            Point a = rand_point(rng), b = rand_point(rng);
            if (euclid::points_equal(a, b)) continue;
            Line l = euclid::O1(a, b);
            for (const Line& crease : euclid::O5(pp, l, qq)) {
                REQUIRE(euclid::point_on_line(qq, crease));
                REQUIRE(euclid::point_on_line(euclid::reflect_point(pp, crease), l));
            }
        }
    }
}

TEST_CASE("O7 folds p onto l1 perpendicular to l2", "[euclid]") {
    Line xaxis = euclid::make_line(Real(0), Real(1), Real(0));
    Line diag = euclid::make_line(Real(1), Real(-1), Real(0)); // y = x

    SECTION("worked example: crease x = 1/2") {
        LineSet s = euclid::O7(Point{Real(0), Real(1)}, diag, xaxis);
        REQUIRE(s.size() == 1);
        REQUIRE(euclid::lines_equal(s[0], euclid::make_line(Real(2), Real(0), Real(-1))));
    }
    SECTION("parallel lines, p off l1: impossible") {
        Line up = euclid::make_line(Real(1), Real(-1), Real(2));
        REQUIRE(euclid::O7(Point{Real(0), Real(1)}, diag, up).empty());
    }
    SECTION("parallel lines, p on l1: the crease through p") {
        Line up = euclid::make_line(Real(1), Real(-1), Real(2));
        LineSet s = euclid::O7(Point{Real(1), Real(1)}, diag, up);
        REQUIRE(s.size() == 1);
        REQUIRE(euclid::point_on_line(Point{Real(1), Real(1)}, s[0]));
        REQUIRE(abs(s[0].a * up.a + s[0].b * up.b) < tol_eps());
    }
    SECTION("soundness on random input") {
        std::mt19937 rng(40927);
        for (int i = 0; i < 60; ++i) {
            Point p = rand_point(rng);
            Point a = rand_point(rng), b = rand_point(rng);
            Point c = rand_point(rng), d = rand_point(rng);
            if (euclid::points_equal(a, b) || euclid::points_equal(c, d)) continue;
            Line l1 = euclid::O1(a, b), l2 = euclid::O1(c, d);
            for (const Line& crease : euclid::O7(p, l1, l2)) {
                REQUIRE(abs(crease.a * l2.a + crease.b * l2.b) < tol_eps() * 10);
                REQUIRE(euclid::point_on_line(euclid::reflect_point(p, crease), l1));
            }
        }
    }
}

TEST_CASE("LI intersects lines", "[euclid]") {
    Point x = euclid::LI(euclid::O1(Point{Real(0), Real(0)}, Point{Real(1), Real(1)}),
                         euclid::O1(Point{Real(1), Real(0)}, Point{Real(0), Real(1)}));
    REQUIRE(euclid::points_equal(x, Point{Real(1) / 2, Real(1) / 2}));
    REQUIRE_THROWS_AS(euclid::LI(euclid::make_line(Real(0), Real(1), Real(0)),
                                 euclid::make_line(Real(0), Real(1), Real(-1))),
                      ParallelLines);
}

TEST_CASE("reflect_point is an involution", "[euclid]") {
    REQUIRE(euclid::points_equal(
        euclid::reflect_point(Point{Real(2), Real(3)}, euclid::make_line(Real(1), Real(-1), Real(0))),
        Point{Real(3), Real(2)}));
    REQUIRE(euclid::points_equal(
        euclid::reflect_point(Point{Real(1), Real(2)}, euclid::make_line(Real(1), Real(0), Real(-3))),
        Point{Real(5), Real(2)}));

    std::mt19937 rng(40928);
    for (int i = 0; i < 50; ++i) {
        Point p = rand_point(rng), a = rand_point(rng), b = rand_point(rng);
        if (euclid::points_equal(a, b)) continue;
        Line l = euclid::O1(a, b);
        Point twice = euclid::reflect_point(euclid::reflect_point(p, l), l);
        REQUIRE(euclid::points_equal(twice, p));
    }
}

TEST_CASE("LineSet orders, deduplicates, bounds-checks", "[euclid]") {
    Line a = euclid::make_line(Real(0), Real(1), Real(0));  // angle 0
    Line b = euclid::make_line(Real(1), Real(-1), Real(0)); // angle pi/4
    Line c = euclid::make_line(Real(1), Real(0), Real(-2)); // angle pi/2

    LineSet s1({c, a, b});
    LineSet s2({b, c, a});
    REQUIRE(s1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(euclid::lines_equal(s1[i], s2[i]));
    REQUIRE(euclid::lines_equal(s1[0], a));
    REQUIRE(euclid::lines_equal(s1[2], c));

    // a line and its negation are one crease
    LineSet dedup({b, euclid::make_line(Real(-1), Real(1), Real(0))});
    REQUIRE(dedup.size() == 1);

    REQUIRE_NOTHROW(s1.at(2));
    REQUIRE_THROWS_MATCHES(s1.at(3), IndexOutOfRange,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("3 solution(s)")));
}

TEST_CASE("cubic_real_roots", "[euclid]") {
    auto roots = [](double c0, double c1, double c2, double c3) {
        return euclid::cubic_real_roots(Real(c0), Real(c1), Real(c2), Real(c3));
    };
    SECTION("cube root of two") {
        std::vector<Real> r = roots(-2, 0, 0, 1);
        REQUIRE(r.size() == 1);
        REQUIRE(abs(r[0] - Real(kCbrt2)) < tol_eps());
    }
    SECTION("one real root of x^3 - 2x - 2") {
        std::vector<Real> r = roots(-2, -2, 0, 1);
        REQUIRE(r.size() == 1);
        REQUIRE(abs(r[0] - Real(kBelochRoot)) < tol_eps());
    }
    SECTION("three distinct roots, ascending") {
        std::vector<Real> r = roots(0, -1, 0, 1); // x(x-1)(x+1)
        REQUIRE(r.size() == 3);
        REQUIRE(abs(r[0] + 1) < tol_eps());
        REQUIRE(abs(r[1]) < tol_eps());
        REQUIRE(abs(r[2] - 1) < tol_eps());
    }
    SECTION("double root reported once") {
        std::vector<Real> r = roots(2, -3, 0, 1); // (x-1)^2 (x+2)
        REQUIRE(r.size() == 2);
        REQUIRE(abs(r[0] + 2) < tol_eps());
        REQUIRE(abs(r[1] - 1) < numerics::pow10(-20)); // double roots cost half the digits
    }
    SECTION("triple root reported once") {
        std::vector<Real> r = roots(-1, 3, -3, 1); // (x-1)^3
        REQUIRE(r.size() == 1);
        REQUIRE(abs(r[0] - 1) < numerics::pow10(-12));
    }
    SECTION("degenerate leading coefficients fall through") {
        REQUIRE(roots(-1, 0, 1, 0).size() == 2);  // quadratic x^2 = 1
        std::vector<Real> lin = roots(-3, 2, 0, 0);
        REQUIRE(lin.size() == 1);
        REQUIRE(abs(lin[0] - Real(1.5)) < tol_eps());
        REQUIRE(roots(1, 0, 1, 0).empty()); // x^2 + 1
        REQUIRE(roots(7, 0, 0, 0).empty()); // constant
        REQUIRE(roots(0, 0, 0, 0).empty()); // zero
    }
}

TEST_CASE("O6 finds common tangents", "[euclid]") {
    Line d2 = euclid::make_line(Real(0), Real(1), Real(1) / 2); // y = -1/2
    Point f2{Real(0), Real(1) / 2};

    SECTION("doubling the cube") {
        // creases tangent to both parabolas; the single slope is 2^(1/3)
        Line d1 = euclid::make_line(Real(1), Real(0), Real(-1)); // x = 1
        Point f1{Real(-1), Real(0)};
        LineSet s = euclid::O6(f1, d1, f2, d2);
        REQUIRE(s.size() == 1);
        REQUIRE(abs(slope(s[0]) - Real(kCbrt2)) < tol_eps());
    }
    SECTION("slope solves x^3 - 2x - 2") {
        Line d1 = euclid::make_line(Real(1), Real(0), Real(-1)); // x = 1
        Point f1{Real(-1), Real(-1)};
        LineSet s = euclid::O6(f1, d1, f2, d2);
        REQUIRE(s.size() == 1);
        REQUIRE(abs(slope(s[0]) - Real(kBelochRoot)) < tol_eps());
    }
    SECTION("three common tangents") {
        // x^3 - 4x + 1 has three real roots
        Line d1 = euclid::make_line(Real(1), Real(0), Real(1) / 2); // x = -1/2
        Point f1{Real(1) / 2, Real(-2)};
        LineSet s = euclid::O6(f1, d1, f2, d2);
        REQUIRE(s.size() == 3);
        for (const Line& crease : s) {
            Real m = slope(crease);
            REQUIRE(abs(m * m * m - 4 * m + 1) < tol_eps() * 100);
        }
    }
    SECTION("reflection residuals vanish for every crease") {
        Line d1 = euclid::make_line(Real(1), Real(0), Real(1) / 2);
        Point f1{Real(1) / 2, Real(-2)};
        for (const Line& crease : euclid::O6(f1, d1, f2, d2)) {
            REQUIRE(abs(euclid::line_eval(d1, euclid::reflect_point(f1, crease))) <
                    tol_eps() * 100);
            REQUIRE(abs(euclid::line_eval(d2, euclid::reflect_point(f2, crease))) <
                    tol_eps() * 100);
        }
    }
    SECTION("mirroring the configuration mirrors the creases") {
        Line d1 = euclid::make_line(Real(1), Real(0), Real(1) / 2);
        Point f1{Real(1) / 2, Real(-2)};
        LineSet plain = euclid::O6(f1, d1, f2, d2);
        // x -> -x on everything
        LineSet mirrored = euclid::O6(Point{-f1.x, f1.y}, euclid::make_line(-d1.a, d1.b, d1.c),
                                      Point{-f2.x, f2.y}, euclid::make_line(-d2.a, d2.b, d2.c));
        REQUIRE(mirrored.size() == plain.size());
        std::vector<Real> ms, mp;
        for (const Line& l : plain) mp.push_back(slope(l));
        for (const Line& l : mirrored) ms.push_back(-slope(l));
        std::sort(mp.begin(), mp.end());
        std::sort(ms.begin(), ms.end());
        for (std::size_t i = 0; i < mp.size(); ++i) REQUIRE(abs(mp[i] - ms[i]) < tol_eps() * 10);
    }
    SECTION("focus on directrix is degenerate") {
        Line d1 = euclid::make_line(Real(1), Real(0), Real(-1));
        REQUIRE_THROWS_AS(euclid::O6(Point{Real(1), Real(0)}, d1, f2, d2), DegenerateParabola);
        REQUIRE_THROWS_AS(euclid::O6(f2, d2, f2, d2), DegenerateParabola);
    }
    SECTION("crease count matches the exact real root count") {
        std::mt19937 rng(40929);
        std::uniform_int_distribution<long> num(-10, 10), den(1, 4);
        int done = 0;
        while (done < 10) {
            Rational A(num(rng), den(rng)), B(num(rng), den(rng));
            if (B == 0) continue;
            algebra::QPoly f({B, A, Rational(0), Rational(1)}); // x^3 + A x + B
            algebra::RootIsolation iso = algebra::isolate_real_roots(f);

            Point g1{numerics::to_real(B / 2), numerics::to_real(A / 2)};
            Line e1 = euclid::make_line(Real(1), Real(0), numerics::to_real(B / 2));
            LineSet s = euclid::O6(g1, e1, f2, d2);
            REQUIRE(s.size() == iso.intervals.size());

            std::vector<Real> got;
            for (const Line& l : s) got.push_back(slope(l));
            std::sort(got.begin(), got.end());
            Rational w(1, Integer("100000000000000000000000000000000000"));
            for (std::size_t i = 0; i < iso.intervals.size(); ++i) {
                auto iv = algebra::refine_root(iso.squarefree, iso.intervals[i], w);
                Real want = numerics::to_real(Rational((iv.first + iv.second) / 2));
                REQUIRE(abs(got[i] - want) < numerics::pow10(-33));
            }
            ++done;
        }
    }
}
