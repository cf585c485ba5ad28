#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "cyclic.hpp"
#include "errors.hpp"
#include "euclid.hpp"
#include "numerics.hpp"
#include "render.hpp"
#include "script.hpp"

// Command implementations behind the CLI front end. Each takes structured
// options plus output streams and returns the process exit code, so tests can
// drive them in-process: 0 success, 1 parse error, 2 runtime failure.

namespace origami::cli {

using numerics::Rational;
using numerics::Real;

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Uniform error-to-exit-code mapping shared by every subcommand.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const SyntaxError& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline std::string fmt(const Real& x) { return numerics::format_real(x); }

inline std::string fmt(const euclid::Point& p) {
    return "(" + fmt(p.x) + ", " + fmt(p.y) + ")";
}

} // namespace detail

// ---------------------------------------------------------------------------
// run: execute an .ori script.
// ---------------------------------------------------------------------------

struct RunOptions {
    std::string path;
    bool trace = false;
};

inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    std::ifstream in(opt.path, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << opt.path << "'\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    // Static diagnostics (syntax, unknown names, arity, types) are parse
    // failures; anything the interpreter throws afterwards is a runtime one.
    script::Script s;
    try {
        s = script::parse(buf.str());
    } catch (const std::exception& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    }
    return detail::guarded(err, [&] {
        script::ConstructionState st = script::execute(s);
        if (opt.trace)
            for (const script::TraceEntry& e : st.trace) {
                out << "line " << e.line << ": " << e.output << " = " << e.op << "("
                    << detail::join(e.inputs, ", ") << ")";
                if (!e.detail.empty()) out << "  # " << e.detail;
                out << "\n";
            }
        return 0;
    });
}

// ---------------------------------------------------------------------------
// cyclic: solve and place the convex cyclic polygon for given side lengths.
// ---------------------------------------------------------------------------

struct CyclicOptions {
    std::vector<Real> sides;
    std::string svg; // optional output path
};

inline int cmd_cyclic(const CyclicOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cyclic::SideLengths a(opt.sides);
        cyclic::require_closable(a);
        cyclic::CircumradiusSolution sol = cyclic::circumradius_solve(a);
        euclid::Point A1{Real(0), Real(0)}, A2{a[0], Real(0)};
        cyclic::CyclicPolygon P = cyclic::place_cyclic(a, sol, A1, A2);

        out << "n = " << a.size() << "\n";
        out << "r = " << detail::fmt(P.radius) << "\n";
        out << "central = " << (P.central ? "true" : "false") << "\n";
        out << "boundary = " << (P.boundary ? "true" : "false") << "\n";
        out << "center = " << detail::fmt(P.center) << "\n";
        for (std::size_t i = 0; i < P.size(); ++i)
            out << "A" << (i + 1) << " = " << detail::fmt(P.vertices[i]) << "\n";
        out << "d = " << detail::fmt(euclid::dist(P.vertices[2], P.vertices[0])) << "\n";

        if (!opt.svg.empty()) {
            render::SvgScene scene;
            scene.add_polygon(P.vertices, "");
            for (std::size_t i = 0; i < P.size(); ++i)
                scene.add_point(P.vertices[i], "A" + std::to_string(i + 1));
            scene.add_point(P.center, "C");
            scene.write(opt.svg);
        }
        return 0;
    });
}

// ---------------------------------------------------------------------------
// pyramid: right pyramid with equal lateral edges over the cyclic base.
// ---------------------------------------------------------------------------

struct PyramidOptions {
    Real R{0};
    std::vector<Real> sides;
    std::string obj; // optional output path
};

inline int cmd_pyramid(const PyramidOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cyclic::Pyramid pyr = cyclic::pyramid(opt.R, cyclic::SideLengths(opt.sides));
        out << "n = " << pyr.base.size() << "\n";
        out << "slant = " << detail::fmt(pyr.slant) << "\n";
        out << "base_radius = " << detail::fmt(pyr.base_radius) << "\n";
        out << "height = " << detail::fmt(pyr.height) << "\n";
        out << "apex = (" << detail::fmt(pyr.apex.x) << ", " << detail::fmt(pyr.apex.y) << ", "
            << detail::fmt(pyr.apex.z) << ")\n";
        for (std::size_t i = 0; i < pyr.base.size(); ++i)
            out << "B" << (i + 1) << " = (" << detail::fmt(pyr.base[i].x) << ", "
                << detail::fmt(pyr.base[i].y) << ", " << detail::fmt(pyr.base[i].z) << ")\n";
        if (!opt.obj.empty()) {
            render::ObjMesh mesh;
            mesh.add_pyramid(pyr);
            mesh.write(opt.obj);
        }
        return 0;
    });
}

// ---------------------------------------------------------------------------
// poly analyze: real-root count, isolation, irreducibility, S_p certificate.
// ---------------------------------------------------------------------------

struct PolyOptions {
    std::string text;
};

inline int cmd_poly(const PolyOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        algebra::QPoly f = algebra::parse_poly(opt.text);
        if (f.is_zero()) throw ZeroPolynomial("the zero polynomial has no certificate");

        out << "polynomial: " << algebra::poly_to_string(f) << "\n";
        out << "degree: " << f.degree() << "\n";

        algebra::RootIsolation iso = algebra::isolate_real_roots(f);
        out << "real roots: " << iso.intervals.size() << "\n";
        for (const auto& [lo, hi] : iso.intervals)
            out << "  root in (" << lo.str() << ", " << hi.str() << ")\n";

        algebra::GaloisCertificate cert = algebra::sp_criterion(f);
        const algebra::IrreducibilityVerdict& irr = cert.irreducibility;

        auto eis = algebra::eisenstein_search(f);
        if (eis)
            out << "eisenstein prime: " << eis->str() << "\n";
        else
            out << "eisenstein prime: none\n";

        out << "irreducible: ";
        switch (irr.status) {
            case algebra::IrreducibilityVerdict::Status::Irreducible: {
                out << "yes";
                switch (irr.certificate) {
                    case algebra::IrreducibilityVerdict::Certificate::RationalRoots:
                        out << " (degree <= 3, no rational root)";
                        break;
                    case algebra::IrreducibilityVerdict::Certificate::Eisenstein:
                        out << " (eisenstein p=" << irr.prime->str() << ")";
                        break;
                    case algebra::IrreducibilityVerdict::Certificate::ModPrimePattern:
                        out << " (irreducible mod " << irr.prime->str() << ")";
                        break;
                    case algebra::IrreducibilityVerdict::Certificate::DegreeSieve: {
                        out << " (degree sieve mod {";
                        std::string sep;
                        for (unsigned long p : irr.sieve_primes) {
                            out << sep << p;
                            sep = ", ";
                        }
                        out << "})";
                        break;
                    }
                    default: break;
                }
                break;
            }
            case algebra::IrreducibilityVerdict::Status::Reducible:
                out << "no (factor " << algebra::poly_to_string(*irr.factor) << ")";
                break;
            case algebra::IrreducibilityVerdict::Status::Unknown:
                out << "unknown";
                break;
        }
        out << "\n";

        if (cert.is_symmetric) {
            out << "galois group: S_" << cert.degree << " (" << cert.detail << ")\n";
            out << "solvable: " << (cert.non_solvable ? "no" : "yes") << "\n";
        } else {
            out << "galois group: undetermined (" << cert.detail << ")\n";
            if (f.degree() <= 4)
                out << "solvable: yes (degree <= 4)\n";
            else
                out << "solvable: unknown\n";
        }
        return 0;
    });
}

// ---------------------------------------------------------------------------
// ngon: regular n-gon by power-of-two descent; reports the chain and the
// maximum vertex deviation from the best rigidly-fitted ideal polygon.
// ---------------------------------------------------------------------------

// Least-squares rigid fit (translation + rotation, no scaling) of the ideal
// unit-side n-gon onto the constructed vertices; returns the max deviation.
inline Real ngon_deviation(const cyclic::CyclicPolygon& gon) {
    using euclid::Point;
    const std::size_t n = gon.size();
    const Real two_pi = 2 * numerics::pi();
    Real R_ideal = 1 / (2 * sin(numerics::pi() / static_cast<long>(n)));

    // Ideal polygon centered at the origin, vertex 0 on the +x axis.
    std::vector<Point> ideal(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real phi = two_pi * static_cast<long>(i) / static_cast<long>(n);
        ideal[i] = Point{R_ideal * cos(phi), R_ideal * sin(phi)};
    }

    Point centroid{Real(0), Real(0)};
    for (const Point& v : gon.vertices) centroid = centroid + v;
    centroid = Point{centroid.x / static_cast<long>(n), centroid.y / static_cast<long>(n)};

    // Optimal rotation from the cross-covariance of centered point sets.
    Real sc(0), ss(0);
    for (std::size_t i = 0; i < n; ++i) {
        Point d = gon.vertices[i] - centroid;
        sc += euclid::dot(ideal[i], d);
        ss += euclid::cross(ideal[i], d);
    }
    Real theta = atan2(ss, sc);
    Real ct = cos(theta), st = sin(theta);

    Real worst(0);
    for (std::size_t i = 0; i < n; ++i) {
        Point fit{centroid.x + ct * ideal[i].x - st * ideal[i].y,
                  centroid.y + st * ideal[i].x + ct * ideal[i].y};
        Real d = euclid::dist(fit, gon.vertices[i]);
        if (d > worst) worst = d;
    }
    return worst;
}

struct NgonOptions {
    unsigned n = 0;
    std::string svg;
};

inline int cmd_ngon(const NgonOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        euclid::Point O{Real(0), Real(0)}, I{Real(1), Real(0)};
        cyclic::FoldResult res = cyclic::regular_ngon(opt.n, O, I);

        unsigned k = 0;
        while ((1u << k) < opt.n + 1) ++k;
        ++k;
        unsigned m = 1u << k;
        out << "chain:";
        for (unsigned s = m; s >= opt.n; --s) out << " " << s;
        out << "\n";
        out << "n = " << opt.n << "\n";
        out << "r = " << detail::fmt(res.polygon.radius) << "\n";
        out << "max deviation = " << detail::fmt(ngon_deviation(res.polygon)) << "\n";

        if (!opt.svg.empty()) {
            render::SvgScene scene;
            scene.add_polygon(res.polygon.vertices, "");
            for (std::size_t i = 0; i < res.polygon.size(); ++i)
                scene.add_point(res.polygon.vertices[i], "P" + std::to_string(i));
            scene.add_point(res.polygon.center, "C");
            scene.write(opt.svg);
        }
        return 0;
    });
}

// ---------------------------------------------------------------------------
// cubic: solve x^3 + Ax + B = 0 by the common-tangent fold on the parabolas
// (y - A/2)^2 = 2Bx and y = x^2/2; every crease slope is a root.
// ---------------------------------------------------------------------------

struct CubicOptions {
    Rational a{0}, b{0};
};

inline int cmd_cubic(const CubicOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto tol = numerics::default_tolerance();
        Real A = numerics::to_real(opt.a), B = numerics::to_real(opt.b);
        out << "cubic: x^3 + (" << opt.a.str() << ")x + (" << opt.b.str() << ") = 0\n";

        std::vector<Real> roots;
        if (opt.b == 0) {
            // The first parabola degenerates to a line; factor x(x^2 + A).
            out << "degenerate parabola; factoring x(x^2 + (" << opt.a.str() << "))\n";
            roots.push_back(Real(0));
            if (opt.a < 0) {
                Real s = sqrt(-A);
                roots.push_back(-s);
                roots.push_back(s);
            }
            std::sort(roots.begin(), roots.end());
        } else {
            euclid::Point F1{B / 2, A / 2};
            euclid::Line d1{Real(1), Real(0), B / 2}; // x = -B/2
            euclid::Point F2{Real(0), Real(1) / 2};
            euclid::Line d2{Real(0), Real(1), Real(1) / 2}; // y = -1/2
            out << "parabola 1: focus (" << detail::fmt(F1.x) << ", " << detail::fmt(F1.y)
                << "), directrix x = " << detail::fmt(-B / 2) << "\n";
            out << "parabola 2: focus (0, 0.5), directrix y = -0.5\n";
            euclid::LineSet creases = euclid::O6(F1, d1, F2, d2);
            for (const euclid::Line& l : creases) {
                if (abs(l.b) <= tol.eps_abs)
                    throw Error("VerificationFailed", "vertical crease cannot encode a slope");
                roots.push_back(-l.a / l.b);
            }
            std::sort(roots.begin(), roots.end());
        }

        // Independent count: Sturm on the exact cubic.
        algebra::QPoly f({opt.b, opt.a, Rational(0), Rational(1)});
        long expected = algebra::sturm_count(f, std::nullopt, std::nullopt);
        out << "sturm real roots: " << expected << "\n";

        for (const Real& m : roots) {
            Real residual = abs(m * m * m + A * m + B);
            out << "root m = " << detail::fmt(m) << "  |m^3+Am+B| = " << detail::fmt(residual)
                << "\n";
            if (residual > tol.eps_abs * (1 + abs(m) * abs(m) * abs(m)))
                throw Error("VerificationFailed",
                            "slope " + detail::fmt(m) + " fails the cubic by " +
                                detail::fmt(residual));
        }
        if (static_cast<long>(roots.size()) != expected)
            throw Error("VerificationFailed",
                        "crease count " + std::to_string(roots.size()) +
                            " does not match Sturm count " + std::to_string(expected));
        out << "verified: " << roots.size() << " root(s) match sturm count\n";
        return 0;
    });
}

} // namespace origami::cli
