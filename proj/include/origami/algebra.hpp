#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace origami::algebra {

using numerics::Integer;
using numerics::Rational;
using numerics::Real;

// ---------------------------------------------------------------------------
// QPoly: dense polynomial over Q, coefficients ascending by degree.
// The zero polynomial is the empty coefficient vector; all constructors and
// operations keep the representation trimmed (no trailing zero coefficients).
// ---------------------------------------------------------------------------

struct QPoly {
    std::vector<Rational> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

    static QPoly constant(const Rational& v) { return QPoly({v}); }
    static QPoly x() { return QPoly({Rational(0), Rational(1)}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Rational& lead() const { return c.back(); }
    Rational coeff(std::size_t k) const { return k < c.size() ? c[k] : Rational(0); }

    bool operator==(const QPoly& o) const { return c == o.c; }
};

inline QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return QPoly(std::move(r));
}

inline QPoly operator-(const QPoly& a) {
    std::vector<Rational> r = a.c;
    for (auto& v : r) v = -v;
    return QPoly(std::move(r));
}

inline QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

inline QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return QPoly(std::move(r));
}

inline QPoly operator*(const QPoly& a, const Rational& s) {
    std::vector<Rational> r = a.c;
    for (auto& v : r) v *= s;
    return QPoly(std::move(r));
}

// Euclidean division: a = q*b + r with deg r < deg b.
inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) throw ZeroPolynomial("division by the zero polynomial");
    QPoly rem = a;
    if (a.degree() < b.degree()) return {QPoly{}, rem};
    std::vector<Rational> q(a.degree() - b.degree() + 1, Rational(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int shift = rem.degree() - b.degree();
        Rational f = rem.lead() / b.lead();
        q[shift] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            rem.c[i + shift] -= f * b.c[i];
        rem.trim();
    }
    return {QPoly(std::move(q)), rem};
}

template <typename T>
inline T poly_eval(const QPoly& p, const T& x) {
    T acc(0);
    for (std::size_t i = p.c.size(); i-- > 0;)
        acc = acc * x + T(p.c[i]);
    return acc;
}

inline Real poly_eval_real(const QPoly& p, const Real& x) {
    Real acc(0);
    for (std::size_t i = p.c.size(); i-- > 0;)
        acc = acc * x + numerics::to_real(p.c[i]);
    return acc;
}

inline QPoly derivative(const QPoly& p) {
    if (p.c.size() <= 1) return {};
    std::vector<Rational> r(p.c.size() - 1);
    for (std::size_t i = 1; i < p.c.size(); ++i)
        r[i - 1] = p.c[i] * Rational(static_cast<long>(i));
    return QPoly(std::move(r));
}

inline QPoly monic(const QPoly& p) {
    if (p.is_zero()) return p;
    return p * (Rational(1) / p.lead());
}

inline QPoly poly_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

// Largest squarefree divisor (same distinct roots, all simple).
inline QPoly squarefree_part(const QPoly& p) {
    if (p.degree() <= 0) return p;
    QPoly g = poly_gcd(p, derivative(p));
    if (g.degree() <= 0) return p;
    return divmod(p, g).first;
}

// ---------------------------------------------------------------------------
// Text form. Descending powers, '^' for exponents, exact rational
// coefficients: "4x^7+51x^6-3/2x+2160". parse_poly accepts the same grammar
// plus optional whitespace and '*' between coefficient and x.
// ---------------------------------------------------------------------------

inline std::string poly_to_string(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int d = p.degree(); d >= 0; --d) {
        Rational v = p.coeff(static_cast<std::size_t>(d));
        if (v == 0) continue;
        bool first = out.empty();
        if (v < 0) {
            out += first ? "-" : "-";
            v = -v;
        } else if (!first) {
            out += "+";
        }
        bool unit = (v == 1);
        if (!unit || d == 0) out += v.str();
        if (d >= 1) {
            out += "x";
            if (d >= 2) out += "^" + std::to_string(d);
        }
    }
    return out;
}

inline QPoly parse_poly(const std::string& text) {
    std::map<long, Rational> terms;
    std::size_t i = 0, n = text.size();
    auto skip_ws = [&] { while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i; };
    auto fail = [&](const std::string& msg) -> SyntaxError {
        return SyntaxError(1, static_cast<int>(i) + 1, msg + " in polynomial '" + text + "'");
    };

    skip_ws();
    if (i >= n) throw fail("empty input");
    bool any_term = false;
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
        sign = text[i] == '-' ? -1 : 1;
        ++i;
    }
    while (true) {
        skip_ws();
        // coefficient (optional when the term has an x part)
        std::size_t start = i;
        while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                         text[i] == '.' || text[i] == '/'))
            ++i;
        Rational coeff(1);
        bool have_coeff = i > start;
        if (have_coeff) coeff = numerics::parse_rational(text.substr(start, i - start));
        skip_ws();
        if (i < n && text[i] == '*') {
            if (!have_coeff) throw fail("unexpected '*'");
            ++i;
            skip_ws();
        }
        long deg = 0;
        if (i < n && text[i] == 'x') {
            ++i;
            deg = 1;
            skip_ws();
            if (i < n && text[i] == '^') {
                ++i;
                skip_ws();
                std::size_t es = i;
                while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (i == es) throw fail("missing exponent");
                deg = std::stol(text.substr(es, i - es));
            }
        } else if (!have_coeff) {
            throw fail("expected a coefficient or 'x'");
        }
        terms[deg] += Rational(sign) * coeff;
        any_term = true;
        skip_ws();
        if (i >= n) break;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else {
            throw fail("expected '+' or '-'");
        }
    }
    if (!any_term) throw fail("empty input");
    long top = terms.rbegin()->first;
    std::vector<Rational> c(static_cast<std::size_t>(top) + 1, Rational(0));
    for (auto& [d, v] : terms) c[static_cast<std::size_t>(d)] = v;
    return QPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Sturm chains and real-root counting / isolation.
// ---------------------------------------------------------------------------

struct SturmChain {
    std::vector<QPoly> seq; // seq[0] squarefree, seq[1] its derivative, ...
    QPoly squarefree;       // the polynomial the chain was built on
    bool reduced;           // true when the input had repeated roots
};

inline SturmChain sturm_chain(const QPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("Sturm chain of the zero polynomial");
    QPoly g = squarefree_part(f);
    SturmChain chain;
    chain.squarefree = g;
    chain.reduced = (g.degree() != f.degree());
    chain.seq.push_back(g);
    if (g.degree() >= 1) {
        chain.seq.push_back(derivative(g));
        while (chain.seq.back().degree() >= 1) {
            const QPoly& a = chain.seq[chain.seq.size() - 2];
            const QPoly& b = chain.seq.back();
            QPoly r = divmod(a, b).second;
            if (r.is_zero()) break; // cannot happen for squarefree input
            chain.seq.push_back(-r);
        }
    }
    return chain;
}

namespace detail {

inline int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Sign of p at +infinity (dir=+1) or -infinity (dir=-1).
inline int sign_at_infinity(const QPoly& p, int dir) {
    if (p.is_zero()) return 0;
    int s = sign_of(p.lead());
    if (dir < 0 && p.degree() % 2 == 1) s = -s;
    return s;
}

// Sign variations, zeros dropped.
inline long variations(const std::vector<int>& signs) {
    long v = 0;
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

inline long chain_variations(const SturmChain& ch, const std::optional<Rational>& at, int dir_if_inf) {
    std::vector<int> signs;
    signs.reserve(ch.seq.size());
    for (const QPoly& p : ch.seq)
        signs.push_back(at ? sign_of(poly_eval(p, *at)) : sign_at_infinity(p, dir_if_inf));
    return variations(signs);
}

} // namespace detail

// Number of distinct real roots of f in (lo, hi]; open bounds via nullopt.
inline long sturm_count(const SturmChain& ch,
                        const std::optional<Rational>& lo = std::nullopt,
                        const std::optional<Rational>& hi = std::nullopt) {
    return detail::chain_variations(ch, lo, -1) - detail::chain_variations(ch, hi, +1);
}

inline long sturm_count(const QPoly& f,
                        const std::optional<Rational>& lo = std::nullopt,
                        const std::optional<Rational>& hi = std::nullopt) {
    return sturm_count(sturm_chain(f), lo, hi);
}

// All real roots lie strictly inside (-B, B).
inline Rational cauchy_bound(const QPoly& f) {
    Rational mx(0);
    for (std::size_t i = 0; i + 1 < f.c.size(); ++i)
        mx = std::max(mx, abs(f.c[i]));
    return Rational(1) + mx / abs(f.lead());
}

struct RootIsolation {
    QPoly squarefree;  // polynomial the intervals refer to (all roots simple)
    bool reduced;      // input had repeated roots
    // Disjoint, ascending; each holds exactly one real root, strictly
    // interior: endpoints are never roots, so the sign change is strict.
    std::vector<std::pair<Rational, Rational>> intervals;
};

inline RootIsolation isolate_real_roots(const QPoly& f) {
    SturmChain ch = sturm_chain(f);
    RootIsolation iso;
    iso.squarefree = ch.squarefree;
    iso.reduced = ch.reduced;
    if (ch.squarefree.degree() < 1) return iso;

    const QPoly& g = ch.squarefree;
    Rational bound = cauchy_bound(g);

    struct Job { Rational lo, hi; long count; };
    std::vector<Job> stack;
    long total = sturm_count(ch, -bound, bound);
    if (total > 0) stack.push_back({-bound, bound, total});

    while (!stack.empty()) {
        Job job = stack.back();
        stack.pop_back();
        if (job.count == 1) {
            iso.intervals.emplace_back(job.lo, job.hi);
            continue;
        }
        // Split points are nudged off roots of g. The outer bound is already
        // strictly beyond every root, so by induction no endpoint is ever a
        // root and each emitted interval has a strict sign change.
        Rational mid = (job.lo + job.hi) / 2;
        for (long k = 1; poly_eval(g, mid) == 0; ++k)
            mid = job.lo + (job.hi - job.lo) * Rational(k, 2 * k + 1);
        long left = sturm_count(ch, job.lo, mid);
        if (left > 0) stack.push_back({job.lo, mid, left});
        if (job.count - left > 0) stack.push_back({mid, job.hi, job.count - left});
    }
    std::sort(iso.intervals.begin(), iso.intervals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return iso;
}

// Shrinks an isolating interval by rational bisection until hi - lo <= width.
// Probe points that land on the root are nudged aside (same trick as above),
// so the result keeps non-root endpoints and a strict sign change.
inline std::pair<Rational, Rational> refine_root(const QPoly& squarefree,
                                                 std::pair<Rational, Rational> iv,
                                                 const Rational& width) {
    Rational flo = poly_eval(squarefree, iv.first);
    while (iv.second - iv.first > width) {
        Rational mid = (iv.first + iv.second) / 2;
        Rational fm = poly_eval(squarefree, mid);
        for (long k = 1; fm == 0; ++k) {
            mid = iv.first + (iv.second - iv.first) * Rational(k, 2 * k + 1);
            fm = poly_eval(squarefree, mid);
        }
        if ((fm > 0) == (flo > 0)) {
            iv.first = mid;
            flo = fm;
        } else {
            iv.second = mid;
        }
    }
    return iv;
}

// ---------------------------------------------------------------------------
// Integer form, primality helpers.
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_prime(const Integer& p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(p.backend().data(), 32) != 0;
}

} // namespace detail

// Coefficients scaled to integers and divided by their content; the primitive
// integer polynomial has the same factorization shape over Q as the input.
inline std::vector<Integer> primitive_integer_coeffs(const QPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("primitive part of the zero polynomial");
    Integer scale = 1;
    for (const Rational& q : f.c) scale = lcm(scale, denominator(q));
    std::vector<Integer> z(f.c.size());
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        Rational v = f.c[i] * Rational(scale);
        z[i] = numerator(v);
    }
    Integer content = 0;
    for (const Integer& v : z) content = gcd(content, v);
    if (z.back() < 0) content = -content;
    for (Integer& v : z) v /= content;
    return z;
}

inline std::vector<Integer> integer_coeffs_strict(const QPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("integer form of the zero polynomial");
    std::vector<Integer> z(f.c.size());
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (denominator(f.c[i]) != 1)
            throw NonIntegerCoefficients("coefficient " + f.c[i].str() + " of x^" +
                                         std::to_string(i) + " is not an integer");
        z[i] = numerator(f.c[i]);
    }
    return z;
}

// Eisenstein's criterion at p for an integer-coefficient polynomial.
inline bool eisenstein(const QPoly& f, const Integer& p) {
    if (!detail::is_prime(p)) throw BadPrime(p.str() + " is not prime");
    std::vector<Integer> z = integer_coeffs_strict(f);
    if (z.size() < 2) return false;
    if (z.back() % p == 0) return false;
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        if (z[i] % p != 0) return false;
    return z.front() % (p * p) != 0;
}

// Searches primes up to `bound` for an Eisenstein witness (on the primitive
// integer form). Candidates must divide every lower coefficient, so only
// prime divisors of their gcd are tried.
inline std::optional<Integer> eisenstein_search(const QPoly& f, unsigned long bound = 10000) {
    std::vector<Integer> z = primitive_integer_coeffs(f);
    if (z.size() < 2) return std::nullopt;
    Integer g = 0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) g = gcd(g, z[i]);
    if (g == 0) return std::nullopt;
    QPoly zf;
    {
        std::vector<Rational> c(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) c[i] = Rational(z[i]);
        zf = QPoly(std::move(c));
    }
    for (unsigned long p = 2; p <= bound; ++p) {
        if (!detail::is_prime(Integer(p))) continue;
        if (g % p != 0) continue;
        if (eisenstein(zf, Integer(p))) return Integer(p);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Distinct-degree factorization mod p (small p). Returns the multiset of
// irreducible factor degrees of f mod p, or nullopt when p is unusable for
// f (divides the leading coefficient, or f mod p is not squarefree).
// ---------------------------------------------------------------------------

namespace fp {

using Poly = std::vector<std::uint64_t>; // ascending, trimmed

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
    while (a.size() >= m.size() && !a.empty()) {
        std::uint64_t minv = [&] { // inverse of lead(m) via Fermat
            std::uint64_t b = m.back(), e = p - 2, r = 1;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            return r;
        }();
        std::uint64_t f = a.back() * minv % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::uint64_t sub = f * m[i] % p;
            a[i + shift] = (a[i + shift] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return mod(std::move(r), m, p);
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) { // monic normalization
        std::uint64_t linv = [&] {
            std::uint64_t x = a.back(), e = p - 2, r = 1;
            while (e) {
                if (e & 1) r = r * x % p;
                x = x * x % p;
                e >>= 1;
            }
            return r;
        }();
        for (auto& v : a) v = v * linv % p;
    }
    return a;
}

inline Poly derivative(const Poly& a, std::uint64_t p) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i)
        r.push_back(a[i] * (i % p) % p);
    trim(r);
    return r;
}

inline Poly powmod(Poly base, Integer e, const Poly& m, std::uint64_t p) {
    Poly r{1};
    base = mod(std::move(base), m, p);
    while (e > 0) {
        if (e % 2 == 1) r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e /= 2;
    }
    return r;
}

} // namespace fp

namespace detail {

// Degree multiset of f mod p, or nullopt when p is unusable (divides the
// leading coefficient, or f mod p has a repeated factor).
inline std::optional<std::vector<unsigned>> try_factor_degrees_mod_p(const QPoly& f,
                                                                     unsigned long p) {
    if (!detail::is_prime(Integer(p))) throw BadPrime(std::to_string(p) + " is not prime");
    std::vector<Integer> z = primitive_integer_coeffs(f);
    if (z.back() % p == 0) return std::nullopt;

    fp::Poly fb(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        Integer r = z[i] % p;
        if (r < 0) r += p;
        fb[i] = r.convert_to<std::uint64_t>();
    }
    fp::trim(fb);
    if (fb.size() != z.size()) return std::nullopt; // paranoia; lead checked above

    // squarefreeness mod p
    fp::Poly d = fp::derivative(fb, p);
    if (d.empty() || fp::gcd(fb, d, p).size() > 1) return std::nullopt;

    // distinct-degree factorization
    std::vector<unsigned> degrees;
    fp::Poly rest = fb;
    fp::Poly h{0, 1}; // x
    unsigned dstep = 0;
    while (rest.size() > 1 && 2 * (dstep + 1) <= rest.size() - 1) {
        ++dstep;
        h = fp::powmod(std::move(h), Integer(p), rest, p); // h = h^p mod rest
        fp::Poly hx = h;                                   // h - x
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = (hx[1] + p - 1) % p;
        fp::trim(hx);
        fp::Poly g = fp::gcd(rest, hx, p);
        if (g.size() > 1) {
            unsigned count = static_cast<unsigned>((g.size() - 1) / dstep);
            for (unsigned k = 0; k < count; ++k) degrees.push_back(dstep);
            // rest /= g
            fp::Poly quot;
            {
                fp::Poly rem = rest;
                std::size_t qn = rest.size() - g.size() + 1;
                quot.assign(qn, 0);
                for (std::size_t step = 0; step < qn; ++step) {
                    std::size_t top = rem.size() - 1 - step;
                    if (top + 1 < g.size()) break;
                    std::uint64_t coef = rem[top]; // g is monic
                    quot[top - (g.size() - 1)] = coef;
                    if (coef) {
                        std::size_t shift = top - (g.size() - 1);
                        for (std::size_t i = 0; i < g.size(); ++i) {
                            std::uint64_t sub = coef * g[i] % p;
                            rem[i + shift] = (rem[i + shift] + p - sub) % p;
                        }
                    }
                }
                fp::trim(quot);
            }
            rest = std::move(quot);
            h = fp::mod(std::move(h), rest, p);
        }
    }
    if (rest.size() > 1) degrees.push_back(static_cast<unsigned>(rest.size() - 1));
    std::sort(degrees.begin(), degrees.end());
    return degrees;
}

} // namespace detail

inline std::vector<unsigned> factor_degrees_mod_p(const QPoly& f, unsigned long p) {
    auto degrees = detail::try_factor_degrees_mod_p(f, p);
    if (!degrees) {
        std::vector<Integer> z = primitive_integer_coeffs(f);
        throw BadPrime(z.back() % p == 0
                           ? std::to_string(p) + " divides the leading coefficient"
                           : "f mod " + std::to_string(p) + " has a repeated factor");
    }
    return *degrees;
}

// ---------------------------------------------------------------------------
// Irreducibility over Q.
// ---------------------------------------------------------------------------

struct IrreducibilityVerdict {
    enum class Status { Irreducible, Reducible, Unknown };
    enum class Certificate { None, RationalRoots, Eisenstein, ModPrimePattern, DegreeSieve };

    Status status = Status::Unknown;
    Certificate certificate = Certificate::None;
    std::optional<Integer> prime;                  // Eisenstein / mod-p witness
    std::optional<QPoly> factor;                   // explicit factor when Reducible
    std::vector<unsigned long> sieve_primes;       // primes backing a DegreeSieve verdict
};

namespace detail {

// Trial-division factorization; returns false if a composite cofactor
// above the trial bound is left (enumeration would be incomplete).
inline bool factorize(Integer v, std::map<Integer, unsigned>& out, unsigned long bound = 1000000) {
    v = abs(v);
    if (v == 0) return false;
    for (unsigned long p = 2; p <= bound && Integer(p) * p <= v; p += (p == 2 ? 1 : 2)) {
        while (v % p == 0) {
            ++out[Integer(p)];
            v /= p;
        }
    }
    if (v > 1) {
        if (is_prime(v)) {
            ++out[v];
            return true;
        }
        return false;
    }
    return true;
}

// False when the divisor list had to be truncated at `cap`.
inline bool all_divisors(const std::map<Integer, unsigned>& fac, std::vector<Integer>& out,
                         std::size_t cap = 100000) {
    out = {Integer(1)};
    for (auto& [p, e] : fac) {
        std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) {
                out.push_back(out[i] * pk);
                if (out.size() > cap) return false;
            }
        }
    }
    return true;
}

inline std::vector<unsigned long> subset_sums(const std::vector<unsigned>& degrees, unsigned long total) {
    std::vector<bool> seen(total + 1, false);
    seen[0] = true;
    for (unsigned d : degrees)
        for (unsigned long s = total; s + 1 > 0; --s)
            if (s >= d && seen[s - d]) seen[s] = true;
    std::vector<unsigned long> out;
    for (unsigned long s = 1; s < total; ++s)
        if (seen[s]) out.push_back(s);
    return out;
}

} // namespace detail

inline IrreducibilityVerdict irreducible_over_Q(const QPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("irreducibility of the zero polynomial");
    if (f.degree() < 1) throw ZeroPolynomial("irreducibility of a constant polynomial");

    IrreducibilityVerdict v;
    const unsigned long deg = static_cast<unsigned long>(f.degree());

    if (deg == 1) {
        v.status = IrreducibilityVerdict::Status::Irreducible;
        v.certificate = IrreducibilityVerdict::Certificate::RationalRoots;
        return v;
    }

    std::vector<Integer> z = primitive_integer_coeffs(f);

    // Rational root test. Roots r/s need r | z[0], s | lead.
    if (z.front() == 0) {
        v.status = IrreducibilityVerdict::Status::Reducible;
        v.certificate = IrreducibilityVerdict::Certificate::RationalRoots;
        v.factor = QPoly::x();
        return v;
    }
    bool scan_complete = true;
    {
        std::map<Integer, unsigned> fc, fl;
        scan_complete &= detail::factorize(z.front(), fc);
        scan_complete &= detail::factorize(z.back(), fl);
        std::vector<Integer> rs, ss;
        scan_complete &= detail::all_divisors(fc, rs);
        scan_complete &= detail::all_divisors(fl, ss);
        for (const Integer& r : rs)
            for (const Integer& s : ss) {
                for (int sign : {1, -1}) {
                    Rational cand = Rational(sign * r) / Rational(s);
                    if (poly_eval(f, cand) == 0) {
                        v.status = IrreducibilityVerdict::Status::Reducible;
                        v.certificate = IrreducibilityVerdict::Certificate::RationalRoots;
                        v.factor = QPoly({-cand, Rational(1)}); // x - root
                        return v;
                    }
                }
            }
    }
    if (deg <= 3 && scan_complete) {
        // cubic/quadratic with no rational root has no linear factor, hence none
        v.status = IrreducibilityVerdict::Status::Irreducible;
        v.certificate = IrreducibilityVerdict::Certificate::RationalRoots;
        return v;
    }

    if (auto p = eisenstein_search(f)) {
        v.status = IrreducibilityVerdict::Status::Irreducible;
        v.certificate = IrreducibilityVerdict::Certificate::Eisenstein;
        v.prime = *p;
        return v;
    }

    // Single-prime certificate, then degree sieve over several good primes.
    std::vector<std::pair<unsigned long, std::vector<unsigned>>> patterns;
    for (unsigned long p = 2; p <= 10000; ++p) {
        if (!detail::is_prime(Integer(p))) continue;
        auto pat = detail::try_factor_degrees_mod_p(f, p);
        if (!pat) continue;
        if (p <= 1000 && pat->size() == 1 && (*pat)[0] == deg) {
            v.status = IrreducibilityVerdict::Status::Irreducible;
            v.certificate = IrreducibilityVerdict::Certificate::ModPrimePattern;
            v.prime = Integer(p);
            return v;
        }
        patterns.emplace_back(p, *pat);
        if (patterns.size() >= 5 && p > 1000) break;
        if (patterns.size() >= 8) break;
    }

    if (patterns.size() >= 5) {
        std::vector<bool> possible(deg, false); // proper factor degrees 1..deg-1
        bool first = true;
        for (auto& [p, pat] : patterns) {
            auto sums = detail::subset_sums(pat, deg);
            std::vector<bool> here(deg, false);
            for (unsigned long s : sums) here[s] = true;
            if (first) {
                possible = here;
                first = false;
            } else {
                for (unsigned long s = 1; s < deg; ++s)
                    possible[s] = possible[s] && here[s];
            }
            v.sieve_primes.push_back(p);
        }
        bool any = false;
        for (unsigned long s = 1; s < deg; ++s) any |= possible[s];
        if (!any) {
            v.status = IrreducibilityVerdict::Status::Irreducible;
            v.certificate = IrreducibilityVerdict::Certificate::DegreeSieve;
            return v;
        }

        // Try to exhibit a small factor: monic integer quadratics.
        if (deg >= 4 && possible.size() > 2 && possible[2]) {
            for (long u = -50; u <= 50; ++u)
                for (long w = -50; w <= 50; ++w) {
                    if (w == 0) continue;
                    QPoly q({Rational(w), Rational(u), Rational(1)});
                    if (divmod(f, q).second.is_zero()) {
                        v.status = IrreducibilityVerdict::Status::Reducible;
                        v.certificate = IrreducibilityVerdict::Certificate::None;
                        v.factor = q;
                        return v;
                    }
                }
        }
    }

    v.status = IrreducibilityVerdict::Status::Unknown;
    v.certificate = IrreducibilityVerdict::Certificate::None;
    v.sieve_primes.clear();
    return v;
}

// ---------------------------------------------------------------------------
// Symmetric-group certificate: prime degree p, irreducible over Q, exactly
// p - 2 real roots => Galois group S_p; not solvable for p >= 5.
// ---------------------------------------------------------------------------

struct GaloisCertificate {
    bool is_symmetric = false;      // criterion satisfied, group is S_deg
    unsigned long degree = 0;
    long real_roots = 0;
    IrreducibilityVerdict irreducibility;
    bool non_solvable = false;      // is_symmetric and degree >= 5
    std::string detail;             // why the criterion did not apply, if so
};

inline GaloisCertificate sp_criterion(const QPoly& f) {
    if (f.is_zero() || f.degree() < 1)
        throw ZeroPolynomial("Galois certificate needs positive degree");
    GaloisCertificate cert;
    cert.degree = static_cast<unsigned long>(f.degree());

    if (!detail::is_prime(Integer(cert.degree))) {
        cert.detail = "degree is not prime";
        return cert;
    }
    cert.irreducibility = irreducible_over_Q(f);
    if (cert.irreducibility.status != IrreducibilityVerdict::Status::Irreducible) {
        cert.detail = cert.irreducibility.status == IrreducibilityVerdict::Status::Reducible
                          ? "polynomial is reducible"
                          : "irreducibility undecided";
        return cert;
    }
    cert.real_roots = sturm_count(f);
    if (cert.real_roots != static_cast<long>(cert.degree) - 2) {
        cert.detail = "real root count is not degree - 2";
        return cert;
    }
    cert.is_symmetric = true;
    cert.non_solvable = cert.degree >= 5;
    cert.detail = "prime degree " + std::to_string(cert.degree) + ", irreducible, " +
                  std::to_string(cert.real_roots) + " real roots";
    return cert;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials by exact division of x^n - 1.
// ---------------------------------------------------------------------------

inline QPoly cyclotomic(unsigned n) {
    if (n == 0) throw std::invalid_argument("cyclotomic index must be >= 1");
    static std::map<unsigned, QPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<Rational> xn(n + 1, Rational(0));
    xn[0] = -1;
    xn[n] = 1;
    QPoly result(std::move(xn));
    for (unsigned d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        auto [q, r] = divmod(result, cyclotomic(d));
        if (!r.is_zero()) throw std::logic_error("cyclotomic division left a remainder");
        result = std::move(q);
    }
    cache.emplace(n, result);
    return result;
}

} // namespace origami::algebra
