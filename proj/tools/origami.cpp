#include <iostream>
#include <streambuf>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <origami/cli.hpp>
#include <origami/numerics.hpp>

namespace {

// Sink for --quiet: swallows report output, leaves stderr untouched.
struct NullBuf : std::streambuf {
    int overflow(int c) override { return c; }
};

std::vector<origami::numerics::Real> parse_sides(const std::string& csv) {
    std::vector<origami::numerics::Real> out;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ','))
        out.push_back(origami::numerics::to_real(origami::numerics::parse_rational(token)));
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list of lengths");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"plane origami constructions extended with 3D folding axioms"};
    app.require_subcommand(1);

    unsigned precision = 0;
    bool quiet = false;
    app.add_option("--precision", precision, "working precision in decimal digits (>= 30)")
        ->check(CLI::Range(30u, 100000u));
    app.add_flag("--quiet", quiet, "suppress report output");

    std::string run_path;
    bool run_trace = false;
    CLI::App* run = app.add_subcommand("run", "execute an .ori construction script");
    run->add_option("script", run_path, "script file")->required();
    run->add_flag("--trace", run_trace, "print the axiom trace");

    std::string cyc_sides, cyc_svg;
    CLI::App* cyc = app.add_subcommand("cyclic", "solve the convex cyclic polygon for side lengths");
    cyc->add_option("--sides", cyc_sides, "comma-separated side lengths")->required();
    cyc->add_option("--svg", cyc_svg, "write an SVG figure");

    std::string pyr_R, pyr_sides, pyr_obj;
    CLI::App* pyr = app.add_subcommand("pyramid", "build the right pyramid with equal lateral edges");
    pyr->add_option("--R", pyr_R, "lateral edge length")->required();
    pyr->add_option("--sides", pyr_sides, "comma-separated base side lengths")->required();
    pyr->add_option("--obj", pyr_obj, "write a Wavefront OBJ mesh");

    std::vector<std::string> poly_text;
    CLI::App* poly = app.add_subcommand("poly", "polynomial certificates");
    CLI::App* analyze = poly->add_subcommand("analyze", "real roots, irreducibility, S_p certificate");
    analyze->add_option("polynomial", poly_text, "polynomial in x with rational coefficients")
        ->required()
        ->expected(-1);
    poly->require_subcommand(1);

    unsigned ngon_n = 0;
    std::string ngon_svg;
    CLI::App* ngon = app.add_subcommand("ngon", "construct a regular n-gon by power-of-two descent");
    ngon->add_option("n", ngon_n, "number of sides (>= 3)")->required();
    ngon->add_option("--svg", ngon_svg, "write an SVG figure");

    std::string cubic_a, cubic_b;
    CLI::App* cubic = app.add_subcommand("cubic", "solve x^3 + a x + b = 0 by a common-tangent fold");
    cubic->add_option("--a", cubic_a, "linear coefficient (rational)")->required();
    cubic->add_option("--b", cubic_b, "constant coefficient (rational)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    NullBuf null_buf;
    std::ostream devnull(&null_buf);
    std::ostream& out = quiet ? devnull : std::cout;

    try {
        if (precision != 0)
            origami::numerics::set_precision(precision);
        else
            origami::numerics::set_precision_from_env();

        using namespace origami;
        if (run->parsed()) return cli::cmd_run({run_path, run_trace}, out, std::cerr);
        if (cyc->parsed()) return cli::cmd_cyclic({parse_sides(cyc_sides), cyc_svg}, out, std::cerr);
        if (pyr->parsed()) {
            numerics::Real R = numerics::to_real(numerics::parse_rational(pyr_R));
            return cli::cmd_pyramid({R, parse_sides(pyr_sides), pyr_obj}, out, std::cerr);
        }
        if (poly->parsed()) {
            std::string text;
            for (const std::string& part : poly_text) text += part;
            return cli::cmd_poly({text}, out, std::cerr);
        }
        if (ngon->parsed()) return cli::cmd_ngon({ngon_n, ngon_svg}, out, std::cerr);
        if (cubic->parsed()) {
            numerics::Rational a = numerics::parse_rational(cubic_a);
            numerics::Rational b = numerics::parse_rational(cubic_b);
            return cli::cmd_cubic({a, b}, out, std::cerr);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
