// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//
//   acceptance <path-to-hypercurve-cli> <source-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hypercurve/integrate.hpp"
#include "hypercurve/props.hpp"
#include "oracles.hpp"

using namespace hypercurve;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool ok = true;
    std::string note;

    void fail(const std::string& why) {
        if (ok) note = why;
        ok = false;
    }
    void require(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

double gap(const BiComplex& a, const BiComplex& b) {
    const auto d = d_modulus(a - b);
    return std::max(d.v1, d.v2);
}

double gap(const Hyperbolic& a, const Hyperbolic& b) {
    return std::max(std::fabs(a.v1 - b.v1), std::fabs(a.v2 - b.v2));
}

std::string num(double x) { return format_real(x); }

/// Cartesian product (z1 + z2 i2)(u1 + u2 i2) with i2^2 = -1.
std::pair<Complex, Complex> cartesian_mul(Complex z1, Complex z2, Complex u1, Complex u2) {
    return {z1 * u1 - z2 * u2, z1 * u2 + z2 * u1};
}

/// Idempotent components from the cartesian form: z1 -/+ i*z2.
BiComplex from_cartesian(Complex z1, Complex z2) {
    const Complex i(0.0, 1.0);
    return {z1 - i * z2, z1 + i * z2};
}

// 1 ---------------------------------------------------------------------
Verdict algebra() {
    Verdict v;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    auto cx = [&] { return Complex(u(rng), u(rng)); };
    double worst_ring = 0.0;
    double worst_round = 0.0;
    double worst_mult = 0.0;
    double worst_tri = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const Complex a1 = cx(), a2 = cx(), b1 = cx(), b2 = cx(), c1 = cx(), c2 = cx();
        const auto a = bc_from_cartesian(a1, a2);
        const auto b = bc_from_cartesian(b1, b2);
        const auto c = bc_from_cartesian(c1, c2);
        // Products checked against the cartesian multiplication table.
        const auto [p1, p2] = cartesian_mul(a1, a2, b1, b2);
        const auto ab = a * b;
        worst_ring = std::max(worst_ring, gap(ab, from_cartesian(p1, p2)) / 100.0);
        const auto [q1, q2] = cartesian_mul(p1, p2, c1, c2);
        worst_ring = std::max(worst_ring, gap(ab * c, from_cartesian(q1, q2)) / 1000.0);
        worst_ring = std::max(worst_ring, gap((a * b) * c, a * (b * c)) / 1000.0);
        worst_ring = std::max(worst_ring, gap(a * (b + c), a * b + a * c) / 100.0);
        worst_ring = std::max(worst_ring, gap((a + b) + c, a + (b + c)) / 10.0);
        worst_ring = std::max(worst_ring, gap(a * b, b * a) / 100.0);

        const auto back = to_cartesian(a);
        worst_round = std::max({worst_round, std::abs(back.z1 - a1), std::abs(back.z2 - a2)});

        const auto ma = d_modulus(a);
        const auto mb = d_modulus(b);
        const Hyperbolic want{std::abs(a.w1) * std::abs(b.w1), std::abs(a.w2) * std::abs(b.w2)};
        worst_mult = std::max(worst_mult, gap(d_modulus(ab), ma * mb) / std::max({want.v1, want.v2, 1.0}));
        const auto sum = d_modulus(a + b);
        worst_tri = std::max({worst_tri, sum.v1 - (ma.v1 + mb.v1), sum.v2 - (ma.v2 + mb.v2)});
    }
    v.require(worst_ring < 1e-12, "ring axioms off by " + num(worst_ring));
    v.require(worst_round < 1e-13, "round trip off by " + num(worst_round));
    v.require(worst_mult < 1e-12, "modulus not multiplicative: " + num(worst_mult));
    v.require(worst_tri < 1e-12, "triangle inequality violated by " + num(worst_tri));
    v.require(units::e1 * units::e2 == units::zero, "e1*e2 != 0");
    v.require(units::j * units::j == units::one, "j^2 != 1");
    const auto suite = props::run_suite("algebra", 11);
    v.require(suite.passed(), "algebra suite failed:\n" + props::format_report(suite));
    v.note = v.ok ? "10^4 triples; ring " + num(worst_ring) + ", round trip " + num(worst_round) + ", |ab|_D " +
                        num(worst_mult)
                  : v.note;
    return v;
}

// 2 ---------------------------------------------------------------------
Verdict variation_decomposition() {
    Verdict v;
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const auto [a1, b1] = fixture::random_domain(rng);
        const auto [a2, b2] = fixture::random_domain(rng);
        const auto g1 = fixture::random_component(rng, a1, b1, n % 4 != 0);
        const auto g2 = fixture::random_component(rng, a2, b2, n % 4 != 1);
        const auto r = total_variation(DPath(g1.path, g2.path));
        const Hyperbolic want{oracle::smooth_length(g1.deriv, g1.knots), oracle::smooth_length(g2.deriv, g2.knots)};
        v.require(r.converged, "instance " + std::to_string(n) + " did not converge");
        worst = std::max(worst, gap(r.total, want));
    }
    v.require(worst < 1e-8, "worst deviation " + num(worst));
    if (v.ok) v.note = "100 piecewise-smooth paths, worst " + num(worst) + " < 1e-8";
    return v;
}

// 3 ---------------------------------------------------------------------
Verdict smooth_length() {
    Verdict v;
    const auto circle = DPath::bicircle(BiComplex(0.0), 1.0);
    const auto len = path_length_smooth(circle);
    const auto var = total_variation(circle);
    v.require(gap(len, Hyperbolic(2 * pi)) < 1e-8, "bicircle quadrature length " + format_hyperbolic(len));
    v.require(gap(var.total, Hyperbolic(2 * pi)) < 1e-8, "bicircle variation " + format_hyperbolic(var.total));

    std::mt19937_64 rng(303);
    double worst = 0.0;
    double worst_oracle = 0.0;
    for (int n = 0; n < 50; ++n) {
        const auto [a1, b1] = fixture::random_domain(rng);
        const auto [a2, b2] = fixture::random_domain(rng);
        const auto g1 = fixture::random_component(rng, a1, b1, false);
        const auto g2 = fixture::random_component(rng, a2, b2, false);
        const DPath path(g1.path, g2.path);
        const auto V = total_variation(path).total;
        worst = std::max(worst, gap(V, path_length_smooth(path)));
        const Hyperbolic integral{oracle::smooth_length(g1.deriv, g1.knots), oracle::smooth_length(g2.deriv, g2.knots)};
        worst_oracle = std::max(worst_oracle, gap(V, integral));
    }
    v.require(worst < 1e-6, "|V - int |G'|_D| reached " + num(worst));
    v.require(worst_oracle < 1e-6, "|V - Gauss-Legendre| reached " + num(worst_oracle));
    if (v.ok) {
        v.note = "bicircle off by " + num(gap(len, Hyperbolic(2 * pi))) + "; 50 paths, worst " + num(worst);
    }
    return v;
}

// 4 ---------------------------------------------------------------------
Verdict tag_independence() {
    Verdict v;
    IntegrationConfig cfg;
    cfg.tol = {1e-6, 1e-6};
    const double tol = cfg.tol.v1;
    std::mt19937_64 rng(404);
    double worst_tags = 0.0;
    double worst_comp = 0.0;
    double worst_quad = 0.0;
    for (int n = 0; n < 50; ++n) {
        const auto path = props::random_poly_path(rng, 2);
        const auto f = props::random_poly_integrand(rng, 2);
        const auto built = path.build();
        const auto fn = f.build();
        std::array<BiComplex, 3> values;
        int m = 0;
        for (Tag tag : {Tag::Left, Tag::Midpoint, Tag::Right}) {
            auto local = cfg;
            local.tag = tag;
            const auto r = rs_integral(fn, built, local);
            v.require(r.converged, "instance " + std::to_string(n) + " tag " + std::string(to_string(tag)) +
                                       " did not converge");
            values[static_cast<std::size_t>(m++)] = r.value;
        }
        worst_tags = std::max({worst_tags, gap(values[0], values[1]), gap(values[1], values[2]),
                               gap(values[0], values[2])});
        const auto comp = rs_integral_componentwise(fn, built, cfg);
        v.require(comp.converged, "componentwise instance " + std::to_string(n) + " did not converge");
        for (const auto& x : values) worst_comp = std::max(worst_comp, gap(x, comp.value));

        // Independent reference: int f_k(x) gamma_k'(x) dx by Gauss-Legendre.
        std::array<Complex, 2> ref;
        for (int k = 0; k < 2; ++k) {
            const auto& pk = path.gamma[static_cast<std::size_t>(k)];
            const auto& fk = f.f[static_cast<std::size_t>(k)];
            ref[static_cast<std::size_t>(k)] = oracle::integrate<Complex>(
                [&](double x) { return fk(Complex(x)) * pk.derivative(Complex(x)); }, path.lo[static_cast<std::size_t>(k)],
                path.hi[static_cast<std::size_t>(k)]);
        }
        worst_quad = std::max(worst_quad, gap(values[1], BiComplex(ref[0], ref[1])));
    }
    v.require(worst_tags < 3 * tol, "tags differ by " + num(worst_tags));
    v.require(worst_comp < 2 * tol, "componentwise oracle differs by " + num(worst_comp));
    v.require(worst_quad < 2 * tol, "midpoint differs from Gauss-Legendre by " + num(worst_quad));
    if (v.ok) {
        v.note = "50 pairs at tol 1e-6; tags " + num(worst_tags) + " < 3e-6, oracle " + num(worst_comp) + " < 2e-6";
    }
    return v;
}

// 5 ---------------------------------------------------------------------
Verdict property_suites() {
    Verdict v;
    std::string summary;
    for (const char* name : {"linearity", "additivity", "orientation", "translation", "reparametrization", "ml-bound"}) {
        const auto report = props::run_suite(name, 505, 100);
        if (!report.passed()) v.fail(std::string(name) + " failed:\n" + props::format_report(report));
        summary += (summary.empty() ? "" : ", ") + std::string(name);
    }
    if (v.ok) v.note = "100 instances each: " + summary;
    return v;
}

// 6 ---------------------------------------------------------------------
Verdict ftc() {
    Verdict v;
    const auto one_plus_j = units::one + units::j;
    const auto zf = Integrand::uniform([](Complex w) { return w; });
    const auto z2f = Integrand::uniform([](Complex w) { return w * w; });
    const auto a = line_integral(zf, DPath::segment(BiComplex(0.0), one_plus_j));
    const auto b = line_integral(z2f, DPath::segment(BiComplex(0.0), units::j));
    v.require(a.converged && gap(a.value, one_plus_j) < 1e-8, "int z dz to 1+j gave " + format_cartesian(a.value));
    v.require(b.converged && gap(b.value, (1.0 / 3.0) * units::j) < 1e-8,
              "int z^2 dz to j gave " + format_cartesian(b.value));

    std::mt19937_64 rng(606);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
        const auto [a1, b1] = fixture::random_domain(rng);
        const auto [a2, b2] = fixture::random_domain(rng);
        const auto g1 = fixture::random_component(rng, a1, b1, n % 2 == 0);
        const auto g2 = fixture::random_component(rng, a2, b2, n % 3 == 0);
        const DPath path(g1.path, g2.path);
        const auto p1 = oracle::random_poly(rng, 4);
        const auto p2 = oracle::random_poly(rng, 4);
        const auto P1 = p1.antiderivative();
        const auto P2 = p2.antiderivative();
        const Integrand f([p1](Complex w) { return p1(w); }, [p2](Complex w) { return p2(w); });
        const Integrand F([P1](Complex w) { return P1(w); }, [P2](Complex w) { return P2(w); });
        const auto r = line_integral(f, path);
        v.require(r.converged, "instance " + std::to_string(n) + " did not converge");
        worst = std::max(worst, gap(r.value, ftc_eval(F, path, f)));
        // The primitive difference straight from the oracle polynomials.
        const BiComplex direct{P1(g1.path(b1)) - P1(g1.path(a1)), P2(g2.path(b2)) - P2(g2.path(a2))};
        worst = std::max(worst, gap(r.value, direct));
    }
    v.require(worst < 1e-6, "FTC residual " + num(worst));
    if (v.ok) {
        v.note = "1+j off by " + num(gap(a.value, one_plus_j)) + ", j/3 off by " +
                 num(gap(b.value, (1.0 / 3.0) * units::j)) + "; 50 random pairs, worst " + num(worst);
    }
    return v;
}

// 7 ---------------------------------------------------------------------
Verdict closed_curve() {
    Verdict v;
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto circle = DPath::bicircle(BiComplex(0.0), 1.0);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const auto p1 = oracle::random_poly(rng, 6);
        const auto p2 = oracle::random_poly(rng, 6);
        const Integrand f([p1](Complex w) { return p1(w); }, [p2](Complex w) { return p2(w); });
        const auto r = line_integral(f, circle);
        v.require(r.converged, "polynomial " + std::to_string(n) + " did not converge");
        worst = std::max(worst, gap(r.value, BiComplex(0.0)));
    }
    const auto recip = line_integral(Integrand::uniform([](Complex w) { return 1.0 / w; }), circle);
    const double witness = gap(recip.value, 2 * pi * units::i1);
    v.require(worst < 1e-6, "closed polynomial integral reached " + num(worst));
    v.require(recip.converged && witness < 1e-6, "1/z gave " + format_cartesian(recip.value));
    if (v.ok) v.note = "20 polynomials, worst " + num(worst) + "; 1/z off 2*pi*i1 by " + num(witness);
    return v;
}

// 8 ---------------------------------------------------------------------
struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run_cli(const std::string& cli, const std::string& args) {
    static int counter = 0;
    const std::string base = "acceptance_cli_" + std::to_string(counter++);
    const std::string cmd = "\"" + cli + "\" " + args + " > " + base + ".out 2> " + base + ".err";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(base + ".out");
    r.err = slurp(base + ".err");
    std::remove((base + ".out").c_str());
    std::remove((base + ".err").c_str());
    return r;
}

std::string strip_times(const std::string& report) {
    static const std::regex wall(R"("wall_time_ms": [0-9.eE+-]+)");
    return std::regex_replace(report, wall, "\"wall_time_ms\": 0");
}

Verdict cli(const std::string& exe, const std::string& src) {
    Verdict v;
    using nlohmann::json;
    const std::string jobs = src + "/tests/jobs/";

    const auto a = run_cli(exe, "run \"" + jobs + "integrate_identity.toml\"");
    v.require(a.code == 0, "integrate job exit " + std::to_string(a.code));
    if (a.code == 0) {
        const auto t = json::parse(a.out)["tasks"][0];
        v.require(t["converged"] == true, "integrate job did not converge");
        v.require(std::fabs(t["result"]["w1"][0].get<double>() - 0.5) < 1e-9 &&
                      std::fabs(t["result"]["w2"][0].get<double>() - 0.5) < 1e-9,
                  "integrate job value " + t["result"]["cartesian"].get<std::string>());
    }

    const auto b = run_cli(exe, "run \"" + jobs + "undefined_path.toml\"");
    v.require(b.code == 1, "undefined-path job exit " + std::to_string(b.code));
    v.require(b.err.find("tasks[0].path") != std::string::npos && b.err.find("nowhere") != std::string::npos,
              "undefined-path error does not name the key: " + b.err);

    const auto c = run_cli(exe, "run \"" + jobs + "ftc_check.toml\"");
    v.require(c.code == 0, "ftc job exit " + std::to_string(c.code));
    if (c.code == 0) {
        const auto t = json::parse(c.out)["tasks"][0];
        v.require(t["residual"].get<double>() < 1e-6, "ftc residual " + t["residual"].dump());
        const BiComplex got{{t["result"]["w1"][0], t["result"]["w1"][1]}, {t["result"]["w2"][0], t["result"]["w2"][1]}};
        v.require(gap(got, units::one + units::j) < 1e-12, "ftc value " + format_cartesian(got));
    }

    // Byte determinism for a fixed seed, including a props-check task and the parallel runner.
    const auto t1 = run_cli(exe, "run --seed 42 \"" + jobs + "tour.toml\"");
    const auto t2 = run_cli(exe, "run --seed 42 \"" + jobs + "tour.toml\"");
    const auto t3 = run_cli(exe, "run --seed 42 --parallel \"" + jobs + "tour.toml\"");
    v.require(t1.code == 0, "tour job exit " + std::to_string(t1.code));
    v.require(!t1.out.empty() && strip_times(t1.out) == strip_times(t2.out), "reports differ between runs");
    v.require(strip_times(t1.out) == strip_times(t3.out), "parallel report differs");
    const auto a2 = run_cli(exe, "run \"" + jobs + "integrate_identity.toml\"");
    v.require(strip_times(a.out) == strip_times(a2.out), "integrate report differs between runs");
    if (v.ok) v.note = "3 example jobs reproduce value and exit code; reports byte-identical without wall times";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <hypercurve-cli> <source-dir>\n";
        return 2;
    }
    const std::string exe = argv[1];
    const std::string src = argv[2];
    struct Criterion {
        const char* name;
        std::function<Verdict()> run;
    };
    const Criterion criteria[] = {
        {"algebra", algebra},
        {"variation decomposition", variation_decomposition},
        {"smooth length", smooth_length},
        {"tag independence", tag_independence},
        {"property suites", property_suites},
        {"fundamental theorem", ftc},
        {"closed curves", closed_curve},
        {"cli end-to-end", [&] { return cli(exe, src); }},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& err) {
            v.fail(std::string("exception: ") + err.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char time[32];
        std::snprintf(time, sizeof time, "%.1fs", s);
        std::cout << (v.ok ? "PASS" : "FAIL") << " " << index++ << " " << c.name << " [" << time << "]: " << v.note
                  << std::endl;
        failures += v.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
