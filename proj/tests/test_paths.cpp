#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hypercurve/error.hpp"
#include "hypercurve/paths.hpp"
#include "oracles.hpp"

using namespace hypercurve;

namespace {

constexpr double pi = std::numbers::pi;

DPath squares(double b1, double b2) {
    auto sq = [](double x) { return Complex(x * x); };
    return DPath(ComponentPath::callback(0.0, b1, sq), ComponentPath::callback(0.0, b2, sq));
}

DPath constant_path(BiComplex c) {
    return DPath(ComponentPath::segment(c.w1, c.w1), ComponentPath::segment(c.w2, c.w2));
}

DPath random_path(std::mt19937_64& rng, bool corners, std::vector<fixture::RandomComponent>* out = nullptr) {
    const auto [a1, b1] = fixture::random_domain(rng);
    const auto [a2, b2] = fixture::random_domain(rng);
    auto g1 = fixture::random_component(rng, a1, b1, corners);
    auto g2 = fixture::random_component(rng, a2, b2, corners);
    if (out) {
        out->push_back(g1);
        out->push_back(g2);
    }
    return DPath(g1.path, g2.path);
}

void check_close(Hyperbolic got, Hyperbolic want, double tol) {
    CHECK(std::fabs(got.v1 - want.v1) < tol);
    CHECK(std::fabs(got.v2 - want.v2) < tol);
}

void check_close(BiComplex got, BiComplex want, double tol) {
    CHECK(std::abs(got.w1 - want.w1) < tol);
    CHECK(std::abs(got.w2 - want.w2) < tol);
}

} // namespace

TEST_CASE("path_eval") {
    const auto id = DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0)));
    CHECK(path_eval(id, Hyperbolic(0.5)) == BiComplex(0.5));

    auto e = expr::parse("t^2*e1 + s^3*e2");
    DPath cubic(ComponentPath::expression(e, 0, 0.0, 2.0), ComponentPath::expression(e, 1, 0.0, 3.0));
    check_close(path_eval(cubic, {2.0, 3.0}), BiComplex(4.0, 27.0), 1e-12);
    CHECK(path_eval(cubic, cubic.interval().lo()) == cubic.start());

    CHECK_THROWS_AS(path_eval(id, Hyperbolic(1.5)), Error);
    try {
        path_eval(id, {0.5, -0.1});
    } catch (const Error& err) {
        CHECK(err.code() == Errc::OutOfDomain);
    }
}

TEST_CASE("path_derivative") {
    check_close(path_derivative(squares(2.0, 3.0), {1.0, 2.0}), BiComplex(2.0, 4.0), 1e-7);
    check_close(path_derivative(squares(2.0, 3.0), {0.0, 3.0}), BiComplex(0.0, 6.0), 1e-6);
    check_close(path_derivative(constant_path(BiComplex({1, 2}, {3, 4})), {0.3, 0.7}), BiComplex(0.0), 1e-12);
    const auto id = DPath::identity(DInterval::make(Hyperbolic(-1.0), Hyperbolic(2.0)));
    check_close(path_derivative(id, {0.2, 1.9}), BiComplex(1.0), 1e-12);

    auto step = ComponentPath::callback(0.0, 1.0, [](double x) { return Complex(x < 0.5 ? 0.0 : 1.0); });
    DPath jumpy(step, ComponentPath::segment(0.0, 1.0));
    try {
        path_derivative(jumpy, {0.5, 0.5});
        FAIL("expected NotDifferentiable");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::NotDifferentiable);
    }
    CHECK_THROWS_AS(path_derivative(id, Hyperbolic(3.0)), Error);
}

TEST_CASE("variation_sum") {
    const auto unit = DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0));
    const auto id = DPath::identity(unit);
    const auto p = DPartition::make(unit, {Hyperbolic(0.0), Hyperbolic(0.5), Hyperbolic(1.0)});
    check_close(variation_sum(id, p), Hyperbolic(1.0), 1e-15);
    check_close(variation_sum(squares(1.0, 1.0), p), Hyperbolic(1.0), 1e-15);
    check_close(variation_sum(constant_path(BiComplex(3.0)), p), Hyperbolic(0.0), 0.0 + 1e-300);
}

TEST_CASE("total_variation") {
    const auto id = DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(2.0, 3.0)));
    auto r = total_variation(id);
    CHECK(r.converged);
    check_close(r.total, Hyperbolic(2.0, 3.0), 1e-12);
    CHECK(r.per_component[0] == r.total.v1);
    CHECK(r.per_component[1] == r.total.v2);
    REQUIRE(r.partition_used.has_value());
    CHECK(r.partition_used->interval() == id.interval());

    r = total_variation(squares(1.0, 2.0));
    CHECK(r.converged);
    check_close(r.total, Hyperbolic(1.0, 4.0), 1e-6);
    check_close(r.total, path_length_smooth(squares(1.0, 2.0)), 1e-6);

    check_close(total_variation(constant_path(BiComplex(1.0, 2.0))).total, Hyperbolic(0.0), 1e-300);

    // Polyline variation is exact from the samples.
    DPath zig(ComponentPath::polyline({0, 1, 2}, {0.0, 1.0, Complex(1, 1)}),
              ComponentPath::polyline({0, 0.5, 1}, {0.0, 3.0, 0.0}));
    r = total_variation(zig);
    CHECK(r.levels == 0);
    CHECK(r.total.v1 == 2.0);
    CHECK(r.total.v2 == 6.0);

    // Unbounded variation: x sin(1/x) never settles.
    auto wild = ComponentPath::callback(0.0, 1.0, [](double x) { return Complex(x > 0 ? x * std::sin(1.0 / x) : 0.0); });
    r = total_variation(DPath(wild, ComponentPath::segment(0.0, 1.0)), {1e-10, 12, 4});
    CHECK_FALSE(r.converged);
    CHECK(r.levels == 12);
}

TEST_CASE("path_length_smooth") {
    check_close(path_length_smooth(DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0)))),
                Hyperbolic(1.0), 1e-13);
    check_close(path_length_smooth(DPath::bicircle(BiComplex(0.0), 1.0)), Hyperbolic(2 * pi), 1e-8);
    check_close(path_length_smooth(squares(1.0, 1.0)), Hyperbolic(1.0), 1e-9);
}

TEST_CASE("arc_length_function") {
    const auto id = DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0)));
    check_close(arc_length_function(id, Hyperbolic(0.5)), Hyperbolic(0.5), 1e-12);
    check_close(arc_length_function(id, Hyperbolic(0.0)), Hyperbolic(0.0), 1e-300);
    check_close(arc_length_function(DPath::bicircle(BiComplex(0.0), 1.0), Hyperbolic(pi)), Hyperbolic(pi), 1e-8);
    CHECK_THROWS_AS(arc_length_function(id, Hyperbolic(2.0)), Error);

    const auto circle = DPath::bicircle(BiComplex(0.0), 2.0);
    Hyperbolic prev;
    for (double t : {0.5, 1.0, 2.5, 4.0, 6.0}) {
        const auto cur = arc_length_function(circle, {t, 2 * pi - t});
        CHECK(cur.v1 >= prev.v1);
        prev = cur;
    }
}

TEST_CASE("path_reverse") {
    const auto id = DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0)));
    const auto rev = path_reverse(id);
    CHECK(rev.interval().lo() == Hyperbolic(-1.0));
    CHECK(path_eval(rev, Hyperbolic(-1.0)) == BiComplex(1.0));

    std::mt19937_64 rng(11);
    const auto g = random_path(rng, true);
    const auto twice = path_reverse(path_reverse(g));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const auto& iv = g.interval();
        const Hyperbolic tau{iv.lo().v1 + u(rng) * iv.length().v1, iv.lo().v2 + u(rng) * iv.length().v2};
        CHECK(twice(tau) == g(tau));
    }
    check_close(total_variation(path_reverse(g)).total, total_variation(g).total, 1e-9);

    const auto circle = DPath::bicircle(BiComplex({1, 2}, {-1, 0}), 1.5, 0.5);
    CHECK(path_reverse(circle).start() == circle.end());
}

TEST_CASE("path_translate and is_closed") {
    const auto id = DPath::identity(DInterval::make(Hyperbolic(0.0), Hyperbolic(1.0)));
    CHECK(path_eval(path_translate(id, BiComplex(1.0)), Hyperbolic(0.0)) == BiComplex(1.0));
    for (double t : {0.0, 0.3, 1.0}) CHECK(path_translate(id, BiComplex(0.0))({t, 1 - t}) == id({t, 1 - t}));

    const auto circle = DPath::bicircle(BiComplex(0.0), 1.0);
    const auto moved = path_translate(circle, units::j);
    for (double t : {0.0, 1.0, 3.0}) check_close(moved({t, t}) - units::j, circle({t, t}), 1e-15);
    check_close(total_variation(moved).total, total_variation(circle).total, 1e-12);

    CHECK(is_closed(circle));
    CHECK_FALSE(is_closed(id));
    CHECK(is_closed(constant_path(BiComplex({1, 1}, {2, 2}))));
}

TEST_CASE("trace sampling and csv") {
    const auto circle = DPath::bicircle(BiComplex(0.0), 1.0);
    const auto trace = sample_trace(circle, 5);
    REQUIRE(trace.size() == 5);
    CHECK(trace.back().tau == circle.interval().hi());
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str().rfind("tau_v1,tau_v2,w1_re,w1_im,w2_re,w2_im\n", 0) == 0);
    CHECK_THROWS_AS(sample_trace(circle, 1), Error);
}

TEST_CASE("refinement never decreases the variation sum") {
    std::mt19937_64 rng(21);
    for (int n = 0; n < 50; ++n) {
        const auto g = random_path(rng, n % 2 == 0);
        auto p = DPartition::trivial(g.interval());
        auto prev = variation_sum(g, p);
        for (int level = 0; level < 6; ++level) {
            p = p.refine_dyadic(1);
            const auto cur = variation_sum(g, p);
            const auto ord = try_cmp_d(prev, cur, {1e-13});
            CHECK((ord == DOrdering::Less || ord == DOrdering::Equal));
            prev = cur;
        }
    }
}

TEST_CASE("variation is subadditive") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 0; n < 20; ++n) {
        const auto [a1, b1] = fixture::random_domain(rng);
        const auto [a2, b2] = fixture::random_domain(rng);
        const DPath g(fixture::random_component(rng, a1, b1, true).path, fixture::random_component(rng, a2, b2, false).path);
        const DPath l(fixture::random_component(rng, a1, b1, false).path, fixture::random_component(rng, a2, b2, true).path);
        const BiComplex a({u(rng), u(rng)}, {u(rng), u(rng)});
        const BiComplex b({u(rng), u(rng)}, {u(rng), u(rng)});
        const auto lhs = total_variation(path_combine(a, g, b, l)).total;
        const auto rhs = d_modulus(a) * total_variation(g).total + d_modulus(b) * total_variation(l).total;
        CHECK(lhs.v1 <= rhs.v1 + 1e-8);
        CHECK(lhs.v2 <= rhs.v2 + 1e-8);
    }
}

TEST_CASE("variation decomposes into scalar lengths") {
    std::mt19937_64 rng(23);
    for (int n = 0; n < 30; ++n) {
        std::vector<fixture::RandomComponent> parts;
        const auto g = random_path(rng, n % 3 != 0, &parts);
        const auto r = total_variation(g);
        CHECK(r.converged);
        const Hyperbolic want{oracle::smooth_length(parts[0].deriv, parts[0].knots),
                              oracle::smooth_length(parts[1].deriv, parts[1].knots)};
        check_close(r.total, want, 1e-8);
        check_close(path_length_smooth(g), r.total, 1e-6);
        check_close(arc_length_function(g, g.interval().hi()), r.total, 1e-8);
    }
}

TEST_CASE("polyline variation matches the sample distances") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> v(-3.0, 3.0);
    for (int n = 0; n < 20; ++n) {
        std::vector<double> params;
        std::vector<Complex> values;
        for (int k = 0; k < 7; ++k) {
            params.push_back(k + 0.1 * n);
            values.emplace_back(v(rng), v(rng));
        }
        const auto line = ComponentPath::polyline(params, values);
        const DPath g(line, line.scaled(Complex(0, 2)));
        const double want = oracle::polyline_length(values);
        check_close(total_variation(g).total, Hyperbolic(want, 2 * want), 1e-12);
    }
}

TEST_CASE("trace splits into component traces") {
    std::mt19937_64 rng(25);
    for (int n = 0; n < 10; ++n) {
        const auto g = random_path(rng, true);
        for (const auto& pt : sample_trace(g, 33)) {
            const BiComplex want = units::e1 * BiComplex(g.component(0)(pt.tau.v1)) +
                                   units::e2 * BiComplex(g.component(1)(pt.tau.v2));
            check_close(pt.value, want, 1e-14);
        }
    }
}
