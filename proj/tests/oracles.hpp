#pragma once

// Test-only reference computations. Nothing here calls into the library's
// variation or integration routines.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hypercurve/paths.hpp"

namespace oracle {

using Complex = std::complex<double>;

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1] by Newton iteration.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) {
        for (int i = 1; i <= n; ++i) {
            double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16) break;
            }
            nodes.push_back(x);
            weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
        }
    }
};

/// Composite 20-point Gauss-Legendre over `pieces` equal subintervals.
template <typename T>
T integrate(const std::function<T(double)>& f, double a, double b, int pieces = 64) {
    static const GaussLegendre gl(20);
    T total{};
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) total += gl.weights[i] * 0.5 * h * f(mid + 0.5 * h * gl.nodes[i]);
    }
    return total;
}

/// Complex polynomial c0 + c1 x + ... with analytic derivative.
struct Poly {
    std::vector<Complex> c;

    Complex operator()(Complex x) const {
        Complex acc;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    Complex derivative(Complex x) const {
        Complex acc;
        for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
        return acc;
    }
    Poly antiderivative() const {
        Poly out{{Complex{}}};
        for (std::size_t k = 0; k < c.size(); ++k) out.c.push_back(c[k] / static_cast<double>(k + 1));
        return out;
    }
};

inline Poly random_poly(std::mt19937_64& rng, int max_degree, double scale = 1.0) {
    std::uniform_int_distribution<int> deg(1, max_degree);
    std::uniform_real_distribution<double> u(-scale, scale);
    Poly p;
    const int d = deg(rng);
    for (int k = 0; k <= d; ++k) p.c.emplace_back(u(rng), u(rng));
    return p;
}

/// Length of a piecewise-smooth component: sum of integrals of |g'| between knots.
inline double smooth_length(const std::function<Complex(double)>& deriv, std::vector<double> knots) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        total += integrate<double>([&](double x) { return std::abs(deriv(x)); }, knots[k], knots[k + 1], 256);
    }
    return total;
}

/// Exact variation of a polyline: sum of sample distances.
inline double polyline_length(const std::vector<Complex>& values) {
    double total = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) total += std::abs(values[k] - values[k - 1]);
    return total;
}

} // namespace oracle

namespace fixture {

using hypercurve::ComponentPath;
using oracle::Complex;

/// A random component on [lo, hi]: a polynomial, sometimes plus a polyline
/// with a few random corners. `knots` receives the domain split points.
struct RandomComponent {
    ComponentPath path;
    std::function<Complex(double)> deriv;
    std::vector<double> knots;
};

inline RandomComponent random_component(std::mt19937_64& rng, double lo, double hi, bool corners) {
    auto poly = std::make_shared<oracle::Poly>(oracle::random_poly(rng, 3));
    auto base = ComponentPath::callback(
        lo, hi, [poly](double x) { return (*poly)(x); }, [poly](double x) { return poly->derivative(x); });
    if (!corners) {
        return {base, [poly](double x) { return poly->derivative(x); }, {lo, hi}};
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::vector<double> params{lo};
    for (int k = 1; k <= 3; ++k) params.push_back(lo + (hi - lo) * (k + 0.8 * (u(rng) - 0.5)) / 4.0);
    params.push_back(hi);
    std::vector<Complex> values;
    for (std::size_t k = 0; k < params.size(); ++k) values.emplace_back(v(rng), v(rng));
    auto line = ComponentPath::polyline(params, values);
    auto deriv = [poly, params, values](double x) {
        std::size_t k = 0;
        while (k + 2 < params.size() && x >= params[k + 1]) ++k;
        return poly->derivative(x) + (values[k + 1] - values[k]) / (params[k + 1] - params[k]);
    };
    return {base.combined(1.0, line, 1.0), deriv, params};
}

inline std::pair<double, double> random_domain(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-1.0, 1.0);
    std::uniform_real_distribution<double> w(0.5, 2.0);
    const double lo = a(rng);
    return {lo, lo + w(rng)};
}

} // namespace fixture
