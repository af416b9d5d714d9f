#pragma once

/**
 * @file props.hpp
 * @brief Seeded property suites over random paths and integrands.
 *
 * Every suite draws its instances from a std::mt19937_64 seeded with the
 * caller's seed, so a (suite, seed, instances) triple always replays the
 * same checks. A failing check carries the offending instance rendered as a
 * TOML job fragment that reproduces it through `hypercurve run`.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypercurve/integrate.hpp"
#include "hypercurve/paths.hpp"

namespace hypercurve::props {

/// c[0] + c[1] x + ... with complex coefficients.
struct Polynomial {
    std::vector<Complex> coeffs;

    Complex operator()(Complex x) const noexcept;
    Complex derivative(Complex x) const noexcept;
    Polynomial antiderivative() const;
    /// Text in the expression language, using `variable`.
    std::string to_expression(std::string_view variable) const;
};

Polynomial random_polynomial(std::mt19937_64& rng, int min_degree, int max_degree, double scale = 1.0);

/// A D-path with polynomial components on real domains.
struct PolyPath {
    std::array<Polynomial, 2> gamma;
    std::array<double, 2> lo{};
    std::array<double, 2> hi{};

    DPath build() const;
    /// [paths.NAME] table with kind = "expr".
    std::string to_toml(std::string_view name) const;
};

PolyPath random_poly_path(std::mt19937_64& rng, int max_degree = 2);

/// Product-type polynomial integrand f1*e1 + f2*e2.
struct PolyIntegrand {
    std::array<Polynomial, 2> f;

    Integrand build() const;
    PolyIntegrand primitive() const;
    /// [functions.NAME] table with f1 and f2, plus F1/F2 when `with_primitive`.
    std::string to_toml(std::string_view name, bool with_primitive = false) const;
};

PolyIntegrand random_poly_integrand(std::mt19937_64& rng, int max_degree = 3);

BiComplex random_bicomplex(std::mt19937_64& rng, double scale = 1.0);

struct PropertyOutcome {
    std::string property;
    bool passed = true;
    int instances = 0;
    /// Largest observed residual, in the units of the property's threshold.
    double worst = 0.0;
    double threshold = 0.0;
    std::string detail;
    std::optional<std::string> counterexample;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<PropertyOutcome> outcomes;

    bool passed() const noexcept;
};

std::span<const std::string_view> suite_names() noexcept;

/// Instance count used when the caller passes 0.
int default_instances(std::string_view suite);

/// Throws Errc::UnknownSuite for names outside suite_names().
SuiteReport run_suite(std::string_view suite, std::uint64_t seed, int instances = 0);

/// One line per property: "PASS name (n instances, worst r / threshold)".
std::string format_report(const SuiteReport& report);

} // namespace hypercurve::props
