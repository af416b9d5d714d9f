#pragma once

/**
 * @file integrate.hpp
 * @brief Riemann-Stieltjes integration of product-type bicomplex functions.
 *
 * Two independent routes compute the same integral:
 *   - rs_integral sums f(tau_k) * [Gamma(p_k) - Gamma(p_{k-1})] with bicomplex
 *     arithmetic over dyadically refined D-partitions;
 *   - rs_integral_componentwise computes the two complex Stieltjes integrals
 *     of f_k against g_k over real partitions and recombines I1*e1 + I2*e2.
 * Both refine until two successive sums differ by less than the tolerance in
 * each idempotent component.
 */

#include <functional>
#include <optional>
#include <string>

#include "hypercurve/expr.hpp"
#include "hypercurve/intervals.hpp"
#include "hypercurve/numbers.hpp"
#include "hypercurve/paths.hpp"

namespace hypercurve {

using ComplexMap = std::function<Complex(Complex)>;

enum class IntegrandSource { Callback, Expression };

/// Product-type function f = f1*e1 + f2*e2, i.e. f(w1*e1 + w2*e2) = f1(w1)*e1 + f2(w2)*e2.
class Integrand {
public:
    Integrand(ComplexMap f1, ComplexMap f2);

    /// f1 = f2 = f.
    static Integrand uniform(ComplexMap f);
    static Integrand constant(const BiComplex& c);
    /// Product-type expression in `variable`; component k projects every constant.
    static Integrand from_expression(const expr::Expr& e, std::string variable = "z");
    /// Separate complex expressions for the two components.
    static Integrand from_components(const expr::Expr& f1, const expr::Expr& f2, std::string variable = "z");

    BiComplex operator()(const BiComplex& z) const { return {f1_(z.w1), f2_(z.w2)}; }
    Complex component(int k, Complex w) const { return k == 0 ? f1_(w) : f2_(w); }

    IntegrandSource source() const noexcept { return source_; }

    /// z -> f(z - c).
    Integrand shifted(const BiComplex& c) const;
    /// z -> a*f(z) + b*g(z).
    static Integrand combine(const BiComplex& a, const Integrand& f, const BiComplex& b, const Integrand& g);

private:
    ComplexMap f1_;
    ComplexMap f2_;
    IntegrandSource source_ = IntegrandSource::Callback;
};

/// Where tau_k sits inside [p_{k-1}, p_k]_D.
enum class Tag { Left, Midpoint, Right };

std::string_view to_string(Tag tag) noexcept;

struct IntegrationConfig {
    Hyperbolic tol{1e-9, 1e-9};
    int max_levels = 24;
    /// Coarse levels are never accepted as converged; guards against sums
    /// that agree by symmetry on the first few partitions.
    int min_levels = 4;
    Tag tag = Tag::Midpoint;
    std::optional<DPartition> initial_partition;
};

enum class Method { DirectRS, Componentwise, SmoothReduction };

std::string_view to_string(Method method) noexcept;

struct IntegralResult {
    BiComplex value;
    Hyperbolic est_error;
    int levels_used = 0;
    bool converged = false;
    Method method = Method::DirectRS;
};

/// Stieltjes integral of f(tau) against the integrator Gamma over its interval.
/// Over a degenerate interval the component of zero width contributes 0.
IntegralResult rs_integral(const Integrand& f, const DPath& integrator, const IntegrationConfig& cfg = {});
IntegralResult rs_integral_componentwise(const Integrand& f, const DPath& integrator,
                                         const IntegrationConfig& cfg = {});

/// Line integral: Stieltjes integral of f(Gamma(tau)) against Gamma.
IntegralResult line_integral(const Integrand& f, const DPath& path, const IntegrationConfig& cfg = {});
IntegralResult line_integral_componentwise(const Integrand& f, const DPath& path, const IntegrationConfig& cfg = {});

/// Adaptive quadrature of f_k(g_k(x)) g_k'(x) per component.
IntegralResult line_integral_smooth(const Integrand& f, const DPath& path, const QuadratureOptions& opts = {});

/// Integral of f(Gamma(tau)) against the arc-length function (Gamma)_tau.
IntegralResult line_integral_arclength(const Integrand& f, const DPath& path, const IntegrationConfig& cfg = {});

/// Product-type map Phi = Phi1*e1 + Phi2*e2 on [lambda, mu]_D.
struct MonotoneMap {
    RealToReal phi1;
    RealToReal phi2;
    DInterval domain;
    RealToReal dphi1 = {};
    RealToReal dphi2 = {};
};

struct ReparamDiagnostics {
    /// Some Phi(z) lands in O (exactly one component zero).
    bool hits_zero_divisor = false;
    /// Some sampled increment of Phi has a zero component.
    bool degenerate_increments = false;
};

/// Gamma o Phi. Throws Errc::EndpointMismatch unless Phi(lambda) = alpha and
/// Phi(mu) = beta, Errc::NotMonotone on a sampled decrease of either component.
DPath reparametrize(const DPath& path, const MonotoneMap& phi, Tolerance tol = {1e-9}, int samples = 257);
ReparamDiagnostics check_reparametrization(const MonotoneMap& phi, Tolerance tol = {1e-9}, int samples = 257);

/// F(Gamma(beta)) - F(Gamma(alpha)).
BiComplex ftc_eval(const Integrand& primitive, const DPath& path);
/// As above, after checking F' = f by central differences at `samples` trace
/// points; throws Errc::PrimitiveMismatch when they differ by more than 1e-4.
BiComplex ftc_eval(const Integrand& primitive, const DPath& path, const Integrand& f, int samples = 16);

/// V(Gamma) * sup_D |f|_D over `samples` trace points.
Hyperbolic ml_bound(const Integrand& f, const DPath& path, int samples = 4096);

} // namespace hypercurve
