#pragma once

/**
 * @file paths.hpp
 * @brief Product-type hyperbolic paths Gamma(t*e1 + s*e2) = g1(t)*e1 + g2(s)*e2.
 *
 * A DPath is a pair of complex component paths g1: [a1, b1] -> C and
 * g2: [a2, b2] -> C living over the hyperbolic interval
 * [a1*e1 + a2*e2, b1*e1 + b2*e2]_D. Variation, length and derivatives all
 * decompose into the two components; the routines here nonetheless work on
 * bicomplex values and hyperbolic moduli directly so that the decomposition
 * can be checked against the scalar computations.
 */

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercurve/expr.hpp"
#include "hypercurve/intervals.hpp"
#include "hypercurve/numbers.hpp"

namespace hypercurve {

using RealToComplex = std::function<Complex(double)>;
using RealToReal = std::function<double(double)>;

enum class PathKind { Polyline, Segment, Arc, Expression, Callback };

std::string_view to_string(PathKind kind) noexcept;

/// One idempotent component g: [lo, hi] -> C of a D-path. Immutable; copies
/// share the underlying evaluator.
class ComponentPath {
public:
    /// from + (x - lo)/(hi - lo) * (to - from) on [lo, hi].
    static ComponentPath segment(Complex from, Complex to, double lo = 0.0, double hi = 1.0);
    /// center + radius*exp(i1*x) on [theta0, theta1].
    static ComponentPath arc(Complex center, double radius, double theta0, double theta1);
    /// Linear interpolation of samples; params must be strictly increasing.
    static ComponentPath polyline(std::vector<double> params, std::vector<Complex> values);
    /// Component k of an expression in the path parameters t and s, both bound to x.
    static ComponentPath expression(expr::Expr e, int component, double lo, double hi);
    static ComponentPath callback(double lo, double hi, RealToComplex eval, RealToComplex deriv = {});
    /// The constant path on the single point domain [at, at].
    static ComponentPath point(Complex value, double at);

    double lo() const noexcept;
    double hi() const noexcept;
    PathKind kind() const noexcept;

    /// Evaluates at x, clamped into [lo, hi].
    Complex operator()(double x) const;

    bool has_analytic_derivative() const noexcept;
    /// Analytic derivative when known, otherwise a stabilized finite difference.
    /// Throws Errc::NotDifferentiable when the difference quotients disagree.
    Complex derivative(double x) const;

    /// Interior points where the path may have a corner (polyline vertices).
    std::span<const double> breakpoints() const noexcept;
    /// Polyline samples; empty for other kinds.
    std::span<const double> sample_params() const noexcept;
    std::span<const Complex> sample_values() const noexcept;

    /// x -> g(-x) on [-hi, -lo].
    ComponentPath reversed() const;
    /// x -> g(x) + c.
    ComponentPath translated(Complex c) const;
    /// x -> a*g(x).
    ComponentPath scaled(Complex a) const;
    /// x -> a*g(x) + b*h(x); domains must agree.
    ComponentPath combined(Complex a, const ComponentPath& other, Complex b) const;
    /// Restriction to [lo, x_hi] ⊂ [lo, hi]; x_hi == lo gives a point path.
    ComponentPath truncated(double x_hi) const;
    /// Restriction to [x_lo, x_hi].
    ComponentPath restricted(double x_lo, double x_hi) const;
    /// g(phi(x)) on [lambda, mu]; dphi may be empty.
    ComponentPath composed(RealToReal phi, RealToReal dphi, double lambda, double mu) const;

    struct Impl;

private:
    explicit ComponentPath(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

class DPath {
public:
    DPath(ComponentPath first, ComponentPath second);

    /// Gamma(tau) = tau on the given interval.
    static DPath identity(const DInterval& interval);
    /// from + tau*(to - from) on [0, 1]_D.
    static DPath segment(const BiComplex& from, const BiComplex& to);
    /// center + radius*exp(i1*x) per component, x in [0, 2*pi*turns].
    static DPath bicircle(const BiComplex& center, double radius, double turns = 1.0);

    const ComponentPath& component(int k) const noexcept { return k == 0 ? first_ : second_; }
    const DInterval& interval() const noexcept { return interval_; }

    /// Unchecked evaluation; see path_eval for the domain-checked form.
    BiComplex operator()(const Hyperbolic& tau) const {
        return {first_(tau.v1), second_(tau.v2)};
    }
    BiComplex start() const { return (*this)(interval_.lo()); }
    BiComplex end() const { return (*this)(interval_.hi()); }

private:
    ComponentPath first_;
    ComponentPath second_;
    DInterval interval_;
};

/// Throws Errc::OutOfDomain when tau is outside the path interval.
BiComplex path_eval(const DPath& path, const Hyperbolic& tau, Tolerance tol = {});

/// D-derivative (componentwise). Uses analytic derivatives when present and a
/// central difference with step h*(e1 + e2) otherwise. A component over a
/// single-point domain contributes 0.
BiComplex path_derivative(const DPath& path, const Hyperbolic& tau, Tolerance tol = {});

/// Sum of |Gamma(p_k) - Gamma(p_{k-1})|_D over the partition.
Hyperbolic variation_sum(const DPath& path, const DPartition& partition);
/// Same sum over an unvalidated chain (may be constant in one component).
Hyperbolic variation_sum(const DPath& path, std::span<const Hyperbolic> chain);

struct VariationReport {
    Hyperbolic total;
    std::array<double, 2> per_component{};
    std::optional<DPartition> partition_used;  // absent for degenerate intervals
    bool converged = false;
    int levels = 0;
    Hyperbolic est_error;
};

struct VariationOptions {
    double tol = 1e-10;
    int max_levels = 20;
    int min_levels = 4;
};

/// Dyadic refinement of the path's natural chain until successive variation
/// sums change by less than tol in both components.
VariationReport total_variation(const DPath& path, const VariationOptions& opts = {});

/// Starting chain: endpoints plus every component breakpoint, padded so that
/// both components have the same number of points.
std::vector<Hyperbolic> natural_chain(const DPath& path);

struct QuadratureOptions {
    double tol = 1e-11;
    int max_depth = 18;
};

/// Componentwise adaptive quadrature of |g_k'| split at breakpoints. Throws
/// Errc::QuadratureFailure when the error estimate stays above tolerance.
Hyperbolic path_length_smooth(const DPath& path, const QuadratureOptions& opts = {});

/// (Gamma)_tau: total variation over [lo, tau]_D.
Hyperbolic arc_length_function(const DPath& path, const Hyperbolic& tau, const VariationOptions& opts = {},
                               Tolerance tol = {});

/// (-Gamma)(tau) = Gamma(-tau) on [-hi, -lo]_D.
DPath path_reverse(const DPath& path);
DPath path_translate(const DPath& path, const BiComplex& c);
DPath path_scale(const DPath& path, const BiComplex& a);
/// a*Gamma + b*Lambda over a common interval; throws Errc::InvalidArgument otherwise.
DPath path_combine(const BiComplex& a, const DPath& gamma, const BiComplex& b, const DPath& lambda);
/// Restriction to a subinterval (which may be degenerate).
DPath path_restrict(const DPath& path, const DInterval& sub, Tolerance tol = {});

/// |Gamma(hi) - Gamma(lo)|_D below tol in both components.
bool is_closed(const DPath& path, double tol = 1e-9);

struct TracePoint {
    Hyperbolic tau;
    BiComplex value;
};

/// n >= 2 points tau_m = lo + m/(n-1)*(hi - lo).
std::vector<TracePoint> sample_trace(const DPath& path, std::size_t n);
/// CSV with header tau_v1,tau_v2,w1_re,w1_im,w2_re,w2_im.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

} // namespace hypercurve
