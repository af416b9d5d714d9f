#include "hypercurve/paths.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypercurve/detail/reduce.hpp"
#include "hypercurve/error.hpp"

namespace hypercurve {

std::string_view to_string(PathKind kind) noexcept {
    switch (kind) {
    case PathKind::Polyline: return "polyline";
    case PathKind::Segment: return "segment";
    case PathKind::Arc: return "arc";
    case PathKind::Expression: return "expr";
    case PathKind::Callback: return "callback";
    }
    return "unknown";
}

struct ComponentPath::Impl {
    PathKind kind = PathKind::Callback;
    double lo = 0.0;
    double hi = 0.0;
    RealToComplex eval;
    RealToComplex deriv;
    std::vector<double> params;  // polyline only
    std::vector<Complex> values;
    std::vector<double> breaks;
};

namespace {

using Impl = ComponentPath::Impl;

void check_domain(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(Errc::NonFinite, "component domain must be finite");
    if (hi < lo) throw Error(Errc::Reversed, "component domain [" + format_real(lo) + ", " + format_real(hi) + "]");
}

std::size_t polyline_segment(const std::vector<double>& params, double x) {
    auto it = std::upper_bound(params.begin(), params.end(), x);
    std::size_t k = static_cast<std::size_t>(it - params.begin());
    k = std::clamp<std::size_t>(k, 1, params.size() - 1);
    return k - 1;
}

Complex polyline_eval(const Impl& p, double x) {
    const std::size_t k = polyline_segment(p.params, x);
    const double t0 = p.params[k];
    const double t1 = p.params[k + 1];
    if (x <= t0) return p.values[k];
    if (x >= t1) return p.values[k + 1];
    const double w = (x - t0) / (t1 - t0);
    return p.values[k] + w * (p.values[k + 1] - p.values[k]);
}

Complex polyline_slope(const Impl& p, double x) {
    const std::size_t k = polyline_segment(p.params, x);
    return (p.values[k + 1] - p.values[k]) / (p.params[k + 1] - p.params[k]);
}

std::vector<double> interior(std::span<const double> points, double lo, double hi) {
    std::vector<double> out;
    for (double b : points) {
        if (b > lo && b < hi) out.push_back(b);
    }
    return out;
}

Complex finite_difference(const ComponentPath& g, double x) {
    const double lo = g.lo();
    const double hi = g.hi();
    const double width = hi - lo;
    if (width <= 0.0) return {};
    const double step = std::min(std::cbrt(DBL_EPSILON) * std::max(1.0, width), width / 4.0);
    auto estimate = [&](double h) -> Complex {
        if (x - h >= lo && x + h <= hi) return (g(x + h) - g(x - h)) / (2.0 * h);
        if (x - lo < hi - x) return (-3.0 * g(x) + 4.0 * g(x + h) - g(x + 2.0 * h)) / (2.0 * h);
        return (3.0 * g(x) - 4.0 * g(x - h) + g(x - 2.0 * h)) / (2.0 * h);
    };
    const Complex coarse = estimate(step);
    const Complex fine = estimate(step / 2.0);
    if (!std::isfinite(std::abs(fine)) || std::abs(coarse - fine) > 1e-6 * std::max(1.0, std::abs(fine))) {
        throw Error(Errc::NotDifferentiable, "difference quotients do not stabilize at x = " + format_real(x));
    }
    return fine;
}

} // namespace

ComponentPath ComponentPath::segment(Complex from, Complex to, double lo, double hi) {
    check_domain(lo, hi);
    if (hi == lo) return point(from, lo);
    auto impl = std::make_shared<Impl>();
    impl->kind = PathKind::Segment;
    impl->lo = lo;
    impl->hi = hi;
    const Complex slope = (to - from) / (hi - lo);
    impl->eval = [=](double x) { return x >= hi ? to : from + (x - lo) * slope; };
    impl->deriv = [=](double) { return slope; };
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::arc(Complex center, double radius, double theta0, double theta1) {
    check_domain(theta0, theta1);
    auto impl = std::make_shared<Impl>();
    impl->kind = PathKind::Arc;
    impl->lo = theta0;
    impl->hi = theta1;
    impl->eval = [=](double x) { return center + radius * std::polar(1.0, x); };
    impl->deriv = [=](double x) { return Complex(0.0, radius) * std::polar(1.0, x); };
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::polyline(std::vector<double> params, std::vector<Complex> values) {
    if (params.size() != values.size() || params.size() < 2) {
        throw Error(Errc::InvalidArgument, "polyline needs at least two samples with matching params");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (!std::isfinite(params[k]) || !std::isfinite(values[k].real()) || !std::isfinite(values[k].imag())) {
            throw Error(Errc::NonFinite, "polyline samples must be finite");
        }
        if (k > 0 && !(params[k] > params[k - 1])) {
            throw Error(Errc::InvalidArgument, "polyline params must be strictly increasing");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = PathKind::Polyline;
    impl->lo = params.front();
    impl->hi = params.back();
    impl->breaks.assign(params.begin() + 1, params.end() - 1);
    impl->params = std::move(params);
    impl->values = std::move(values);
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::expression(expr::Expr e, int component, double lo, double hi) {
    check_domain(lo, hi);
    for (const auto& name : expr::free_variables(e)) {
        if (name != "t" && name != "s") {
            throw Error(Errc::UnboundVariable, "path expressions may only use t and s, found '" + name + "'");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = PathKind::Expression;
    impl->lo = lo;
    impl->hi = hi;
    impl->eval = [e = std::move(e), component](double x) {
        const expr::ComplexBinding env[] = {{"t", Complex(x)}, {"s", Complex(x)}};
        return expr::eval_component(e, env, component);
    };
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::callback(double lo, double hi, RealToComplex eval, RealToComplex deriv) {
    check_domain(lo, hi);
    if (!eval) throw Error(Errc::InvalidArgument, "callback path needs an evaluator");
    auto impl = std::make_shared<Impl>();
    impl->kind = PathKind::Callback;
    impl->lo = lo;
    impl->hi = hi;
    impl->eval = std::move(eval);
    impl->deriv = std::move(deriv);
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::point(Complex value, double at) {
    return callback(at, at, [value](double) { return value; }, [](double) { return Complex{}; });
}

double ComponentPath::lo() const noexcept { return impl_->lo; }
double ComponentPath::hi() const noexcept { return impl_->hi; }
PathKind ComponentPath::kind() const noexcept { return impl_->kind; }

Complex ComponentPath::operator()(double x) const {
    x = std::clamp(x, impl_->lo, impl_->hi);
    if (impl_->kind == PathKind::Polyline) return polyline_eval(*impl_, x);
    return impl_->eval(x);
}

bool ComponentPath::has_analytic_derivative() const noexcept {
    return impl_->kind == PathKind::Polyline || static_cast<bool>(impl_->deriv);
}

Complex ComponentPath::derivative(double x) const {
    x = std::clamp(x, impl_->lo, impl_->hi);
    if (impl_->lo == impl_->hi) return {};
    if (impl_->kind == PathKind::Polyline) return polyline_slope(*impl_, x);
    if (impl_->deriv) return impl_->deriv(x);
    return finite_difference(*this, x);
}

std::span<const double> ComponentPath::breakpoints() const noexcept { return impl_->breaks; }
std::span<const double> ComponentPath::sample_params() const noexcept { return impl_->params; }
std::span<const Complex> ComponentPath::sample_values() const noexcept { return impl_->values; }

ComponentPath ComponentPath::reversed() const {
    if (impl_->kind == PathKind::Polyline) {
        std::vector<double> params(impl_->params.rbegin(), impl_->params.rend());
        for (auto& p : params) p = -p;
        return polyline(std::move(params), {impl_->values.rbegin(), impl_->values.rend()});
    }
    auto impl = std::make_shared<Impl>();
    impl->lo = -impl_->hi;
    impl->hi = -impl_->lo;
    impl->eval = [self = *this](double x) { return self(-x); };
    if (has_analytic_derivative()) impl->deriv = [self = *this](double x) { return -self.derivative(-x); };
    for (auto it = impl_->breaks.rbegin(); it != impl_->breaks.rend(); ++it) impl->breaks.push_back(-*it);
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::translated(Complex c) const {
    if (impl_->kind == PathKind::Polyline) {
        auto values = impl_->values;
        for (auto& v : values) v += c;
        return polyline(impl_->params, std::move(values));
    }
    auto impl = std::make_shared<Impl>(*impl_);
    impl->kind = impl_->kind == PathKind::Expression ? PathKind::Callback : impl_->kind;
    impl->eval = [self = *this, c](double x) { return self(x) + c; };
    if (has_analytic_derivative()) impl->deriv = [self = *this](double x) { return self.derivative(x); };
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::scaled(Complex a) const {
    if (impl_->kind == PathKind::Polyline) {
        auto values = impl_->values;
        for (auto& v : values) v *= a;
        return polyline(impl_->params, std::move(values));
    }
    auto impl = std::make_shared<Impl>(*impl_);
    impl->kind = PathKind::Callback;
    impl->eval = [self = *this, a](double x) { return a * self(x); };
    if (has_analytic_derivative()) impl->deriv = [self = *this, a](double x) { return a * self.derivative(x); };
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::combined(Complex a, const ComponentPath& other, Complex b) const {
    if (lo() != other.lo() || hi() != other.hi()) {
        throw Error(Errc::InvalidArgument, "combined component paths need identical domains");
    }
    auto impl = std::make_shared<Impl>();
    impl->lo = lo();
    impl->hi = hi();
    impl->eval = [g = *this, h = other, a, b](double x) { return a * g(x) + b * h(x); };
    if (has_analytic_derivative() && other.has_analytic_derivative()) {
        impl->deriv = [g = *this, h = other, a, b](double x) { return a * g.derivative(x) + b * h.derivative(x); };
    }
    impl->breaks.assign(impl_->breaks.begin(), impl_->breaks.end());
    impl->breaks.insert(impl->breaks.end(), other.breakpoints().begin(), other.breakpoints().end());
    std::sort(impl->breaks.begin(), impl->breaks.end());
    impl->breaks.erase(std::unique(impl->breaks.begin(), impl->breaks.end()), impl->breaks.end());
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::truncated(double x_hi) const { return restricted(lo(), x_hi); }

ComponentPath ComponentPath::restricted(double x_lo, double x_hi) const {
    if (x_lo < lo() || x_hi > hi() || x_hi < x_lo) {
        throw Error(Errc::OutOfDomain, "restriction [" + format_real(x_lo) + ", " + format_real(x_hi) +
                                           "] is not inside the component domain");
    }
    if (x_lo == x_hi) return point((*this)(x_lo), x_lo);
    if (impl_->kind == PathKind::Polyline) {
        std::vector<double> params{x_lo};
        std::vector<Complex> values{(*this)(x_lo)};
        for (std::size_t k = 0; k < impl_->params.size(); ++k) {
            if (impl_->params[k] > x_lo && impl_->params[k] < x_hi) {
                params.push_back(impl_->params[k]);
                values.push_back(impl_->values[k]);
            }
        }
        params.push_back(x_hi);
        values.push_back((*this)(x_hi));
        return polyline(std::move(params), std::move(values));
    }
    auto impl = std::make_shared<Impl>(*impl_);
    impl->lo = x_lo;
    impl->hi = x_hi;
    impl->breaks = interior(impl_->breaks, x_lo, x_hi);
    return ComponentPath(std::move(impl));
}

ComponentPath ComponentPath::composed(RealToReal phi, RealToReal dphi, double lambda, double mu) const {
    check_domain(lambda, mu);
    auto impl = std::make_shared<Impl>();
    impl->lo = lambda;
    impl->hi = mu;
    impl->eval = [g = *this, phi](double x) { return g(phi(x)); };
    if (dphi && has_analytic_derivative()) {
        impl->deriv = [g = *this, phi, dphi](double x) { return g.derivative(phi(x)) * dphi(x); };
    }
    return ComponentPath(std::move(impl));
}

DPath::DPath(ComponentPath first, ComponentPath second)
    : first_(std::move(first)), second_(std::move(second)),
      interval_(DInterval::make({first_.lo(), second_.lo()}, {first_.hi(), second_.hi()})) {}

DPath DPath::identity(const DInterval& interval) {
    auto make = [&](int k) {
        const auto [lo, hi] = interval.component(k);
        if (lo == hi) return ComponentPath::point(Complex(lo), lo);
        return ComponentPath::segment(Complex(lo), Complex(hi), lo, hi);
    };
    return DPath(make(0), make(1));
}

DPath DPath::segment(const BiComplex& from, const BiComplex& to) {
    return DPath(ComponentPath::segment(from.w1, to.w1), ComponentPath::segment(from.w2, to.w2));
}

DPath DPath::bicircle(const BiComplex& center, double radius, double turns) {
    const double end = 2.0 * std::numbers::pi * turns;
    return DPath(ComponentPath::arc(center.w1, radius, 0.0, end), ComponentPath::arc(center.w2, radius, 0.0, end));
}

BiComplex path_eval(const DPath& path, const Hyperbolic& tau, Tolerance tol) {
    if (!path.interval().contains(tau, tol)) {
        throw Error(Errc::OutOfDomain, format_hyperbolic(tau) + " is outside the path interval");
    }
    return path(tau);
}

BiComplex path_derivative(const DPath& path, const Hyperbolic& tau, Tolerance tol) {
    if (!path.interval().contains(tau, tol)) {
        throw Error(Errc::OutOfDomain, format_hyperbolic(tau) + " is outside the path interval");
    }
    return {path.component(0).derivative(tau.v1), path.component(1).derivative(tau.v2)};
}

Hyperbolic variation_sum(const DPath& path, std::span<const Hyperbolic> chain) {
    if (chain.size() < 2) return {};
    return detail::chain_sum<Hyperbolic>(
        1, chain.size() - 1, [&](std::size_t i) { return path(chain[i]); },
        [](std::size_t, const BiComplex& prev, const BiComplex& cur) { return d_modulus(cur - prev); });
}

Hyperbolic variation_sum(const DPath& path, const DPartition& partition) {
    return variation_sum(path, std::span<const Hyperbolic>(partition.points()));
}

std::vector<Hyperbolic> natural_chain(const DPath& path) {
    std::array<std::vector<double>, 2> lists;
    for (int k = 0; k < 2; ++k) {
        const auto& g = path.component(k);
        auto& list = lists[static_cast<std::size_t>(k)];
        list.push_back(g.lo());
        if (g.hi() > g.lo()) {
            const auto inner = interior(g.breakpoints(), g.lo(), g.hi());
            list.insert(list.end(), inner.begin(), inner.end());
            list.push_back(g.hi());
        }
    }
    const std::size_t n = std::max<std::size_t>({lists[0].size(), lists[1].size(), 2});
    for (auto& list : lists) {
        if (list.size() == 1) {
            list.assign(n, list.front());
            continue;
        }
        while (list.size() < n) {
            std::size_t widest = 0;
            for (std::size_t k = 1; k + 1 < list.size(); ++k) {
                if (list[k + 1] - list[k] > list[widest + 1] - list[widest]) widest = k;
            }
            list.insert(list.begin() + static_cast<std::ptrdiff_t>(widest) + 1,
                        0.5 * (list[widest] + list[widest + 1]));
        }
    }
    std::vector<Hyperbolic> chain;
    chain.reserve(n);
    for (std::size_t k = 0; k < n; ++k) chain.emplace_back(lists[0][k], lists[1][k]);
    chain.front() = path.interval().lo();
    chain.back() = path.interval().hi();
    return chain;
}

namespace {

/// Point m of the chain obtained by refining `base` `level` times.
Hyperbolic dyadic_point(std::span<const Hyperbolic> base, int level, std::size_t m) {
    const std::size_t per = std::size_t{1} << level;
    const std::size_t q = m / per;
    const std::size_t r = m % per;
    if (r == 0) return base[q];
    const double w = static_cast<double>(r) / static_cast<double>(per);
    return base[q] + (base[q + 1] - base[q]) * w;
}

Hyperbolic abs_diff(const Hyperbolic& a, const Hyperbolic& b) { return d_modulus(a - b); }

} // namespace

VariationReport total_variation(const DPath& path, const VariationOptions& opts) {
    if (opts.tol <= 0.0 || opts.max_levels < 0) throw Error(Errc::InvalidArgument, "bad variation options");
    const auto base = natural_chain(path);
    const bool degenerate = path.interval().is_degenerate();
    auto sum_at = [&](int level) {
        const std::size_t steps = (base.size() - 1) << level;
        return detail::chain_sum<Hyperbolic>(
            1, steps, [&](std::size_t m) { return path(dyadic_point(base, level, m)); },
            [](std::size_t, const BiComplex& prev, const BiComplex& cur) { return d_modulus(cur - prev); });
    };
    auto finish = [&](Hyperbolic total, int level, bool converged, Hyperbolic err) {
        VariationReport report;
        report.total = total;
        report.per_component = {total.v1, total.v2};
        report.converged = converged;
        report.levels = level;
        report.est_error = err;
        if (!degenerate) report.partition_used = DPartition::make(path.interval(), dyadic_chain(base, level));
        return report;
    };

    Hyperbolic prev = sum_at(0);
    const bool polylines = path.component(0).kind() == PathKind::Polyline &&
                           path.component(1).kind() == PathKind::Polyline;
    if (polylines) return finish(prev, 0, true, {});

    Hyperbolic diff{};
    for (int level = 1; level <= opts.max_levels; ++level) {
        const Hyperbolic cur = sum_at(level);
        diff = abs_diff(cur, prev);
        prev = cur;
        if (level >= opts.min_levels && diff.v1 < opts.tol && diff.v2 < opts.tol) {
            return finish(cur, level, true, diff);
        }
    }
    return finish(prev, opts.max_levels, false, diff);
}

Hyperbolic path_length_smooth(const DPath& path, const QuadratureOptions& opts) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    Hyperbolic out;
    for (int k = 0; k < 2; ++k) {
        const auto& g = path.component(k);
        if (g.hi() <= g.lo()) continue;
        std::vector<double> knots{g.lo()};
        const auto inner = interior(g.breakpoints(), g.lo(), g.hi());
        knots.insert(knots.end(), inner.begin(), inner.end());
        knots.push_back(g.hi());
        double total = 0.0;
        for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
            double error = 0.0;
            double l1 = 0.0;
            const double piece = Quad::integrate([&](double x) { return std::abs(g.derivative(x)); }, knots[p],
                                                 knots[p + 1], static_cast<unsigned>(opts.max_depth), opts.tol,
                                                 &error, &l1);
            if (!(error <= opts.tol * std::max(1.0, l1))) {
                throw Error(Errc::QuadratureFailure, "length quadrature error " + format_real(error) +
                                                         " exceeds tolerance on component " + std::to_string(k + 1));
            }
            total += piece;
        }
        (k == 0 ? out.v1 : out.v2) = total;
    }
    return out;
}

Hyperbolic arc_length_function(const DPath& path, const Hyperbolic& tau, const VariationOptions& opts,
                               Tolerance tol) {
    if (!path.interval().contains(tau, tol)) {
        throw Error(Errc::OutOfDomain, format_hyperbolic(tau) + " is outside the path interval");
    }
    const auto& iv = path.interval();
    const Hyperbolic clamped{std::clamp(tau.v1, iv.lo().v1, iv.hi().v1), std::clamp(tau.v2, iv.lo().v2, iv.hi().v2)};
    const auto sub = DInterval::make(iv.lo(), clamped, tol);
    return total_variation(path_restrict(path, sub, tol), opts).total;
}

DPath path_reverse(const DPath& path) {
    return DPath(path.component(0).reversed(), path.component(1).reversed());
}

DPath path_translate(const DPath& path, const BiComplex& c) {
    return DPath(path.component(0).translated(c.w1), path.component(1).translated(c.w2));
}

DPath path_scale(const DPath& path, const BiComplex& a) {
    return DPath(path.component(0).scaled(a.w1), path.component(1).scaled(a.w2));
}

DPath path_combine(const BiComplex& a, const DPath& gamma, const BiComplex& b, const DPath& lambda) {
    if (!(gamma.interval() == lambda.interval())) {
        throw Error(Errc::InvalidArgument, "path_combine needs paths over the same interval");
    }
    return DPath(gamma.component(0).combined(a.w1, lambda.component(0), b.w1),
                 gamma.component(1).combined(a.w2, lambda.component(1), b.w2));
}

DPath path_restrict(const DPath& path, const DInterval& sub, Tolerance tol) {
    if (!path.interval().contains(sub.lo(), tol) || !path.interval().contains(sub.hi(), tol)) {
        throw Error(Errc::OutOfDomain, "restriction interval is not inside the path interval");
    }
    auto piece = [&](int k) {
        const auto& g = path.component(k);
        const double lo = std::clamp(sub.lo().component(k), g.lo(), g.hi());
        const double hi = std::clamp(sub.hi().component(k), lo, g.hi());
        return g.restricted(lo, hi);
    };
    return DPath(piece(0), piece(1));
}

bool is_closed(const DPath& path, double tol) {
    const Hyperbolic gap = d_modulus(path.end() - path.start());
    return gap.v1 < tol && gap.v2 < tol;
}

std::vector<TracePoint> sample_trace(const DPath& path, std::size_t n) {
    if (n < 2) throw Error(Errc::InvalidArgument, "trace sampling needs at least two points");
    const auto& iv = path.interval();
    std::vector<TracePoint> out;
    out.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double w = static_cast<double>(m) / static_cast<double>(n - 1);
        const Hyperbolic tau = m + 1 == n ? iv.hi() : iv.lo() + iv.length() * w;
        out.push_back({tau, path(tau)});
    }
    return out;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
    out << "tau_v1,tau_v2,w1_re,w1_im,w2_re,w2_im\n";
    for (const auto& p : trace) {
        out << format_real(p.tau.v1) << ',' << format_real(p.tau.v2) << ',' << format_real(p.value.w1.real()) << ','
            << format_real(p.value.w1.imag()) << ',' << format_real(p.value.w2.real()) << ','
            << format_real(p.value.w2.imag()) << '\n';
    }
}

} // namespace hypercurve
