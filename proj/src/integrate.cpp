#include "hypercurve/integrate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hypercurve/detail/reduce.hpp"
#include "hypercurve/error.hpp"

namespace hypercurve {

std::string_view to_string(Tag tag) noexcept {
    switch (tag) {
    case Tag::Left: return "left";
    case Tag::Midpoint: return "midpoint";
    case Tag::Right: return "right";
    }
    return "unknown";
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
    case Method::DirectRS: return "DirectRS";
    case Method::Componentwise: return "Componentwise";
    case Method::SmoothReduction: return "SmoothReduction";
    }
    return "unknown";
}

Integrand::Integrand(ComplexMap f1, ComplexMap f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
    if (!f1_ || !f2_) throw Error(Errc::InvalidArgument, "integrand components must be callable");
}

Integrand Integrand::uniform(ComplexMap f) { return Integrand(f, f); }

Integrand Integrand::constant(const BiComplex& c) {
    return Integrand([w = c.w1](Complex) { return w; }, [w = c.w2](Complex) { return w; });
}

Integrand Integrand::from_expression(const expr::Expr& e, std::string variable) {
    return from_components(e, e, std::move(variable));
}

Integrand Integrand::from_components(const expr::Expr& f1, const expr::Expr& f2, std::string variable) {
    for (const auto* e : {&f1, &f2}) {
        for (const auto& name : expr::free_variables(*e)) {
            if (name != variable) {
                throw Error(Errc::UnboundVariable,
                            "integrand may only use '" + variable + "', found '" + name + "'");
            }
        }
    }
    auto component = [variable](const expr::Expr& e, int k) {
        return [e, k, variable](Complex w) {
            const expr::ComplexBinding env[] = {{variable, w}};
            return expr::eval_component(e, env, k);
        };
    };
    Integrand out(component(f1, 0), component(f2, 1));
    out.source_ = IntegrandSource::Expression;
    return out;
}

Integrand Integrand::shifted(const BiComplex& c) const {
    Integrand out([f = f1_, s = c.w1](Complex w) { return f(w - s); },
                  [f = f2_, s = c.w2](Complex w) { return f(w - s); });
    out.source_ = source_;
    return out;
}

Integrand Integrand::combine(const BiComplex& a, const Integrand& f, const BiComplex& b, const Integrand& g) {
    return Integrand([a = a.w1, b = b.w1, f = f.f1_, g = g.f1_](Complex w) { return a * f(w) + b * g(w); },
                     [a = a.w2, b = b.w2, f = f.f2_, g = g.f2_](Complex w) { return a * f(w) + b * g(w); });
}

namespace {

void validate(const IntegrationConfig& cfg) {
    if (!(cfg.tol.v1 > 0.0) || !(cfg.tol.v2 > 0.0)) {
        throw Error(Errc::InvalidArgument, "integration tolerance must be positive in both components");
    }
    if (cfg.max_levels < 1) throw Error(Errc::InvalidArgument, "max_levels must be >= 1");
}

std::vector<Hyperbolic> starting_chain(const DPath& path, const IntegrationConfig& cfg) {
    if (!cfg.initial_partition) return natural_chain(path);
    const auto& part = *cfg.initial_partition;
    if (!(part.interval() == path.interval())) {
        throw Error(Errc::EndpointMismatch, "initial partition does not cover the path interval");
    }
    return part.points();
}

Hyperbolic chain_point(const std::vector<Hyperbolic>& base, int level, std::size_t m) {
    const std::size_t per = std::size_t{1} << level;
    const std::size_t q = m / per;
    const std::size_t r = m % per;
    if (r == 0) return base[q];
    return base[q] + (base[q + 1] - base[q]) * (static_cast<double>(r) / static_cast<double>(per));
}

struct ChainNode {
    Hyperbolic tau;
    BiComplex gamma;
};

enum class Integrator { Path, ArcLength };

/// Dyadic refinement driver shared by the bicomplex routes. `weight(tau)` is
/// the integrand at a tag point.
template <typename Weight>
IntegralResult refine_direct(const Weight& weight, const DPath& path, const IntegrationConfig& cfg,
                             Integrator integrator) {
    validate(cfg);
    IntegralResult result;
    result.method = Method::DirectRS;
    const auto& iv = path.interval();
    if (classify(iv.length()) == NumberClass::Zero) {
        result.converged = true;
        return result;
    }
    const auto base = starting_chain(path, cfg);
    auto sum_at = [&](int level) {
        const std::size_t steps = (base.size() - 1) << level;
        return detail::chain_sum<BiComplex>(
            1, steps,
            [&](std::size_t m) {
                const Hyperbolic tau = chain_point(base, level, m);
                return ChainNode{tau, path(tau)};
            },
            [&](std::size_t, const ChainNode& prev, const ChainNode& cur) {
                Hyperbolic tag;
                switch (cfg.tag) {
                case Tag::Left: tag = prev.tau; break;
                case Tag::Right: tag = cur.tau; break;
                case Tag::Midpoint: tag = (prev.tau + cur.tau) * 0.5; break;
                }
                const BiComplex increment = integrator == Integrator::Path
                                                ? cur.gamma - prev.gamma
                                                : d_modulus(cur.gamma - prev.gamma).to_bicomplex();
                return weight(tag) * increment;
            });
    };

    const int min_levels = std::min(cfg.min_levels, cfg.max_levels);
    BiComplex prev = sum_at(0);
    for (int level = 1; level <= cfg.max_levels; ++level) {
        const BiComplex cur = sum_at(level);
        const Hyperbolic diff = d_modulus(cur - prev);
        result.value = cur;
        result.est_error = diff;
        result.levels_used = level;
        prev = cur;
        if (level >= min_levels && diff.v1 < cfg.tol.v1 && diff.v2 < cfg.tol.v2) {
            result.converged = true;
            return result;
        }
    }
    return result;
}

struct ScalarResult {
    Complex value;
    double est_error = 0.0;
    int levels = 0;
    bool converged = false;
};

/// Complex Stieltjes integral of weight(x) against g over real knots, refined
/// dyadically. Independent of the bicomplex driver above.
ScalarResult scalar_stieltjes(const std::function<Complex(double)>& weight, const ComponentPath& g,
                              const std::vector<double>& knots, Tag tag, double tol, int max_levels,
                              int min_levels) {
    ScalarResult out;
    if (knots.front() == knots.back()) {
        out.converged = true;
        return out;
    }
    auto sum_at = [&](int level) {
        const std::size_t per = std::size_t{1} << level;
        const std::size_t steps = (knots.size() - 1) * per;
        auto point = [&](std::size_t m) {
            const std::size_t q = m / per;
            const std::size_t r = m % per;
            if (r == 0) return knots[q];
            return knots[q] + (knots[q + 1] - knots[q]) * (static_cast<double>(r) / static_cast<double>(per));
        };
        return detail::pairwise_sum<Complex>(steps, [&](std::size_t m) {
            const double x0 = point(m);
            const double x1 = point(m + 1);
            double xt = 0.5 * (x0 + x1);
            if (tag == Tag::Left) xt = x0;
            if (tag == Tag::Right) xt = x1;
            return weight(xt) * (g(x1) - g(x0));
        });
    };
    Complex prev = sum_at(0);
    const int floor = std::min(min_levels, max_levels);
    for (int level = 1; level <= max_levels; ++level) {
        const Complex cur = sum_at(level);
        out.est_error = std::abs(cur - prev);
        out.value = cur;
        out.levels = level;
        prev = cur;
        if (level >= floor && out.est_error < tol) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

template <typename WeightFor>
IntegralResult refine_componentwise(const WeightFor& weight_for, const DPath& path, const IntegrationConfig& cfg) {
    validate(cfg);
    const auto base = starting_chain(path, cfg);
    IntegralResult result;
    result.method = Method::Componentwise;
    result.converged = true;
    std::array<Complex, 2> values{};
    for (int k = 0; k < 2; ++k) {
        std::vector<double> knots;
        knots.reserve(base.size());
        for (const auto& p : base) knots.push_back(p.component(k));
        const auto& g = path.component(k);
        const auto part = scalar_stieltjes(weight_for(k), g, knots, cfg.tag, cfg.tol.component(k), cfg.max_levels,
                                           cfg.min_levels);
        values[static_cast<std::size_t>(k)] = part.value;
        (k == 0 ? result.est_error.v1 : result.est_error.v2) = part.est_error;
        result.levels_used = std::max(result.levels_used, part.levels);
        result.converged = result.converged && part.converged;
    }
    result.value = {values[0], values[1]};
    return result;
}

} // namespace

IntegralResult rs_integral(const Integrand& f, const DPath& integrator, const IntegrationConfig& cfg) {
    return refine_direct([&](const Hyperbolic& tau) { return f(tau.to_bicomplex()); }, integrator, cfg,
                         Integrator::Path);
}

IntegralResult rs_integral_componentwise(const Integrand& f, const DPath& integrator, const IntegrationConfig& cfg) {
    return refine_componentwise(
        [&](int k) { return [&f, k](double x) { return f.component(k, Complex(x)); }; }, integrator, cfg);
}

IntegralResult line_integral(const Integrand& f, const DPath& path, const IntegrationConfig& cfg) {
    return refine_direct([&](const Hyperbolic& tau) { return f(path(tau)); }, path, cfg, Integrator::Path);
}

IntegralResult line_integral_componentwise(const Integrand& f, const DPath& path, const IntegrationConfig& cfg) {
    return refine_componentwise(
        [&](int k) {
            return [&f, &g = path.component(k), k](double x) { return f.component(k, g(x)); };
        },
        path, cfg);
}

IntegralResult line_integral_arclength(const Integrand& f, const DPath& path, const IntegrationConfig& cfg) {
    return refine_direct([&](const Hyperbolic& tau) { return f(path(tau)); }, path, cfg, Integrator::ArcLength);
}

IntegralResult line_integral_smooth(const Integrand& f, const DPath& path, const QuadratureOptions& opts) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    IntegralResult result;
    result.method = Method::SmoothReduction;
    result.converged = true;
    std::array<Complex, 2> values{};
    for (int k = 0; k < 2; ++k) {
        const auto& g = path.component(k);
        if (g.hi() <= g.lo()) continue;
        std::vector<double> knots{g.lo()};
        for (double b : g.breakpoints()) {
            if (b > g.lo() && b < g.hi()) knots.push_back(b);
        }
        knots.push_back(g.hi());
        Complex total;
        double total_error = 0.0;
        for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
            auto integrand = [&](double x) { return f.component(k, g(x)) * g.derivative(x); };
            double err_re = 0.0;
            double err_im = 0.0;
            double l1_re = 0.0;
            double l1_im = 0.0;
            const auto depth = static_cast<unsigned>(opts.max_depth);
            const double re = Quad::integrate([&](double x) { return integrand(x).real(); }, knots[p], knots[p + 1],
                                              depth, opts.tol, &err_re, &l1_re);
            const double im = Quad::integrate([&](double x) { return integrand(x).imag(); }, knots[p], knots[p + 1],
                                              depth, opts.tol, &err_im, &l1_im);
            if (!(err_re <= opts.tol * std::max(1.0, l1_re)) || !(err_im <= opts.tol * std::max(1.0, l1_im))) {
                throw Error(Errc::QuadratureFailure,
                            "line-integral quadrature did not reach tolerance on component " + std::to_string(k + 1));
            }
            total += Complex(re, im);
            total_error += std::hypot(err_re, err_im);
        }
        values[static_cast<std::size_t>(k)] = total;
        (k == 0 ? result.est_error.v1 : result.est_error.v2) = total_error;
    }
    result.value = {values[0], values[1]};
    return result;
}

namespace {

std::vector<double> sample_grid(double lo, double hi, int samples) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(samples));
    for (int m = 0; m < samples; ++m) {
        const double w = static_cast<double>(m) / static_cast<double>(samples - 1);
        xs.push_back(m + 1 == samples ? hi : lo + (hi - lo) * w);
    }
    return xs;
}

} // namespace

ReparamDiagnostics check_reparametrization(const MonotoneMap& phi, Tolerance tol, int samples) {
    if (samples < 2) throw Error(Errc::InvalidArgument, "reparametrization check needs >= 2 samples");
    ReparamDiagnostics diag;
    std::array<bool, 2> has_zero{};
    std::array<bool, 2> has_nonzero{};
    for (int k = 0; k < 2; ++k) {
        const auto [lo, hi] = phi.domain.component(k);
        const auto& map = k == 0 ? phi.phi1 : phi.phi2;
        double prev = 0.0;
        bool first = true;
        for (double x : sample_grid(lo, hi, samples)) {
            const double v = map(x);
            (std::fabs(v) <= tol.eps ? has_zero : has_nonzero)[static_cast<std::size_t>(k)] = true;
            if (!first && v - prev <= tol.eps) diag.degenerate_increments = true;
            prev = v;
            first = false;
        }
    }
    diag.hits_zero_divisor = (has_zero[0] && has_nonzero[1]) || (has_zero[1] && has_nonzero[0]);
    return diag;
}

DPath reparametrize(const DPath& path, const MonotoneMap& phi, Tolerance tol, int samples) {
    if (!phi.phi1 || !phi.phi2) throw Error(Errc::InvalidArgument, "reparametrization needs both components");
    if (samples < 2) throw Error(Errc::InvalidArgument, "reparametrization check needs >= 2 samples");
    const auto& target = path.interval();
    std::array<ComponentPath, 2> parts{path.component(0), path.component(1)};
    for (int k = 0; k < 2; ++k) {
        const auto [lo, hi] = phi.domain.component(k);
        const auto [alpha, beta] = target.component(k);
        const auto& map = k == 0 ? phi.phi1 : phi.phi2;
        if (std::fabs(map(lo) - alpha) > tol.eps || std::fabs(map(hi) - beta) > tol.eps) {
            throw Error(Errc::EndpointMismatch, "Phi does not map the endpoints of component " +
                                                    std::to_string(k + 1) + " onto the path interval");
        }
        double prev = map(lo);
        for (double x : sample_grid(lo, hi, samples)) {
            const double v = map(x);
            if (v < prev - tol.eps) {
                throw Error(Errc::NotMonotone,
                            "Phi decreases on component " + std::to_string(k + 1) + " near x = " + format_real(x));
            }
            prev = v;
        }
        parts[static_cast<std::size_t>(k)] =
            path.component(k).composed(map, k == 0 ? phi.dphi1 : phi.dphi2, lo, hi);
    }
    return DPath(parts[0], parts[1]);
}

BiComplex ftc_eval(const Integrand& primitive, const DPath& path) {
    return primitive(path.end()) - primitive(path.start());
}

BiComplex ftc_eval(const Integrand& primitive, const DPath& path, const Integrand& f, int samples) {
    if (samples < 2) throw Error(Errc::InvalidArgument, "primitive guard needs >= 2 samples");
    for (const auto& point : sample_trace(path, static_cast<std::size_t>(samples))) {
        for (int k = 0; k < 2; ++k) {
            const Complex w = point.value.component(k);
            const double h = 1e-5 * std::max(1.0, std::abs(w));
            const Complex slope = (primitive.component(k, w + h) - primitive.component(k, w - h)) / (2.0 * h);
            const double mismatch = std::abs(slope - f.component(k, w));
            if (!(mismatch <= 1e-4)) {
                throw Error(Errc::PrimitiveMismatch, "F' differs from f by " + format_real(mismatch) +
                                                         " on component " + std::to_string(k + 1));
            }
        }
    }
    return ftc_eval(primitive, path);
}

Hyperbolic ml_bound(const Integrand& f, const DPath& path, int samples) {
    if (samples < 2) throw Error(Errc::InvalidArgument, "ml_bound needs >= 2 samples");
    const Hyperbolic length = total_variation(path).total;
    std::vector<Hyperbolic> moduli;
    moduli.reserve(static_cast<std::size_t>(samples));
    for (const auto& point : sample_trace(path, static_cast<std::size_t>(samples))) {
        moduli.push_back(d_modulus(f(point.value)));
    }
    return length * sup_d(moduli);
}

} // namespace hypercurve
