#include "hypercurve/props.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypercurve/detail/reduce.hpp"
#include "hypercurve/error.hpp"

namespace hypercurve::props {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string complex_literal(Complex c) {
    std::string out = "(" + format_real(c.real());
    out += c.imag() < 0 ? "-" : "+";
    out += format_real(std::fabs(c.imag())) + "*i1)";
    return out;
}

std::string toml_string(std::string_view s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Largest idempotent-component distance.
double gap(const BiComplex& a, const BiComplex& b) {
    const auto d = d_modulus(a - b);
    return std::max(d.v1, d.v2);
}

double gap(const Hyperbolic& a, const Hyperbolic& b) { return std::max(std::fabs(a.v1 - b.v1), std::fabs(a.v2 - b.v2)); }

/// Residuals are compared with `threshold`; the first failing instance keeps
/// its job fragment.
class Tracker {
public:
    Tracker(std::string property, double threshold) {
        out_.property = std::move(property);
        out_.threshold = threshold;
    }

    void record(double residual, const std::function<std::string()>& fragment, std::string_view detail = {}) {
        ++out_.instances;
        if (std::isnan(residual)) residual = kInf;
        out_.worst = std::max(out_.worst, residual);
        if (residual < out_.threshold) return;
        if (out_.passed) {
            out_.passed = false;
            out_.counterexample = fragment();
            out_.detail = "instance " + std::to_string(out_.instances - 1) + ": residual " + format_real(residual);
            if (!detail.empty()) out_.detail += " (" + std::string(detail) + ")";
        }
    }

    PropertyOutcome finish() const { return out_; }

private:
    PropertyOutcome out_;
};

std::string job_fragment(std::initializer_list<std::string> tables, std::string_view tasks) {
    std::string out;
    for (const auto& t : tables) out += t + "\n";
    out += tasks;
    return out;
}

std::string task_toml(std::string_view type, std::string_view function, std::string_view path) {
    std::string out = "[[tasks]]\ntype = " + toml_string(type) + "\n";
    if (!function.empty()) out += "function = " + toml_string(function) + "\n";
    out += "path = " + toml_string(path) + "\n";
    return out;
}

struct Case {
    PolyPath path;
    PolyIntegrand f;
    DPath built;
    Integrand fn;
};

Case random_case(std::mt19937_64& rng, int path_degree = 2, int f_degree = 3) {
    auto p = random_poly_path(rng, path_degree);
    auto f = random_poly_integrand(rng, f_degree);
    auto built = p.build();
    auto fn = f.build();
    return {std::move(p), std::move(f), std::move(built), std::move(fn)};
}

std::string case_fragment(const Case& c, std::string_view type = "line-integral", bool with_primitive = false) {
    return job_fragment({c.path.to_toml("gamma"), c.f.to_toml("f", with_primitive)}, task_toml(type, "f", "gamma"));
}

/// A residual that is infinite unless every result converged.
double converged_or_inf(std::initializer_list<const IntegralResult*> results, double residual) {
    for (const auto* r : results) {
        if (!r->converged) return kInf;
    }
    return residual;
}

/// Polyline path with random samples; used by the variation suites.
struct PolylinePath {
    std::array<std::vector<double>, 2> params;
    std::array<std::vector<Complex>, 2> values;

    DPath build() const {
        return DPath(ComponentPath::polyline(params[0], values[0]), ComponentPath::polyline(params[1], values[1]));
    }

    std::string to_toml(std::string_view name) const {
        std::ostringstream out;
        out << "[paths." << name << "]\nkind = \"polyline\"\n";
        for (int k = 0; k < 2; ++k) {
            const auto& ps = params[static_cast<std::size_t>(k)];
            const auto& vs = values[static_cast<std::size_t>(k)];
            out << "params" << k + 1 << " = [";
            for (std::size_t m = 0; m < ps.size(); ++m) out << (m ? ", " : "") << format_real(ps[m]);
            out << "]\nvalues" << k + 1 << " = [";
            for (std::size_t m = 0; m < vs.size(); ++m) out << (m ? ", " : "") << toml_string(complex_literal(vs[m]));
            out << "]\n";
        }
        return out.str();
    }
};

PolylinePath random_polyline(std::mt19937_64& rng) {
    PolylinePath p;
    std::uniform_int_distribution<int> count(2, 9);
    for (int k = 0; k < 2; ++k) {
        const int n = count(rng);
        double x = uniform(rng, -1.0, 1.0);
        for (int m = 0; m < n; ++m) {
            p.params[static_cast<std::size_t>(k)].push_back(x);
            p.values[static_cast<std::size_t>(k)].emplace_back(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
            x += uniform(rng, 0.1, 0.6);
        }
    }
    return p;
}

/// Either a polynomial path or a polyline, alternating with the instance index.
struct AnyPath {
    std::optional<PolyPath> poly;
    std::optional<PolylinePath> line;
    DPath built;

    std::string to_toml(std::string_view name) const { return poly ? poly->to_toml(name) : line->to_toml(name); }
};

AnyPath random_any_path(std::mt19937_64& rng, int index) {
    if (index % 2 == 0) {
        auto p = random_poly_path(rng, 3);
        auto built = p.build();
        return {std::move(p), std::nullopt, std::move(built)};
    }
    auto l = random_polyline(rng);
    auto built = l.build();
    return {std::nullopt, std::move(l), std::move(built)};
}

/// Scalar variation of one component by its own dyadic chord sums.
double scalar_variation(const ComponentPath& g, double tol) {
    if (g.hi() <= g.lo()) return 0.0;
    std::vector<double> knots{g.lo()};
    for (double b : g.breakpoints()) knots.push_back(b);
    knots.push_back(g.hi());
    auto sum_at = [&](int level) {
        const std::size_t per = std::size_t{1} << level;
        auto x = [&](std::size_t m) {
            const std::size_t q = m / per;
            if (q + 1 >= knots.size()) return knots.back();
            return knots[q] + (knots[q + 1] - knots[q]) * (static_cast<double>(m % per) / static_cast<double>(per));
        };
        return detail::pairwise_sum<double>((knots.size() - 1) * per,
                                            [&](std::size_t m) { return std::abs(g(x(m + 1)) - g(x(m))); });
    };
    if (g.kind() == PathKind::Polyline) return sum_at(0);
    double prev = sum_at(0);
    for (int level = 1; level <= 22; ++level) {
        const double cur = sum_at(level);
        if (level >= 4 && std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return kInf;
}

// ---------------------------------------------------------------- suites

std::vector<PropertyOutcome> suite_algebra(std::mt19937_64& rng, int instances) {
    Tracker ring("ring-axioms", 1e-12);
    Tracker cart("cartesian-product", 1e-12);
    Tracker round("idempotent-round-trip", 4.0 * std::numeric_limits<double>::epsilon());
    Tracker units_law("unit-identities", 1e-300);
    Tracker mult("modulus-multiplicative", 1e-12);
    Tracker tri("modulus-triangle", 1e-12);

    auto& u = units_law;
    auto exact = [](const BiComplex& a, const BiComplex& b) { return a == b ? 0.0 : 1.0; };
    auto none = [] { return std::string("# unit identities need no instance\n"); };
    u.record(exact(units::e1 * units::e2, units::zero), none, "e1*e2 = 0");
    u.record(exact(units::j * units::j, units::one), none, "j^2 = 1");
    u.record(exact(units::i1 * units::i1, -units::one), none, "i1^2 = -1");
    u.record(exact(units::i2 * units::i2, -units::one), none, "i2^2 = -1");
    u.record(exact(units::e1 + units::e2, units::one), none, "e1 + e2 = 1");
    u.record(exact(units::e1 * units::e1, units::e1), none, "e1^2 = e1");
    u.record(exact(units::i1 * units::i2, units::j), none, "i1*i2 = j");

    const int triples = instances * 100;
    for (int n = 0; n < triples; ++n) {
        const double scale = std::pow(10.0, uniform(rng, -3.0, 3.0));
        const auto a = random_bicomplex(rng, scale);
        const auto b = random_bicomplex(rng, scale);
        const auto c = random_bicomplex(rng, scale);
        auto fragment = [&] {
            return "# a = " + format_cartesian(a) + "\n# b = " + format_cartesian(b) + "\n# c = " +
                   format_cartesian(c) + "\n";
        };
        const auto ma = d_modulus(a);
        const auto mb = d_modulus(b);
        const auto mc = d_modulus(c);
        const double s1 = std::max(ma.v1, ma.v2);
        const double s2 = std::max(mb.v1, mb.v2);
        const double s3 = std::max(mc.v1, mc.v2);
        const double sum_scale = std::max({s1, s2, s3, 1e-300});
        const double prod_scale = std::max(s1 * s2 * s3, 1e-300);
        const double pair_scale = std::max(s1 * std::max(s2, s3), 1e-300);
        double r = 0.0;
        r = std::max(r, gap((a + b) + c, a + (b + c)) / sum_scale);
        r = std::max(r, gap(a + b, b + a) / sum_scale);
        r = std::max(r, gap((a * b) * c, a * (b * c)) / prod_scale);
        r = std::max(r, gap(a * b, b * a) / std::max(s1 * s2, 1e-300));
        r = std::max(r, gap(a * (b + c), a * b + a * c) / pair_scale);
        r = std::max(r, gap(a * units::one, a) / sum_scale);
        r = std::max(r, gap(a + (-a), units::zero) / sum_scale);
        ring.record(r, fragment);

        const auto ca = to_cartesian(a);
        const auto cb = to_cartesian(b);
        const Cartesian want{ca.z1 * cb.z1 - ca.z2 * cb.z2, ca.z1 * cb.z2 + ca.z2 * cb.z1};
        const auto got = to_cartesian(a * b);
        const double cscale = std::max((std::abs(ca.z1) + std::abs(ca.z2)) * (std::abs(cb.z1) + std::abs(cb.z2)), 1e-300);
        cart.record(std::max(std::abs(got.z1 - want.z1), std::abs(got.z2 - want.z2)) / cscale, fragment);

        const auto back = bc_from_cartesian(ca.z1, ca.z2);
        round.record(gap(back, a) / std::max(s1, 1e-300), fragment);

        const auto mab = d_modulus(a * b);
        const auto prod = ma * mb;
        mult.record(gap(mab, prod) / std::max({prod.v1, prod.v2, 1e-300}), fragment);

        const auto msum = d_modulus(a + b);
        const auto bound = ma + mb;
        const double excess = std::max({0.0, msum.v1 - bound.v1, msum.v2 - bound.v2});
        tri.record(excess / std::max({bound.v1, bound.v2, 1e-300}), fragment);
    }
    return {ring.finish(), cart.finish(), round.finish(), u.finish(), mult.finish(), tri.finish()};
}

std::vector<PropertyOutcome> suite_orientation(std::mt19937_64& rng, int instances) {
    Tracker t("orientation", 1e-7);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto fwd = line_integral(c.fn, c.built);
        const auto rev = line_integral(c.fn, path_reverse(c.built));
        t.record(converged_or_inf({&fwd, &rev}, gap(fwd.value, -rev.value)), [&] { return case_fragment(c); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_ml_bound(std::mt19937_64& rng, int instances) {
    Tracker t("ml-inequality", 1e-7);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto r = line_integral(c.fn, c.built);
        const auto mod = d_modulus(r.value);
        const auto bound = ml_bound(c.fn, c.built);
        const double excess = std::max({0.0, mod.v1 - bound.v1, mod.v2 - bound.v2});
        t.record(converged_or_inf({&r}, excess), [&] { return case_fragment(c, "ml-bound"); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_linearity(std::mt19937_64& rng, int instances) {
    Tracker in_f("integrand-linearity", 1e-7);
    Tracker in_gamma("integrator-linearity", 1e-7);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto g = random_poly_integrand(rng);
        const auto a = random_bicomplex(rng);
        const auto b = random_bicomplex(rng);
        auto fragment = [&] {
            return "# a = " + format_cartesian(a) + "\n# b = " + format_cartesian(b) + "\n" +
                   job_fragment({c.path.to_toml("gamma"), c.f.to_toml("f"), g.to_toml("g")},
                                task_toml("line-integral", "f", "gamma") + task_toml("line-integral", "g", "gamma"));
        };
        const auto gfn = g.build();
        const auto If = line_integral(c.fn, c.built);
        const auto Ig = line_integral(gfn, c.built);
        const auto Icomb = line_integral(Integrand::combine(a, c.fn, b, gfn), c.built);
        in_f.record(converged_or_inf({&If, &Ig, &Icomb}, gap(Icomb.value, a * If.value + b * Ig.value)), fragment);

        PolyPath mate = random_poly_path(rng);
        mate.lo = c.path.lo;
        mate.hi = c.path.hi;
        const auto lambda = mate.build();
        const auto Rg = rs_integral(c.fn, c.built);
        const auto Rl = rs_integral(c.fn, lambda);
        const auto Rc = rs_integral(c.fn, path_combine(a, c.built, b, lambda));
        in_gamma.record(converged_or_inf({&Rg, &Rl, &Rc}, gap(Rc.value, a * Rg.value + b * Rl.value)), [&] {
            return fragment() + "\n" + mate.to_toml("lambda");
        });
    }
    return {in_f.finish(), in_gamma.finish()};
}

std::vector<PropertyOutcome> suite_additivity(std::mt19937_64& rng, int instances) {
    Tracker t("additivity", 1e-7);
    std::uniform_int_distribution<int> cuts(1, 3);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto& iv = c.built.interval();
        std::vector<double> f1;
        std::vector<double> f2;
        const int m = cuts(rng);
        for (int k = 0; k < m; ++k) {
            f1.push_back(uniform(rng, 0.05, 0.95));
            f2.push_back(uniform(rng, 0.05, 0.95));
        }
        std::sort(f1.begin(), f1.end());
        std::sort(f2.begin(), f2.end());
        std::vector<Hyperbolic> chain{iv.lo()};
        for (int k = 0; k < m; ++k) {
            chain.emplace_back(iv.lo().v1 + f1[static_cast<std::size_t>(k)] * iv.length().v1,
                               iv.lo().v2 + f2[static_cast<std::size_t>(k)] * iv.length().v2);
        }
        chain.push_back(iv.hi());
        const auto whole = line_integral(c.fn, c.built);
        BiComplex parts;
        bool ok = whole.converged;
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            const auto piece = line_integral(c.fn, path_restrict(c.built, DInterval::make(chain[k], chain[k + 1])));
            ok = ok && piece.converged;
            parts = parts + piece.value;
        }
        t.record(ok ? gap(parts, whole.value) : kInf, [&] { return case_fragment(c); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_translation(std::mt19937_64& rng, int instances) {
    Tracker t("translation", 1e-7);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto shift = random_bicomplex(rng, 2.0);
        const auto base = line_integral(c.fn, c.built);
        const auto moved = line_integral(c.fn.shifted(shift), path_translate(c.built, shift));
        t.record(converged_or_inf({&base, &moved}, gap(base.value, moved.value)),
                 [&] { return "# c = " + format_cartesian(shift) + "\n" + case_fragment(c); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_reparametrization(std::mt19937_64& rng, int instances) {
    const IntegrationConfig cfg;
    Tracker value("reparametrization-invariance", 2.0 * cfg.tol.v1);
    Tracker var("reparametrization-variation", 1e-8);
    std::uniform_int_distribution<int> shape(0, 2);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto& iv = c.built.interval();
        std::array<RealToReal, 2> maps;
        std::array<RealToReal, 2> derivs;
        std::array<std::string, 2> text;
        std::array<double, 2> lam{};
        std::array<double, 2> mu{};
        for (int k = 0; k < 2; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            lam[kk] = uniform(rng, -1.0, 1.0);
            mu[kk] = lam[kk] + uniform(rng, 0.5, 2.0);
            const auto [alpha, beta] = iv.component(k);
            const double l = lam[kk];
            const double w = mu[kk] - l;
            const int s = shape(rng);
            const double p = uniform(rng, 1.5, 3.0);
            const double q = uniform(rng, 0.5, 2.0);
            std::function<double(double)> phi;
            std::function<double(double)> dphi;
            if (s == 0) {
                phi = [p](double u) { return std::pow(u, p); };
                dphi = [p](double u) { return p * std::pow(u, p - 1.0); };
                text[kk] = "u^" + format_real(p);
            } else if (s == 1) {
                phi = [q](double u) { return std::expm1(q * u) / std::expm1(q); };
                dphi = [q](double u) { return q * std::exp(q * u) / std::expm1(q); };
                text[kk] = "expm1(" + format_real(q) + "*u)/expm1(" + format_real(q) + ")";
            } else {
                phi = [](double u) { return u - std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi); };
                dphi = [](double u) { return 1.0 - std::cos(2.0 * std::numbers::pi * u); };
                text[kk] = "u - sin(2 pi u)/(2 pi)";
            }
            maps[kk] = [=](double x) {
                const double u = std::clamp((x - l) / w, 0.0, 1.0);
                return u >= 1.0 ? beta : alpha + (beta - alpha) * phi(u);
            };
            derivs[kk] = [=](double x) { return (beta - alpha) * dphi(std::clamp((x - l) / w, 0.0, 1.0)) / w; };
        }
        const MonotoneMap phi{maps[0], maps[1], DInterval::make({lam[0], lam[1]}, {mu[0], mu[1]}), derivs[0],
                              derivs[1]};
        auto fragment = [&] {
            return "# Phi_k(x) = alpha_k + (beta_k - alpha_k) * phi_k((x - lambda_k)/(mu_k - lambda_k))\n# phi_1(u) = " +
                   text[0] + " on [" + format_real(lam[0]) + ", " + format_real(mu[0]) + "]\n# phi_2(u) = " + text[1] +
                   " on [" + format_real(lam[1]) + ", " + format_real(mu[1]) + "]\n" + case_fragment(c);
        };
        const auto moved = reparametrize(c.built, phi);
        const auto a = line_integral(c.fn, c.built, cfg);
        const auto b = line_integral(c.fn, moved, cfg);
        value.record(converged_or_inf({&a, &b}, gap(a.value, b.value)), fragment);

        const auto va = total_variation(c.built);
        const auto vb = total_variation(moved);
        const double excess = std::max({0.0, vb.total.v1 - va.total.v1, vb.total.v2 - va.total.v2});
        var.record(va.converged && vb.converged ? excess : kInf, fragment);
    }
    return {value.finish(), var.finish()};
}

std::vector<PropertyOutcome> suite_ftc(std::mt19937_64& rng, int instances) {
    Tracker t("ftc-residual", 1e-6);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng, 2, 4);
        const auto F = c.f.primitive().build();
        const auto r = line_integral(c.fn, c.built);
        const auto want = ftc_eval(F, c.built, c.fn);
        t.record(converged_or_inf({&r}, gap(r.value, want)), [&] { return case_fragment(c, "ftc-check", true); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_closed_curve(std::mt19937_64& rng, int instances) {
    Tracker t("closed-curve-vanishes", 1e-6);
    Tracker w("reciprocal-witness", 1e-6);
    std::uniform_int_distribution<int> turns(1, 2);
    for (int n = 0; n < instances; ++n) {
        const auto center = random_bicomplex(rng);
        const double radius = uniform(rng, 0.5, 1.5);
        const int k = turns(rng);
        const auto circle = DPath::bicircle(center, radius, k);
        const auto f = random_poly_integrand(rng, 5);
        auto circle_toml = [&] {
            return "[paths.loop]\nkind = \"bicircle\"\ncenter = " + toml_string(format_cartesian(center)) +
                   "\nradius = " + format_real(radius) + "\nturns = " + std::to_string(k) + "\n";
        };
        const auto r = line_integral(f.build(), circle);
        t.record(converged_or_inf({&r}, is_closed(circle) ? gap(r.value, BiComplex(0.0)) : kInf), [&] {
            return job_fragment({circle_toml(), f.to_toml("f")}, task_toml("line-integral", "f", "loop"));
        });

        // 1/(z - center) has no primitive around the center: k * 2*pi*i1.
        const Integrand recip([c = center.w1](Complex z) { return 1.0 / (z - c); },
                              [c = center.w2](Complex z) { return 1.0 / (z - c); });
        const auto wr = line_integral(recip, circle);
        const BiComplex want = static_cast<double>(k) * 2.0 * std::numbers::pi * units::i1;
        w.record(converged_or_inf({&wr}, gap(wr.value, want)), [&] {
            return job_fragment({circle_toml(), "[functions.recip]\nf = " +
                                                    toml_string("1/(z - (" + format_cartesian(center) + "))") + "\n"},
                                task_toml("line-integral", "recip", "loop"));
        });
    }
    return {t.finish(), w.finish()};
}

std::vector<PropertyOutcome> suite_tag_independence(std::mt19937_64& rng, int instances) {
    IntegrationConfig cfg;
    cfg.tol = {1e-6, 1e-6};
    Tracker tags("tags-agree", 3.0 * cfg.tol.v1);
    Tracker oracle("componentwise-oracle", 2.0 * cfg.tol.v1);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng, 2, 2);
        auto fragment = [&] {
            return "[config]\ntol = " + format_real(cfg.tol.v1) + "\n\n" + case_fragment(c, "integrate");
        };
        std::array<IntegralResult, 3> r;
        int m = 0;
        for (Tag tag : {Tag::Left, Tag::Midpoint, Tag::Right}) {
            auto local = cfg;
            local.tag = tag;
            r[static_cast<std::size_t>(m++)] = rs_integral(c.fn, c.built, local);
        }
        const double spread = std::max({gap(r[0].value, r[1].value), gap(r[1].value, r[2].value),
                                        gap(r[0].value, r[2].value)});
        tags.record(converged_or_inf({&r[0], &r[1], &r[2]}, spread), fragment);

        const auto comp = rs_integral_componentwise(c.fn, c.built, cfg);
        double worst = 0.0;
        for (const auto& x : r) worst = std::max(worst, gap(x.value, comp.value));
        oracle.record(converged_or_inf({&comp, &r[0], &r[1], &r[2]}, worst), fragment);
    }
    return {tags.finish(), oracle.finish()};
}

std::vector<PropertyOutcome> suite_smooth_reduction(std::mt19937_64& rng, int instances) {
    const IntegrationConfig cfg;
    const QuadratureOptions quad;
    Tracker t("smooth-reduction", 2.0 * cfg.tol.v1);
    for (int n = 0; n < instances; ++n) {
        const auto c = random_case(rng);
        const auto rs = line_integral(c.fn, c.built, cfg);
        const auto smooth = line_integral_smooth(c.fn, c.built, quad);
        t.record(converged_or_inf({&rs}, gap(rs.value, smooth.value)), [&] { return case_fragment(c); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_variation_decomposition(std::mt19937_64& rng, int instances) {
    Tracker t("variation-decomposition", 1e-8);
    for (int n = 0; n < instances; ++n) {
        const auto p = random_any_path(rng, n);
        const auto v = total_variation(p.built);
        const Hyperbolic want{scalar_variation(p.built.component(0), 1e-11),
                              scalar_variation(p.built.component(1), 1e-11)};
        t.record(v.converged ? gap(v.total, want) : kInf,
                 [&] { return job_fragment({p.to_toml("gamma")}, task_toml("variation", "", "gamma")); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_smooth_length(std::mt19937_64& rng, int instances) {
    Tracker t("smooth-length", 1e-6);
    for (int n = 0; n < instances; ++n) {
        const auto p = random_any_path(rng, n);
        const auto v = total_variation(p.built);
        const auto l = path_length_smooth(p.built);
        t.record(v.converged ? gap(v.total, l) : kInf,
                 [&] { return job_fragment({p.to_toml("gamma")}, task_toml("length", "", "gamma")); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_refinement(std::mt19937_64& rng, int instances) {
    Tracker t("refinement-monotonicity", 1e-12);
    std::uniform_int_distribution<int> count(1, 6);
    for (int n = 0; n < instances; ++n) {
        const auto p = random_any_path(rng, n);
        const auto& iv = p.built.interval();
        // Random chain P, then Q = P plus a point inside some of its steps.
        const int m = count(rng);
        std::vector<double> u1;
        std::vector<double> u2;
        for (int k = 0; k < m; ++k) {
            u1.push_back(uniform(rng, 0.0, 1.0));
            u2.push_back(uniform(rng, 0.0, 1.0));
        }
        std::sort(u1.begin(), u1.end());
        std::sort(u2.begin(), u2.end());
        std::vector<Hyperbolic> coarse{iv.lo()};
        for (int k = 0; k < m; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            coarse.emplace_back(iv.lo().v1 + u1[kk] * iv.length().v1, iv.lo().v2 + u2[kk] * iv.length().v2);
        }
        coarse.push_back(iv.hi());
        std::vector<Hyperbolic> fine{coarse.front()};
        for (std::size_t k = 1; k < coarse.size(); ++k) {
            if (uniform(rng, 0.0, 1.0) < 0.7) {
                const double w1 = uniform(rng, 0.0, 1.0);
                const double w2 = uniform(rng, 0.0, 1.0);
                const auto& a = coarse[k - 1];
                const auto& b = coarse[k];
                fine.emplace_back(a.v1 + w1 * (b.v1 - a.v1), a.v2 + w2 * (b.v2 - a.v2));
            }
            fine.push_back(coarse[k]);
        }
        const auto vp = variation_sum(p.built, coarse);
        const auto vq = variation_sum(p.built, fine);
        const double drop = std::max({0.0, vp.v1 - vq.v1, vp.v2 - vq.v2});
        t.record(drop, [&] { return job_fragment({p.to_toml("gamma")}, task_toml("variation", "", "gamma")); });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_subadditivity(std::mt19937_64& rng, int instances) {
    Tracker t("subadditivity", 1e-8);
    for (int n = 0; n < instances; ++n) {
        const auto g = random_poly_path(rng, 3);
        auto l = random_poly_path(rng, 3);
        l.lo = g.lo;
        l.hi = g.hi;
        const auto a = random_bicomplex(rng, 2.0);
        const auto b = random_bicomplex(rng, 2.0);
        const auto gb = g.build();
        const auto lb = l.build();
        const auto vc = total_variation(path_combine(a, gb, b, lb));
        const auto vg = total_variation(gb);
        const auto vl = total_variation(lb);
        const auto bound = d_modulus(a) * vg.total + d_modulus(b) * vl.total;
        const double excess = std::max({0.0, vc.total.v1 - bound.v1, vc.total.v2 - bound.v2});
        t.record(vc.converged && vg.converged && vl.converged ? excess : kInf, [&] {
            return "# a = " + format_cartesian(a) + "\n# b = " + format_cartesian(b) + "\n" +
                   job_fragment({g.to_toml("gamma"), l.to_toml("lambda")},
                                task_toml("variation", "", "gamma") + task_toml("variation", "", "lambda"));
        });
    }
    return {t.finish()};
}

std::vector<PropertyOutcome> suite_arc_length(std::mt19937_64& rng, int instances) {
    Tracker end("arc-length-endpoint", 1e-8);
    Tracker mono("arc-length-monotone", 1e-12);
    for (int n = 0; n < instances; ++n) {
        const auto p = random_any_path(rng, n);
        const auto& iv = p.built.interval();
        auto fragment = [&] { return job_fragment({p.to_toml("gamma")}, task_toml("variation", "", "gamma")); };
        const auto v = total_variation(p.built);
        end.record(v.converged ? gap(arc_length_function(p.built, iv.hi()), v.total) : kInf, fragment);

        Hyperbolic prev;
        double drop = 0.0;
        for (double w : {0.2, 0.45, 0.7, 0.9}) {
            const auto cur = arc_length_function(p.built, iv.lo() + iv.length() * w);
            drop = std::max({drop, prev.v1 - cur.v1, prev.v2 - cur.v2});
            prev = cur;
        }
        mono.record(drop, fragment);
    }
    return {end.finish(), mono.finish()};
}

std::vector<PropertyOutcome> suite_trace(std::mt19937_64& rng, int instances) {
    Tracker t("trace-decomposition", 1e-300);
    for (int n = 0; n < instances; ++n) {
        const auto p = random_any_path(rng, n);
        double worst = 0.0;
        for (const auto& pt : sample_trace(p.built, 65)) {
            const BiComplex want = units::e1 * BiComplex(p.built.component(0)(pt.tau.v1)) +
                                   units::e2 * BiComplex(p.built.component(1)(pt.tau.v2));
            worst = std::max(worst, gap(pt.value, want));
        }
        t.record(worst, [&] { return job_fragment({p.to_toml("gamma")}, task_toml("variation", "", "gamma")); });
    }
    return {t.finish()};
}

using SuiteFn = std::vector<PropertyOutcome> (*)(std::mt19937_64&, int);

struct SuiteEntry {
    std::string_view name;
    SuiteFn run;
    int instances;
};

constexpr SuiteEntry kSuites[] = {
    {"algebra", suite_algebra, 100},
    {"orientation", suite_orientation, 100},
    {"ml-bound", suite_ml_bound, 100},
    {"linearity", suite_linearity, 100},
    {"additivity", suite_additivity, 100},
    {"translation", suite_translation, 100},
    {"reparametrization", suite_reparametrization, 100},
    {"ftc", suite_ftc, 100},
    {"closed-curve", suite_closed_curve, 20},
    {"tag-independence", suite_tag_independence, 50},
    {"smooth-reduction", suite_smooth_reduction, 100},
    {"variation-decomposition", suite_variation_decomposition, 100},
    {"smooth-length", suite_smooth_length, 50},
    {"refinement-monotonicity", suite_refinement, 100},
    {"subadditivity", suite_subadditivity, 50},
    {"arc-length", suite_arc_length, 50},
    {"trace", suite_trace, 100},
};

constexpr auto kNames = [] {
    std::array<std::string_view, std::size(kSuites)> out{};
    for (std::size_t k = 0; k < std::size(kSuites); ++k) out[k] = kSuites[k].name;
    return out;
}();

const SuiteEntry& find_suite(std::string_view name) {
    for (const auto& s : kSuites) {
        if (s.name == name) return s;
    }
    std::string known;
    for (const auto& s : kSuites) known += (known.empty() ? "" : ", ") + std::string(s.name);
    throw Error(Errc::UnknownSuite, "unknown suite '" + std::string(name) + "' (known: " + known + ")");
}

} // namespace

Complex Polynomial::operator()(Complex x) const noexcept {
    Complex acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex Polynomial::derivative(Complex x) const noexcept {
    Complex acc;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs[k];
    return acc;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial out{{Complex{}}};
    for (std::size_t k = 0; k < coeffs.size(); ++k) out.coeffs.push_back(coeffs[k] / static_cast<double>(k + 1));
    return out;
}

std::string Polynomial::to_expression(std::string_view variable) const {
    std::string out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (!out.empty()) out += " + ";
        out += complex_literal(coeffs[k]);
        if (k >= 1) out += "*" + std::string(variable);
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

Polynomial random_polynomial(std::mt19937_64& rng, int min_degree, int max_degree, double scale) {
    const int degree = std::uniform_int_distribution<int>(min_degree, max_degree)(rng);
    Polynomial p;
    for (int k = 0; k <= degree; ++k) p.coeffs.emplace_back(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
    return p;
}

DPath PolyPath::build() const {
    auto part = [&](int k) {
        const auto& g = gamma[static_cast<std::size_t>(k)];
        return ComponentPath::callback(
            lo[static_cast<std::size_t>(k)], hi[static_cast<std::size_t>(k)], [g](double x) { return g(x); },
            [g](double x) { return g.derivative(x); });
    };
    return DPath(part(0), part(1));
}

std::string PolyPath::to_toml(std::string_view name) const {
    std::ostringstream out;
    out << "[paths." << name << "]\nkind = \"expr\"\n"
        << "gamma1 = " << toml_string(gamma[0].to_expression("t")) << "\n"
        << "gamma2 = " << toml_string(gamma[1].to_expression("s")) << "\n"
        << "domain1 = [" << format_real(lo[0]) << ", " << format_real(hi[0]) << "]\n"
        << "domain2 = [" << format_real(lo[1]) << ", " << format_real(hi[1]) << "]\n";
    return out.str();
}

PolyPath random_poly_path(std::mt19937_64& rng, int max_degree) {
    PolyPath p;
    for (int k = 0; k < 2; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        p.lo[kk] = uniform(rng, -0.5, 0.5);
        p.hi[kk] = p.lo[kk] + uniform(rng, 0.5, 1.5);
        p.gamma[kk] = random_polynomial(rng, 1, max_degree);
    }
    return p;
}

Integrand PolyIntegrand::build() const {
    return Integrand([p = f[0]](Complex w) { return p(w); }, [p = f[1]](Complex w) { return p(w); });
}

PolyIntegrand PolyIntegrand::primitive() const { return {{f[0].antiderivative(), f[1].antiderivative()}}; }

std::string PolyIntegrand::to_toml(std::string_view name, bool with_primitive) const {
    std::string out = "[functions." + std::string(name) + "]\n";
    out += "f1 = " + toml_string(f[0].to_expression("z")) + "\n";
    out += "f2 = " + toml_string(f[1].to_expression("z")) + "\n";
    if (with_primitive) {
        const auto F = primitive();
        out += "F1 = " + toml_string(F.f[0].to_expression("z")) + "\n";
        out += "F2 = " + toml_string(F.f[1].to_expression("z")) + "\n";
    }
    return out;
}

PolyIntegrand random_poly_integrand(std::mt19937_64& rng, int max_degree) {
    return {{random_polynomial(rng, 0, max_degree), random_polynomial(rng, 0, max_degree)}};
}

BiComplex random_bicomplex(std::mt19937_64& rng, double scale) {
    return {{uniform(rng, -scale, scale), uniform(rng, -scale, scale)},
            {uniform(rng, -scale, scale), uniform(rng, -scale, scale)}};
}

bool SuiteReport::passed() const noexcept {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.passed; });
}

std::span<const std::string_view> suite_names() noexcept { return kNames; }

int default_instances(std::string_view suite) { return find_suite(suite).instances; }

SuiteReport run_suite(std::string_view suite, std::uint64_t seed, int instances) {
    const auto& entry = find_suite(suite);
    if (instances < 0) throw Error(Errc::InvalidArgument, "instance count must be non-negative");
    std::mt19937_64 rng(seed);
    SuiteReport report;
    report.suite = std::string(entry.name);
    report.seed = seed;
    report.outcomes = entry.run(rng, instances == 0 ? entry.instances : instances);
    return report;
}

std::string format_report(const SuiteReport& report) {
    std::string out;
    for (const auto& o : report.outcomes) {
        out += o.passed ? "PASS " : "FAIL ";
        out += o.property + " (" + std::to_string(o.instances) + " instances, worst " + format_real(o.worst) +
               " / " + format_real(o.threshold) + ")\n";
        if (!o.passed) {
            out += "  " + o.detail + "\n";
            if (o.counterexample) {
                std::istringstream lines(*o.counterexample);
                for (std::string line; std::getline(lines, line);) out += "  | " + line + "\n";
            }
        }
    }
    return out;
}

} // namespace hypercurve::props
