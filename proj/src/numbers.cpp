#include "hypercurve/numbers.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "hypercurve/error.hpp"

namespace hypercurve {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::NonInvertible: return "NonInvertible";
    case Errc::EmptySet: return "EmptySet";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotComparable: return "NotComparable";
    case Errc::Reversed: return "Reversed";
    case Errc::StepDegenerate: return "StepDegenerate";
    case Errc::NotChain: return "NotChain";
    case Errc::EndpointMismatch: return "EndpointMismatch";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NotDifferentiable: return "NotDifferentiable";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::NotMonotone: return "NotMonotone";
    case Errc::PrimitiveMismatch: return "PrimitiveMismatch";
    case Errc::Parse: return "ParseError";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::NonInvertibleDivisor: return "NonInvertibleDivisor";
    case Errc::UnknownSuite: return "UnknownSuite";
    case Errc::Schema: return "SchemaError";
    }
    return "Unknown";
}

namespace {

constexpr Complex kI1{0.0, 1.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string format_complex(Complex z) {
    std::string out = format_real(z.real());
    const double im = z.imag();
    if (std::signbit(im) && im != 0.0) {
        out += '-';
        out += format_real(-im);
    } else {
        out += '+';
        out += format_real(im);
    }
    out += "*i1";
    return out;
}

} // namespace

BiComplex bc_from_cartesian(Complex z1, Complex z2) {
    if (!finite(z1) || !finite(z2)) {
        throw Error(Errc::NonFinite, "cartesian components must be finite");
    }
    return {z1 - kI1 * z2, z1 + kI1 * z2};
}

Cartesian to_cartesian(const BiComplex& a) {
    return {(a.w1 + a.w2) * 0.5, kI1 * (a.w1 - a.w2) * 0.5};
}

bool is_finite(const BiComplex& a) noexcept { return finite(a.w1) && finite(a.w2); }
bool is_finite(const Hyperbolic& a) noexcept { return std::isfinite(a.v1) && std::isfinite(a.v2); }

Hyperbolic d_modulus(const BiComplex& a) noexcept { return {std::abs(a.w1), std::abs(a.w2)}; }
Hyperbolic d_modulus(const Hyperbolic& a) noexcept { return {std::fabs(a.v1), std::fabs(a.v2)}; }

DOrdering try_cmp_d(const Hyperbolic& a, const Hyperbolic& b, Tolerance tol) noexcept {
    const double d1 = b.v1 - a.v1;
    const double d2 = b.v2 - a.v2;
    if (std::fabs(d1) <= tol.eps && std::fabs(d2) <= tol.eps) return DOrdering::Equal;
    if (d1 >= -tol.eps && d2 >= -tol.eps) return DOrdering::Less;
    if (d1 <= tol.eps && d2 <= tol.eps) return DOrdering::Greater;
    return DOrdering::Incomparable;
}

bool d_leq(const Hyperbolic& a, const Hyperbolic& b, Tolerance tol) noexcept {
    const auto ord = try_cmp_d(a, b, tol);
    return ord == DOrdering::Less || ord == DOrdering::Equal;
}

bool in_d_plus(const Hyperbolic& a, Tolerance tol) noexcept { return d_leq(Hyperbolic{}, a, tol); }

Hyperbolic sup_d(std::span<const Hyperbolic> set) {
    if (set.empty()) throw Error(Errc::EmptySet, "sup_d of an empty set");
    Hyperbolic out = set.front();
    for (const auto& h : set) {
        out.v1 = std::max(out.v1, h.v1);
        out.v2 = std::max(out.v2, h.v2);
    }
    return out;
}

Hyperbolic inf_d(std::span<const Hyperbolic> set) {
    if (set.empty()) throw Error(Errc::EmptySet, "inf_d of an empty set");
    Hyperbolic out = set.front();
    for (const auto& h : set) {
        out.v1 = std::min(out.v1, h.v1);
        out.v2 = std::min(out.v2, h.v2);
    }
    return out;
}

NumberClass classify(const BiComplex& a, Tolerance tol) noexcept {
    const bool zero1 = std::abs(a.w1) <= tol.eps;
    const bool zero2 = std::abs(a.w2) <= tol.eps;
    if (zero1 && zero2) return NumberClass::Zero;
    if (zero1 || zero2) return NumberClass::ZeroDivisor;
    return NumberClass::Unit;
}

BiComplex inverse(const BiComplex& a, Tolerance tol) {
    if (classify(a, tol) != NumberClass::Unit) {
        throw Error(Errc::NonInvertible, format_idempotent(a) + " is a zero divisor");
    }
    return {1.0 / a.w1, 1.0 / a.w2};
}

BiComplex divide(const BiComplex& num, const BiComplex& den, Tolerance tol) {
    if (classify(den, tol) != NumberClass::Unit) {
        throw Error(Errc::NonInvertible, "division by zero divisor " + format_idempotent(den));
    }
    return {num.w1 / den.w1, num.w2 / den.w2};
}

std::string format_real(double x) {
    if (x == 0.0) return "0";
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string format_cartesian(const BiComplex& a) {
    const auto c = to_cartesian(a);
    return format_complex(c.z1) + " + (" + format_complex(c.z2) + ")*i2";
}

std::string format_idempotent(const BiComplex& a) {
    return "[" + format_complex(a.w1) + " | " + format_complex(a.w2) + "]";
}

std::string format_hyperbolic(const Hyperbolic& a) {
    return format_real(a.v1) + "*e1 + " + format_real(a.v2) + "*e2";
}

} // namespace hypercurve
