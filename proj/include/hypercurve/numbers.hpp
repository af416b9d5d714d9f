#pragma once

/**
 * @file numbers.hpp
 * @brief Bicomplex and hyperbolic scalars stored in idempotent coordinates.
 *
 * A bicomplex number z1 + i2*z2 (z1, z2 over i1) is kept as the pair
 *   w1 = z1 - i1*z2,   w2 = z1 + i1*z2
 * so that zeta = w1*e1 + w2*e2 with e1 = (1+j)/2 and e2 = (1-j)/2. In these
 * coordinates addition, multiplication and every product-type function act
 * componentwise. The cartesian pair (z1, z2) is only a view.
 *
 * Hyperbolic numbers x + j*y are the subring with real idempotent
 * coefficients v1 = x + y, v2 = x - y. The cone D+ = {v1 >= 0, v2 >= 0}
 * induces the partial order used for moduli, lengths and variations.
 */

#include <complex>
#include <span>
#include <string>

namespace hypercurve {

using Complex = std::complex<double>;

/// Absolute tolerance for zero, degeneracy and order tests.
struct Tolerance {
    double eps = 1e-12;
};

struct Cartesian {
    Complex z1;
    Complex z2;
};

struct Hyperbolic;

struct BiComplex {
    Complex w1;
    Complex w2;

    constexpr BiComplex() = default;
    constexpr BiComplex(Complex a, Complex b) : w1(a), w2(b) {}
    /// Embeds a complex number of C(i1) as w1 = w2 = c.
    constexpr BiComplex(Complex c) : w1(c), w2(c) {}
    constexpr BiComplex(double x) : w1(x), w2(x) {}

    constexpr BiComplex& operator+=(const BiComplex& o) { w1 += o.w1; w2 += o.w2; return *this; }
    constexpr BiComplex& operator-=(const BiComplex& o) { w1 -= o.w1; w2 -= o.w2; return *this; }
    constexpr BiComplex& operator*=(const BiComplex& o) { w1 *= o.w1; w2 *= o.w2; return *this; }

    friend constexpr BiComplex operator+(BiComplex a, const BiComplex& b) { return a += b; }
    friend constexpr BiComplex operator-(BiComplex a, const BiComplex& b) { return a -= b; }
    friend constexpr BiComplex operator*(BiComplex a, const BiComplex& b) { return a *= b; }
    friend constexpr BiComplex operator-(const BiComplex& a) { return {-a.w1, -a.w2}; }
    friend constexpr bool operator==(const BiComplex&, const BiComplex&) = default;

    Complex component(int k) const { return k == 0 ? w1 : w2; }
};

struct Hyperbolic {
    double v1 = 0.0;
    double v2 = 0.0;

    constexpr Hyperbolic() = default;
    constexpr Hyperbolic(double a, double b) : v1(a), v2(b) {}
    /// Real scalar r = r*e1 + r*e2.
    constexpr explicit Hyperbolic(double r) : v1(r), v2(r) {}

    constexpr Hyperbolic& operator+=(const Hyperbolic& o) { v1 += o.v1; v2 += o.v2; return *this; }
    constexpr Hyperbolic& operator-=(const Hyperbolic& o) { v1 -= o.v1; v2 -= o.v2; return *this; }
    constexpr Hyperbolic& operator*=(const Hyperbolic& o) { v1 *= o.v1; v2 *= o.v2; return *this; }
    constexpr Hyperbolic& operator*=(double s) { v1 *= s; v2 *= s; return *this; }

    friend constexpr Hyperbolic operator+(Hyperbolic a, const Hyperbolic& b) { return a += b; }
    friend constexpr Hyperbolic operator-(Hyperbolic a, const Hyperbolic& b) { return a -= b; }
    friend constexpr Hyperbolic operator*(Hyperbolic a, const Hyperbolic& b) { return a *= b; }
    friend constexpr Hyperbolic operator*(Hyperbolic a, double s) { return a *= s; }
    friend constexpr Hyperbolic operator*(double s, Hyperbolic a) { return a *= s; }
    friend constexpr Hyperbolic operator-(const Hyperbolic& a) { return {-a.v1, -a.v2}; }
    friend constexpr bool operator==(const Hyperbolic&, const Hyperbolic&) = default;

    constexpr double component(int k) const { return k == 0 ? v1 : v2; }
    constexpr BiComplex to_bicomplex() const { return {Complex(v1), Complex(v2)}; }
};

namespace units {
inline constexpr BiComplex one{Complex(1.0), Complex(1.0)};
inline constexpr BiComplex zero{Complex(0.0), Complex(0.0)};
inline constexpr BiComplex e1{Complex(1.0), Complex(0.0)};
inline constexpr BiComplex e2{Complex(0.0), Complex(1.0)};
inline constexpr BiComplex j{Complex(1.0), Complex(-1.0)};
inline constexpr BiComplex i1{Complex(0.0, 1.0), Complex(0.0, 1.0)};
inline constexpr BiComplex i2{Complex(0.0, -1.0), Complex(0.0, 1.0)};
} // namespace units

/// (z1, z2) -> (z1 - i1*z2, z1 + i1*z2). Throws Errc::NonFinite on NaN/inf input.
BiComplex bc_from_cartesian(Complex z1, Complex z2);
Cartesian to_cartesian(const BiComplex& a);

bool is_finite(const BiComplex& a) noexcept;
bool is_finite(const Hyperbolic& a) noexcept;

/// Hyperbolic-valued modulus |w1|e1 + |w2|e2; always in D+.
Hyperbolic d_modulus(const BiComplex& a) noexcept;
Hyperbolic d_modulus(const Hyperbolic& a) noexcept;

enum class DOrdering { Less, Equal, Greater, Incomparable };

/// Compares a with b under the D+ partial order; Less means a <=_D b, a != b.
DOrdering try_cmp_d(const Hyperbolic& a, const Hyperbolic& b, Tolerance tol = {}) noexcept;

/// a <=_D b within tolerance (Less or Equal).
bool d_leq(const Hyperbolic& a, const Hyperbolic& b, Tolerance tol = {}) noexcept;
bool in_d_plus(const Hyperbolic& a, Tolerance tol = {}) noexcept;

/// Componentwise maximum of a finite nonempty set. Throws Errc::EmptySet.
Hyperbolic sup_d(std::span<const Hyperbolic> set);
/// Componentwise minimum of a finite nonempty set. Throws Errc::EmptySet.
Hyperbolic inf_d(std::span<const Hyperbolic> set);

enum class NumberClass { Zero, ZeroDivisor, Unit };

NumberClass classify(const BiComplex& a, Tolerance tol = {}) noexcept;
inline NumberClass classify(const Hyperbolic& a, Tolerance tol = {}) noexcept {
    return classify(a.to_bicomplex(), tol);
}

/// Componentwise reciprocal. Throws Errc::NonInvertible for a in O0.
BiComplex inverse(const BiComplex& a, Tolerance tol = {});
BiComplex divide(const BiComplex& num, const BiComplex& den, Tolerance tol = {});

/// Shortest decimal text that reads back to the same double; "-0" prints as "0".
std::string format_real(double x);
/// "a+b*i1 + (c+d*i1)*i2" with z1 = a + b*i1, z2 = c + d*i1.
std::string format_cartesian(const BiComplex& a);
/// "[a+b*i1 | c+d*i1]" listing w1 and w2.
std::string format_idempotent(const BiComplex& a);
std::string format_hyperbolic(const Hyperbolic& a);

} // namespace hypercurve
