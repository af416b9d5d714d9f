#pragma once

#include <array>
#include <span>
#include <vector>

#include "hypercurve/numbers.hpp"

namespace hypercurve {

/// Closed hyperbolic interval [lo, hi]_D = {tau : lo <=_D tau <=_D hi}.
class DInterval {
public:
    /// Throws Errc::NotComparable when hi - lo is outside D+ and -D+,
    /// Errc::Reversed when hi <=_D lo strictly.
    static DInterval make(const Hyperbolic& lo, const Hyperbolic& hi, Tolerance tol = {});

    const Hyperbolic& lo() const noexcept { return lo_; }
    const Hyperbolic& hi() const noexcept { return hi_; }

    Hyperbolic length() const noexcept { return hi_ - lo_; }
    /// True when the length lies in O0, i.e. some component has (near) zero width.
    bool is_degenerate(Tolerance tol = {}) const noexcept;
    bool contains(const Hyperbolic& tau, Tolerance tol = {}) const noexcept;

    /// Real interval [lo_k, hi_k] of idempotent component k (0 or 1).
    std::array<double, 2> component(int k) const noexcept {
        return {lo_.component(k), hi_.component(k)};
    }

    friend bool operator==(const DInterval&, const DInterval&) = default;

private:
    DInterval(Hyperbolic lo, Hyperbolic hi) : lo_(lo), hi_(hi) {}

    Hyperbolic lo_;
    Hyperbolic hi_;
};

inline Hyperbolic interval_length(const DInterval& interval) noexcept { return interval.length(); }

/// Chain lo = p0 <_D p1 <_D ... <_D pn = hi of a nondegenerate interval; every
/// step has both components strictly positive.
class DPartition {
public:
    /// Throws Errc::StepDegenerate, Errc::NotChain or Errc::EndpointMismatch; a
    /// degenerate interval is rejected with Errc::StepDegenerate.
    static DPartition make(const DInterval& interval, std::vector<Hyperbolic> points,
                           Tolerance tol = {});
    /// The two-point partition {lo, hi}.
    static DPartition trivial(const DInterval& interval, Tolerance tol = {});
    /// Combines two real partitions with the same number of points into one chain.
    static DPartition from_components(std::span<const double> first, std::span<const double> second,
                                      Tolerance tol = {});

    const std::vector<Hyperbolic>& points() const noexcept { return points_; }
    std::size_t steps() const noexcept { return points_.size() - 1; }
    const DInterval& interval() const noexcept { return interval_; }

    /// sup_D of the step lengths.
    Hyperbolic mesh() const;
    /// Inserts the componentwise midpoint of every step, `levels` times.
    DPartition refine_dyadic(int levels) const;
    /// Real partition of component k.
    std::vector<double> project(int k) const;

private:
    DPartition(DInterval interval, std::vector<Hyperbolic> points)
        : interval_(interval), points_(std::move(points)) {}

    DInterval interval_;
    std::vector<Hyperbolic> points_;
};

/// Points of `base` refined `levels` times, without chain validation. Used for
/// chains over degenerate intervals where a component stays constant.
std::vector<Hyperbolic> dyadic_chain(std::span<const Hyperbolic> base, int levels);

} // namespace hypercurve
