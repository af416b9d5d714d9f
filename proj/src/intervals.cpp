#include "hypercurve/intervals.hpp"

#include <cmath>

#include "hypercurve/error.hpp"

namespace hypercurve {

DInterval DInterval::make(const Hyperbolic& lo, const Hyperbolic& hi, Tolerance tol) {
    if (!is_finite(lo) || !is_finite(hi)) {
        throw Error(Errc::NonFinite, "interval endpoints must be finite");
    }
    switch (try_cmp_d(lo, hi, tol)) {
    case DOrdering::Less:
    case DOrdering::Equal:
        return {lo, hi};
    case DOrdering::Greater:
        throw Error(Errc::Reversed, "interval endpoints reversed: " + format_hyperbolic(lo) +
                                        " >_D " + format_hyperbolic(hi));
    case DOrdering::Incomparable:
        break;
    }
    throw Error(Errc::NotComparable, "interval endpoints not comparable: " + format_hyperbolic(lo) +
                                         ", " + format_hyperbolic(hi));
}

bool DInterval::is_degenerate(Tolerance tol) const noexcept {
    return classify(length(), tol) != NumberClass::Unit;
}

bool DInterval::contains(const Hyperbolic& tau, Tolerance tol) const noexcept {
    return d_leq(lo_, tau, tol) && d_leq(tau, hi_, tol);
}

DPartition DPartition::make(const DInterval& interval, std::vector<Hyperbolic> points, Tolerance tol) {
    if (interval.is_degenerate(tol)) {
        throw Error(Errc::StepDegenerate, "cannot partition a degenerate interval");
    }
    if (points.size() < 2) {
        throw Error(Errc::EndpointMismatch, "a partition needs at least two points");
    }
    if (try_cmp_d(points.front(), interval.lo(), tol) != DOrdering::Equal ||
        try_cmp_d(points.back(), interval.hi(), tol) != DOrdering::Equal) {
        throw Error(Errc::EndpointMismatch, "partition endpoints differ from the interval endpoints");
    }
    points.front() = interval.lo();
    points.back() = interval.hi();
    for (std::size_t k = 1; k < points.size(); ++k) {
        const Hyperbolic step = points[k] - points[k - 1];
        if (try_cmp_d(points[k - 1], points[k], tol) == DOrdering::Incomparable ||
            step.v1 < -tol.eps || step.v2 < -tol.eps) {
            throw Error(Errc::NotChain, "partition points " + std::to_string(k - 1) + " and " +
                                            std::to_string(k) + " are not increasing");
        }
        if (step.v1 <= tol.eps || step.v2 <= tol.eps) {
            throw Error(Errc::StepDegenerate,
                        "step " + std::to_string(k) + " has length " + format_hyperbolic(step) + " in O0");
        }
    }
    return {interval, std::move(points)};
}

DPartition DPartition::trivial(const DInterval& interval, Tolerance tol) {
    return make(interval, {interval.lo(), interval.hi()}, tol);
}

DPartition DPartition::from_components(std::span<const double> first, std::span<const double> second,
                                       Tolerance tol) {
    if (first.size() != second.size() || first.size() < 2) {
        throw Error(Errc::InvalidArgument, "component partitions must have equal size >= 2");
    }
    std::vector<Hyperbolic> points;
    points.reserve(first.size());
    for (std::size_t k = 0; k < first.size(); ++k) points.emplace_back(first[k], second[k]);
    const auto interval = DInterval::make(points.front(), points.back(), tol);
    return make(interval, std::move(points), tol);
}

Hyperbolic DPartition::mesh() const {
    std::vector<Hyperbolic> lengths;
    lengths.reserve(steps());
    for (std::size_t k = 1; k < points_.size(); ++k) lengths.push_back(points_[k] - points_[k - 1]);
    return sup_d(lengths);
}

DPartition DPartition::refine_dyadic(int levels) const {
    if (levels < 0) throw Error(Errc::InvalidArgument, "refinement levels must be >= 0");
    // Midpoints of steps in D+ \ O0 stay in D+ \ O0, so no revalidation is needed.
    return {interval_, dyadic_chain(points_, levels)};
}

std::vector<double> DPartition::project(int k) const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.component(k));
    return out;
}

std::vector<Hyperbolic> dyadic_chain(std::span<const Hyperbolic> base, int levels) {
    std::vector<Hyperbolic> current(base.begin(), base.end());
    for (int level = 0; level < levels; ++level) {
        std::vector<Hyperbolic> next;
        next.reserve(2 * current.size() - 1);
        for (std::size_t k = 0; k + 1 < current.size(); ++k) {
            next.push_back(current[k]);
            next.push_back((current[k] + current[k + 1]) * 0.5);
        }
        next.push_back(current.back());
        current = std::move(next);
    }
    return current;
}

} // namespace hypercurve
