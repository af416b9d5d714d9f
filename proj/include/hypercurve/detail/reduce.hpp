#pragma once

#include <cstddef>
#include <future>

namespace hypercurve::detail {

inline constexpr std::size_t kLeafSteps = 32;
inline constexpr std::size_t kParallelSteps = std::size_t{1} << 15;

/// Pairwise (cascade) summation of term(begin) + ... + term(end-1). The split
/// points depend only on the range, so the result is bit-for-bit reproducible.
template <typename T, typename Term>
T pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
    if (end - begin <= kLeafSteps) {
        T acc{};
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    T lhs = pairwise_sum<T>(begin, mid, term);
    lhs += pairwise_sum<T>(mid, end, term);
    return lhs;
}

template <typename T, typename Term>
T pairwise_sum(std::size_t n, const Term& term) {
    return pairwise_sum<T>(std::size_t{0}, n, term);
}

/// Sum over the steps (i-1, i), i in [first, last], of step(i, node(i-1), node(i)).
/// Leaves walk their steps sequentially so each node is evaluated about once;
/// large ranges fork their top two levels onto worker threads. The reduction
/// tree is fixed by the range alone, so threading never changes the result.
template <typename T, typename NodeFn, typename StepFn>
T chain_sum(std::size_t first, std::size_t last, const NodeFn& node, const StepFn& step, int fork_depth = 2) {
    const std::size_t count = last - first + 1;
    if (count <= kLeafSteps) {
        T acc{};
        auto prev = node(first - 1);
        for (std::size_t i = first; i <= last; ++i) {
            auto cur = node(i);
            acc += step(i, prev, cur);
            prev = std::move(cur);
        }
        return acc;
    }
    const std::size_t mid = first + count / 2;
    if (fork_depth > 0 && count >= kParallelSteps) {
        auto rhs = std::async(std::launch::async, [&] {
            return chain_sum<T>(mid, last, node, step, fork_depth - 1);
        });
        T lhs = chain_sum<T>(first, mid - 1, node, step, fork_depth - 1);
        lhs += rhs.get();
        return lhs;
    }
    T lhs = chain_sum<T>(first, mid - 1, node, step, 0);
    lhs += chain_sum<T>(mid, last, node, step, 0);
    return lhs;
}

} // namespace hypercurve::detail
