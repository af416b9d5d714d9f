#include "doctest.h"

#include <cfloat>
#include <cmath>
#include <random>

#include "hypercurve/error.hpp"
#include "hypercurve/intervals.hpp"

using namespace hypercurve;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

const Hyperbolic kOne{1.0, 1.0};

} // namespace

TEST_CASE("interval_new") {
    const auto unit = DInterval::make({}, kOne);
    CHECK(unit.lo() == Hyperbolic{});
    CHECK(unit.hi() == kOne);
    CHECK_NOTHROW(DInterval::make({}, {2.0, 3.0}));
    CHECK(code_of([] { DInterval::make({1.0, 0.0}, {0.0, 1.0}); }) == Errc::NotComparable);
    CHECK(code_of([] { DInterval::make(kOne, {}); }) == Errc::Reversed);
}

TEST_CASE("interval_length and degeneracy") {
    CHECK(DInterval::make({}, kOne).length() == kOne);
    CHECK(DInterval::make({0.0, 1.0}, kOne).length() == Hyperbolic{1.0, 0.0});
    const Hyperbolic a{0.3, -2.0};
    CHECK(DInterval::make(a, a).length() == Hyperbolic{});

    CHECK(DInterval::make({}, {1.0, 0.0}).is_degenerate());
    CHECK_FALSE(DInterval::make({}, kOne).is_degenerate());
    CHECK(DInterval::make(a, a).is_degenerate());
}

TEST_CASE("partition_new") {
    const auto unit = DInterval::make({}, kOne);
    CHECK_NOTHROW(DPartition::make(unit, {{}, {0.5, 0.5}, kOne}));
    const auto p = DPartition::make(unit, {{}, Hyperbolic{1.0, 0.0} * 0.5 + Hyperbolic{0.0, 1.0} * 0.5, kOne});
    CHECK(p.points()[1] == Hyperbolic{0.5, 0.5});
    CHECK(code_of([&] { DPartition::make(unit, {{}, {1.0, 0.0}, kOne}); }) == Errc::StepDegenerate);
    CHECK(code_of([&] { DPartition::make(unit, {{}, {0.7, 0.2}, {0.5, 0.5}, kOne}); }) == Errc::NotChain);
    CHECK(code_of([&] { DPartition::make(unit, {{}, {0.5, 0.5}}); }) == Errc::EndpointMismatch);
    CHECK(code_of([&] { DPartition::make(DInterval::make({}, {1.0, 0.0}), {{}, {1.0, 0.0}}); }) ==
          Errc::StepDegenerate);
}

TEST_CASE("partition_mesh") {
    const auto unit = DInterval::make({}, kOne);
    CHECK(DPartition::make(unit, {{}, {0.5, 0.5}, kOne}).mesh() == Hyperbolic{0.5, 0.5});
    CHECK(DPartition::make(unit, {{}, {0.25, 0.5}, kOne}).mesh() == Hyperbolic{0.75, 0.5});
    const auto iv = DInterval::make({-1.0, 2.0}, {3.0, 2.5});
    CHECK(DPartition::trivial(iv).mesh() == Hyperbolic{4.0, 0.5});
}

TEST_CASE("partition_refine_dyadic") {
    const auto unit = DInterval::make({}, kOne);
    const auto p = DPartition::trivial(unit);
    const auto r1 = p.refine_dyadic(1);
    CHECK(r1.points() == std::vector<Hyperbolic>{{}, {0.5, 0.5}, kOne});
    const auto r2 = p.refine_dyadic(2);
    CHECK(r2.points() == std::vector<Hyperbolic>{{}, {0.25, 0.25}, {0.5, 0.5}, {0.75, 0.75}, kOne});
    const auto q = DPartition::trivial(DInterval::make({}, {2.0, 4.0})).refine_dyadic(1);
    CHECK(q.points()[1] == Hyperbolic{1.0, 2.0});
}

TEST_CASE("refinement properties on random partitions") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Hyperbolic> pts{{u(rng) - 0.5, u(rng) - 0.5}};
        const int n = 1 + trial % 6;
        for (int k = 0; k < n; ++k) pts.push_back(pts.back() + Hyperbolic{u(rng), u(rng)});
        const auto iv = DInterval::make(pts.front(), pts.back());
        const auto p = DPartition::make(iv, pts);
        const int levels = 1 + trial % 5;
        const auto q = p.refine_dyadic(levels);

        // Validity is preserved.
        CHECK_NOTHROW(DPartition::make(iv, q.points()));

        // Mesh halves per level.
        const Hyperbolic expected = p.mesh() * std::ldexp(1.0, -levels);
        const Hyperbolic got = q.mesh();
        CHECK(std::fabs(got.v1 - expected.v1) <= 4.0 * DBL_EPSILON * std::max(1.0, std::fabs(pts.back().v1)));
        CHECK(std::fabs(got.v2 - expected.v2) <= 4.0 * DBL_EPSILON * std::max(1.0, std::fabs(pts.back().v2)));

        // Every step of P is the union of 2^levels consecutive steps of Q.
        const std::size_t per = std::size_t{1} << levels;
        REQUIRE(q.steps() == p.steps() * per);
        for (std::size_t k = 0; k < p.points().size(); ++k) CHECK(q.points()[k * per] == p.points()[k]);

        // Projections are real partitions and recombine to the same chain.
        const auto first = q.project(0);
        const auto second = q.project(1);
        for (std::size_t k = 1; k < first.size(); ++k) {
            CHECK(first[k] > first[k - 1]);
            CHECK(second[k] > second[k - 1]);
        }
        CHECK(DPartition::from_components(first, second).points() == q.points());
    }
}
