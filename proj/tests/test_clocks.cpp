#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snapsim/metrics.hpp"
#include "snapsim/vector_clock.hpp"
#include "support/helpers.hpp"

using namespace snapsim;

TEST_CASE("tick bumps exactly the process's own entry") {
    VectorClock vc(std::vector<std::uint64_t>{2, 1, 0});
    VectorClock t = tick(vc, 0);
    CHECK(t.entries() == std::vector<std::uint64_t>{3, 1, 0});
    CHECK(vc.entries() == std::vector<std::uint64_t>{2, 1, 0}); // value semantics
    CHECK_THROWS_AS(tick(vc, 3), BadProcessIdError);
}

TEST_CASE("merge is the componentwise maximum") {
    VectorClock a(std::vector<std::uint64_t>{2, 1, 0});
    VectorClock b(std::vector<std::uint64_t>{1, 3, 0});
    CHECK(merge(a, b).entries() == std::vector<std::uint64_t>{2, 3, 0});
    CHECK(merge(b, a) == merge(a, b));
    CHECK_THROWS_AS(merge(a, VectorClock(2)), LengthMismatchError);
}

TEST_CASE("compare covers all four orderings") {
    VectorClock a(std::vector<std::uint64_t>{1, 2});
    VectorClock b(std::vector<std::uint64_t>{1, 2});
    VectorClock c(std::vector<std::uint64_t>{2, 2});
    VectorClock d(std::vector<std::uint64_t>{0, 3});
    CHECK(compare(a, b) == ClockOrder::Equal);
    CHECK(compare(a, c) == ClockOrder::Before);
    CHECK(compare(c, a) == ClockOrder::After);
    CHECK(compare(c, d) == ClockOrder::Concurrent);
    CHECK(compare(d, c) == ClockOrder::Concurrent);
    CHECK_THROWS_AS(compare(a, VectorClock(3)), LengthMismatchError);
}

TEST_CASE("to_string renders compactly") {
    CHECK(VectorClock(std::vector<std::uint64_t>{3, 0, 1}).to_string() == "[3,0,1]");
    CHECK(VectorClock().to_string() == "[]");
}

TEST_CASE("clock comparison matches happened-before on generated executions") {
    RngStream rng(2024, "clock-exec");
    for (int round = 0; round < 40; ++round) {
        std::uint32_t n = 2 + rng.uniform_below(3);
        auto exec = test::generate_execution(rng, n, 30 + rng.uniform_below(31));
        HappenedBeforeOracle oracle(exec.log);
        for (std::size_t i = 0; i < exec.log.size(); ++i) {
            for (std::size_t j = 0; j < exec.log.size(); ++j) {
                if (i == j) continue;
                bool hb = oracle.happened_before(i, j);
                bool vc_before = compare(*exec.event_vc[i], *exec.event_vc[j]) == ClockOrder::Before;
                REQUIRE(hb == vc_before);
            }
        }
    }
}
