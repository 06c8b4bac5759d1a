// test_hilbert.cpp — layout, strides, and index round-trips.

#include <doctest.h>

#include "catgate/hilbert.hpp"

using namespace catgate;

TEST_CASE("composite dimension is 3 times the product of cavity dimensions") {
    HilbertSpec s(3, 15);
    CHECK(s.dim() == 3 * 16 * 16 * 16);
    CHECK(s.n_cavities() == 3);
    CHECK(s.qutrit_dim() == 3);

    HilbertSpec mixed(2, std::vector<int>{4, 7});
    CHECK(mixed.dim() == 3 * 5 * 8);
}

TEST_CASE("flatten and unflatten are inverse over every basis index") {
    // exhaustive for all composite spaces up to dim 1e4
    for (const auto& cutoffs : {std::vector<int>{3}, std::vector<int>{5, 2}, std::vector<int>{3, 4, 2},
                                std::vector<int>{15, 15}}) {
        HilbertSpec s(static_cast<int>(cutoffs.size()), cutoffs);
        REQUIRE(s.dim() <= 10000);
        for (std::int64_t i = 0; i < s.dim(); ++i) {
            const auto idx = s.unflatten(i);
            CHECK(s.flatten(idx) == i);
        }
    }
}

TEST_CASE("qutrit is the slowest index and the last cavity is contiguous") {
    HilbertSpec s(3, 15);
    CHECK(s.qutrit_stride() == 16 * 16 * 16);
    CHECK(s.cavity_stride(1) == 16 * 16);
    CHECK(s.cavity_stride(2) == 16);
    CHECK(s.cavity_stride(3) == 1);

    const std::int64_t i = s.flatten({2, 5, 0, 7});
    CHECK(s.qutrit_index_of(i) == 2);
    CHECK(s.photon_number_of(i, 1) == 5);
    CHECK(s.photon_number_of(i, 2) == 0);
    CHECK(s.photon_number_of(i, 3) == 7);
}

TEST_CASE("spectator factors multiply the dimension by two each and sit slowest") {
    HilbertSpec s(2, std::vector<int>{3, 3}, 2);
    CHECK(s.dim() == 4 * 3 * 4 * 4);
    CHECK(s.n_spectators() == 2);
    CHECK(s.factor_dim(0) == 2);
    CHECK(s.factor_stride(0) == 96);   // slowest factor
    CHECK(s.qutrit_stride() == 16);
    CHECK(s.cavity_stride(2) == 1);
}

TEST_CASE("invalid layouts are rejected") {
    CHECK_THROWS(HilbertSpec(0, 5));
    CHECK_THROWS(HilbertSpec(2, 0));
    CHECK_THROWS(HilbertSpec(1, std::vector<int>{1, 2}));
    CHECK_THROWS(HilbertSpec::single_mode(0));
    HilbertSpec s(1, 3);
    CHECK_THROWS(s.cavity_stride(2));
    CHECK_THROWS(s.flatten({0, 9}));
    CHECK_THROWS(s.unflatten(-1));
    CHECK_THROWS(s.unflatten(s.dim()));
}

TEST_CASE("single-mode specs have no qutrit") {
    auto s = HilbertSpec::single_mode(7);
    CHECK(s.dim() == 8);
    CHECK_FALSE(s.has_qutrit());
    CHECK_THROWS(s.qutrit_stride());
}

TEST_CASE("level labels parse") {
    CHECK(level_from_char('g') == Level::g);
    CHECK(level_from_char('e') == Level::e);
    CHECK(level_from_char('f') == Level::f);
    CHECK_THROWS(level_from_char('x'));
}
