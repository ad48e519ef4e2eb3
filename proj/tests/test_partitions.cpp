// test_partitions.cpp — two-row frame combinatorics against closed forms and oracles

#include <schurdist/partitions.hpp>

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace schurdist::partitions;
using schurdist::exact::BigInt;

TEST_CASE("two-row enumeration", "[partitions]") {
    auto two = enumerate_two_row(2);
    REQUIRE(two == std::vector<TwoRowPartition>{{2, 0}, {1, 1}});
    REQUIRE(enumerate_two_row(1) == std::vector<TwoRowPartition>{{1, 0}});
    REQUIRE(enumerate_two_row(7).size() == 4);

    for (int n = 1; n <= 12; ++n) {
        auto list = enumerate_two_row(n);
        for (std::size_t i = 0; i < list.size(); ++i) {
            REQUIRE(list[i].n() == n);
            for (std::size_t k = i + 1; k < list.size(); ++k) {
                REQUIRE(list[i] != list[k]);
                REQUIRE(dominates(list[i], list[k]));  // decreasing dominance order
            }
        }
    }
}

TEST_CASE("standard tableau counts", "[partitions]") {
    REQUIRE(syt_count({3, 2}) == 5);
    REQUIRE(syt_count({4, 3}) == oracles::syt_count_oracle(4, 3));
    REQUIRE(oracles::syt_count_oracle(4, 3) == 14);
    for (int n = 1; n <= 12; ++n)
        for (const auto& lam : enumerate_two_row(n)) {
            REQUIRE(syt_count(lam) == oracles::syt_count_oracle(lam.lambda1, lam.lambda2));
            if (lam.lambda2 == 0) REQUIRE(syt_count(lam) == 1);
        }
}

TEST_CASE("semistandard tableau counts", "[partitions]") {
    REQUIRE(ssyt_count({7, 4}, 2) == 4);
    REQUIRE(ssyt_count({1, 1}, 2) == 1);
    REQUIRE(ssyt_count({2, 1}, 2) == 2);
    REQUIRE(ssyt_count({1, 1}, 1) == 0);  // fewer colors than rows

    for (int n = 1; n <= 10; ++n)
        for (const auto& lam : enumerate_two_row(n)) {
            REQUIRE(ssyt_count(lam, 2) == lam.two_j() + 1);
            for (int N = 1; N <= 3; ++N)
                REQUIRE(ssyt_count(lam, N) ==
                        oracles::ssyt_count_oracle(lam.lambda1, lam.lambda2, N));
        }
}

TEST_CASE("yamanouchi symbols", "[partitions]") {
    auto syms = yamanouchi_symbols({2, 1});
    REQUIRE(syms == std::vector<YamanouchiSymbol>{{1, 1, 2}, {1, 2, 1}});
    REQUIRE(yamanouchi_symbols({4, 0}) == std::vector<YamanouchiSymbol>{{1, 1, 1, 1}});
    REQUIRE(yamanouchi_symbols({3, 2}).size() == 5);

    for (int n = 1; n <= 12; ++n)
        for (const auto& lam : enumerate_two_row(n)) {
            auto list = yamanouchi_symbols(lam);
            REQUIRE(BigInt(list.size()) == syt_count(lam));
            for (std::size_t i = 0; i < list.size(); ++i) {
                REQUIRE(yamanouchi_valid(list[i]));
                if (i > 0) REQUIRE(list[i - 1] < list[i]);  // lexicographic
            }
        }
}

TEST_CASE("dominance order", "[partitions]") {
    REQUIRE(dominates({3, 1}, {2, 2}));
    REQUIRE_FALSE(dominates({2, 2}, {3, 1}));
    REQUIRE(dominates({3, 2}, {3, 2}));
    REQUIRE_THROWS_AS(dominates({3, 1}, {2, 1}), std::invalid_argument);

    for (int n = 2; n <= 10; ++n) {
        auto list = enumerate_two_row(n);
        for (const auto& a : list)
            for (const auto& b : list) {
                if (dominates(a, b) && dominates(b, a)) REQUIRE(a == b);
                for (const auto& c : list)
                    if (dominates(a, b) && dominates(b, c)) REQUIRE(dominates(a, c));
            }
    }
}

TEST_CASE("Wedderburn dimension count", "[partitions]") {
    for (int n = 1; n <= 20; ++n) {
        BigInt total = 0;
        for (const auto& lam : enumerate_two_row(n)) total += ssyt_count(lam, 2) * syt_count(lam);
        REQUIRE(total == BigInt(1) << n);
    }
}
