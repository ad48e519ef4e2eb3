// partitions.hpp — two-row Young frames, tableaux counts, Yamanouchi symbols, dominance
//
// Qubit Schur-Weyl only ever sees two-row frames, so partitions are stored as
// (lambda1, lambda2) with lambda1 >= lambda2 >= 0. The angular-momentum view is
// j = (lambda1 - lambda2)/2; a frame of n is often named by its second row alone.

#pragma once

#include "exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace schurdist::partitions {

using exact::BigInt;
using exact::HalfInt;
using exact::factorial;

struct TwoRowPartition {
    int lambda1 = 0;
    int lambda2 = 0;

    TwoRowPartition() = default;
    TwoRowPartition(int l1, int l2) : lambda1(l1), lambda2(l2) {
        if (l2 < 0 || l1 < l2) throw std::invalid_argument("TwoRowPartition: need l1 >= l2 >= 0");
    }
    // Second-row shorthand: alpha stands for (n-alpha, alpha).
    static TwoRowPartition from_second_row(int n, int row2) {
        return TwoRowPartition(n - row2, row2);
    }

    int n() const { return lambda1 + lambda2; }
    int two_j() const { return lambda1 - lambda2; }
    HalfInt j() const { return HalfInt::from_twice(two_j()); }

    friend bool operator==(const TwoRowPartition&, const TwoRowPartition&) = default;
    friend auto operator<=>(const TwoRowPartition&, const TwoRowPartition&) = default;
};

// Row lengths divided by n: the shape datum that survives the large-n limit.
// bar1 + bar2 = 1, bar1 >= bar2 >= 0.
struct NormalizedPartition {
    double bar1 = 1.0;
    double bar2 = 0.0;

    NormalizedPartition() = default;
    NormalizedPartition(double b1, double b2) : bar1(b1), bar2(b2) {
        if (b2 < -1e-12 || b1 < b2 - 1e-12 || std::abs(b1 + b2 - 1.0) > 1e-9)
            throw std::invalid_argument("NormalizedPartition: need b1 >= b2 >= 0, b1+b2 = 1");
    }
    static NormalizedPartition from_second_row(double b2) { return {1.0 - b2, b2}; }
    static NormalizedPartition of(const TwoRowPartition& lam) {
        int n = lam.n();
        if (n == 0) throw std::invalid_argument("NormalizedPartition: empty partition");
        return {lam.lambda1 / static_cast<double>(n), lam.lambda2 / static_cast<double>(n)};
    }

    double gap() const { return bar1 - bar2; }  // 2*jbar
};

// Row-index sequence of a standard tableau; entries in {1,2}, every prefix has
// at least as many 1s as 2s.
using YamanouchiSymbol = std::vector<int>;

inline bool yamanouchi_valid(const YamanouchiSymbol& mu) {
    int excess = 0;
    for (int r : mu) {
        if (r == 1) ++excess;
        else if (r == 2) --excess;
        else return false;
        if (excess < 0) return false;
    }
    return true;
}

// All (n-k, k) for 0 <= k <= n/2, decreasing dominance order.
inline std::vector<TwoRowPartition> enumerate_two_row(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_two_row: n >= 1");
    std::vector<TwoRowPartition> out;
    for (int k = 0; 2 * k <= n; ++k) out.emplace_back(n - k, k);
    return out;
}

// Hook formula, closed form for two rows: f = n! (l1-l2+1) / ((l1+1)! l2!).
inline BigInt syt_count(const TwoRowPartition& lam) {
    return factorial(lam.n()) * (lam.two_j() + 1) /
           (factorial(lam.lambda1 + 1) * factorial(lam.lambda2));
}

// Weyl dimension formula for GL(N); N=2 collapses to lambda1-lambda2+1.
inline BigInt ssyt_count(const TwoRowPartition& lam, int N) {
    if (N < 1) throw std::invalid_argument("ssyt_count: N >= 1");
    int rows = lam.lambda2 > 0 ? 2 : (lam.lambda1 > 0 ? 1 : 0);
    if (N < rows) return 0;
    // lambda padded with zeros to length N; product over i<j of (l_i-l_j+j-i)/(j-i).
    std::vector<long> l(static_cast<std::size_t>(N), 0);
    l[0] = lam.lambda1;
    if (N > 1) l[1] = lam.lambda2;
    BigInt num = 1, den = 1;
    for (int i = 0; i < N; ++i)
        for (int jj = i + 1; jj < N; ++jj) {
            num *= l[i] - l[jj] + jj - i;
            den *= jj - i;
        }
    return num / den;
}

namespace detail {
inline void extend_symbols(int n, int ones, int twos, int max_twos,
                           YamanouchiSymbol& cur, std::vector<YamanouchiSymbol>& out) {
    if (ones + twos == n) {
        out.push_back(cur);
        return;
    }
    // Lexicographic: 1 before 2.
    if (ones < n - max_twos) {
        cur.push_back(1);
        extend_symbols(n, ones + 1, twos, max_twos, cur, out);
        cur.pop_back();
    }
    if (twos < max_twos && twos < ones) {
        cur.push_back(2);
        extend_symbols(n, ones, twos + 1, max_twos, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

// All Yamanouchi symbols of the frame, lexicographic; bijective with SYT.
inline std::vector<YamanouchiSymbol> yamanouchi_symbols(const TwoRowPartition& lam) {
    std::vector<YamanouchiSymbol> out;
    YamanouchiSymbol cur;
    cur.reserve(static_cast<std::size_t>(lam.n()));
    detail::extend_symbols(lam.n(), 0, 0, lam.lambda2, cur, out);
    return out;
}

inline bool dominates(const TwoRowPartition& lam, const TwoRowPartition& mu) {
    if (lam.n() != mu.n()) throw std::invalid_argument("dominates: partitions of different n");
    return lam.lambda1 >= mu.lambda1;  // second partial sums are equal (= n)
}

}  // namespace schurdist::partitions
