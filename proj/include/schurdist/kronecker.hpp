// kronecker.hpp — two-row Kronecker coefficients: closed form, fundamental
// triplet decompositions, a character-theory cross-check, and the
// compatibility polytope
//
// Triplets are named by second rows: (alpha, beta, gamma) stands for the
// frames (n-alpha, alpha) etc. The six fundamental triplets carry box weights
// (1, 2, 2, 2, 3, 4) per frame, so a decomposition n_vec satisfies
// n1 + 2(n2+n3+n4) + 3 n5 + 4 n6 = n and rebuilds the second rows as
// alpha = n3+n4+n5+2n6 (cyclic).

#pragma once

#include "exact.hpp"
#include "state.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace schurdist::kron {

using exact::BigInt;
using states::EntClass;

struct TripletLabel {
    int n = 1;
    int alpha2 = 0, beta2 = 0, gamma2 = 0;

    TripletLabel() = default;
    TripletLabel(int n_, int a2, int b2, int c2) : n(n_), alpha2(a2), beta2(b2), gamma2(c2) {
        if (n < 1) throw std::invalid_argument("TripletLabel: n >= 1");
        if (a2 < 0 || b2 < 0 || c2 < 0 || 2 * a2 > n || 2 * b2 > n || 2 * c2 > n)
            throw std::invalid_argument("TripletLabel: second rows must lie in [0, n/2]");
    }

    int sum2() const { return alpha2 + beta2 + gamma2; }
    std::array<double, 3> normalized() const {
        return {alpha2 / static_cast<double>(n), beta2 / static_cast<double>(n),
                gamma2 / static_cast<double>(n)};
    }
    friend bool operator==(const TripletLabel&, const TripletLabel&) = default;
    friend auto operator<=>(const TripletLabel&, const TripletLabel&) = default;
};

struct FundamentalDecomposition {
    std::array<long, 6> n_vec{};

    long boxes() const {
        return n_vec[0] + 2 * (n_vec[1] + n_vec[2] + n_vec[3]) + 3 * n_vec[4] + 4 * n_vec[5];
    }
    std::array<long, 3> second_rows() const {
        return {n_vec[2] + n_vec[3] + n_vec[4] + 2 * n_vec[5],
                n_vec[1] + n_vec[3] + n_vec[4] + 2 * n_vec[5],
                n_vec[1] + n_vec[2] + n_vec[4] + 2 * n_vec[5]};
    }
    friend bool operator==(const FundamentalDecomposition&, const FundamentalDecomposition&) = default;
};

// Theorem: g = sum over k of delta(k), with k the number of copies of the
// all-(2,2) triplet removed. delta(k) = 1 iff the reduced triplet still admits
// the unique W-style solution.
inline long kronecker_two_row(const TripletLabel& t) {
    int a = t.alpha2, b = t.beta2, c = t.gamma2;
    // a+b+c-2max can be negative and C++ / truncates toward zero, so floor by hand.
    int num = a + b + c - 2 * std::max({a, b, c});
    int y = (num >= 0) ? num / 2 : -((-num + 1) / 2);
    int k_max = std::min({a, b, c}) / 2;
    long g = 0;
    for (int k = 0; k <= k_max; ++k)
        if (y >= k && t.n - (a + b + c) + 2 * k >= 0) ++g;
    return g;
}

// The unique candidate decomposition with n6 = k; n5 is forced by parity and
// the rest is triangular. nullopt when any component would go negative.
inline std::optional<FundamentalDecomposition> decomposition_at(const TripletLabel& t, long k) {
    long a = t.alpha2, b = t.beta2, c = t.gamma2;
    long n5 = (a + b + c) % 2;
    long n2 = (b + c - a - n5) / 2 - k;
    long n3 = (a + c - b - n5) / 2 - k;
    long n4 = (a + b - c - n5) / 2 - k;
    long n1 = t.n - (a + b + c) + 2 * k;
    if (n1 < 0 || n2 < 0 || n3 < 0 || n4 < 0 || k < 0) return std::nullopt;
    return FundamentalDecomposition{{n1, n2, n3, n4, n5, k}};
}

// All solutions, one per admissible k; the list length equals the Kronecker
// coefficient (Prop. connecting covariant products to multiplicities).
inline std::vector<FundamentalDecomposition> fundamental_decompositions(const TripletLabel& t) {
    std::vector<FundamentalDecomposition> out;
    long k_max = std::min({t.alpha2, t.beta2, t.gamma2}) / 2;
    for (long k = 0; k <= k_max; ++k)
        if (auto d = decomposition_at(t, k)) out.push_back(*d);
    return out;
}

namespace detail {

// All partitions of n (any number of rows), as non-increasing part lists.
inline void partitions_rec(int n, int max_part, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(n - p, p, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    partitions_rec(n, n, cur, out);
    return out;
}

inline BigInt conjugacy_class_size(int n, const std::vector<int>& cycle_type) {
    BigInt denom = 1;
    int run = 0;
    for (std::size_t i = 0; i < cycle_type.size(); ++i) {
        denom *= cycle_type[i];
        ++run;
        if (i + 1 == cycle_type.size() || cycle_type[i + 1] != cycle_type[i]) {
            denom *= exact::factorial(run);
            run = 0;
        }
    }
    return exact::factorial(n) / denom;
}

// Murnaghan-Nakayama for a two-row frame, consuming cycle_type[pos..). Border
// strips are hook removals on the beta-set {l1+1, l2}; stripping a two-row
// frame never grows a third row, so the recursion stays in this family.
inline long long mn_character(int l1, int l2, const std::vector<int>& cycle_type, std::size_t pos,
                              std::map<std::array<int, 3>, long long>& memo) {
    if (pos == cycle_type.size()) return (l1 == 0 && l2 == 0) ? 1 : 0;
    std::array<int, 3> key{l1, l2, static_cast<int>(pos)};
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int t = cycle_type[pos];
    int b1 = l1 + 1, b2 = l2;
    long long acc = 0;
    if (b1 - t >= 0 && b1 - t != b2) {
        int c1 = std::max(b1 - t, b2), c2 = std::min(b1 - t, b2);
        int sign = (b1 - t < b2) ? -1 : 1;  // one bead crossed
        acc += sign * mn_character(c1 - 1, c2, cycle_type, pos + 1, memo);
    }
    if (b2 - t >= 0) {  // b2-t < b2 < b1, so no collision and no crossing
        acc += mn_character(b1 - 1, b2 - t, cycle_type, pos + 1, memo);
    }
    memo[key] = acc;
    return acc;
}

}  // namespace detail

// Character-theory route: g = (1/n!) sum over classes of |class| chi^a chi^b chi^c.
// Exact integers throughout; independent of the closed form above.
inline long kronecker_bruteforce(const TripletLabel& t) {
    if (t.n > 10) throw std::length_error("kronecker_bruteforce: n > 10 (character-table scale)");
    BigInt acc = 0;
    std::map<std::array<int, 3>, long long> memo_a, memo_b, memo_c;
    for (const auto& cls : detail::all_partitions(t.n)) {
        memo_a.clear();
        memo_b.clear();
        memo_c.clear();
        long long xa = detail::mn_character(t.n - t.alpha2, t.alpha2, cls, 0, memo_a);
        long long xb = detail::mn_character(t.n - t.beta2, t.beta2, cls, 0, memo_b);
        long long xc = detail::mn_character(t.n - t.gamma2, t.gamma2, cls, 0, memo_c);
        acc += detail::conjugacy_class_size(t.n, cls) * xa * xb * xc;
    }
    BigInt order = exact::factorial(t.n);
    if (acc % order != 0) throw std::logic_error("kronecker_bruteforce: non-integer multiplicity");
    return (acc / order).convert_to<long>();
}

// Compatibility polytope over smallest local eigenvalues: the three triangle
// inequalities lam_l <= sum of the other two.
inline bool polytope_membership(double lam_a, double lam_b, double lam_c, double tol = 1e-12) {
    for (double v : {lam_a, lam_b, lam_c})
        if (v < -tol || v > 0.5 + tol)
            throw std::invalid_argument("polytope_membership: eigenvalues lie in [0, 1/2]");
    return lam_a <= lam_b + lam_c + tol && lam_b <= lam_a + lam_c + tol &&
           lam_c <= lam_a + lam_b + tol;
}

// Region each SLOCC class can reach: origin, a biseparable edge, the lower
// polytope (sum <= 1), or the whole polytope.
inline bool class_region_membership(EntClass cls, double lam_a, double lam_b, double lam_c,
                                    double tol = 1e-12) {
    if (!polytope_membership(lam_a, lam_b, lam_c, tol)) return false;
    auto zero = [&](double v) { return std::abs(v) <= tol; };
    switch (cls) {
        case EntClass::Null:
        case EntClass::SeparableABC: return zero(lam_a) && zero(lam_b) && zero(lam_c);
        case EntClass::BiseparableAB_C: return zero(lam_c) && std::abs(lam_a - lam_b) <= tol;
        case EntClass::BiseparableA_BC: return zero(lam_a) && std::abs(lam_b - lam_c) <= tol;
        case EntClass::BiseparableAC_B: return zero(lam_b) && std::abs(lam_a - lam_c) <= tol;
        case EntClass::W: return lam_a + lam_b + lam_c <= 1.0 + tol;
        case EntClass::GHZ: return true;
    }
    return false;
}

// Every triplet with g > 0 for this n, lexicographic in (alpha2, beta2, gamma2).
inline std::vector<std::pair<TripletLabel, long>> polytope_scan(int n) {
    if (n < 1 || n > 200) throw std::invalid_argument("polytope_scan: n in [1, 200]");
    std::vector<std::pair<TripletLabel, long>> out;
    for (int a = 0; 2 * a <= n; ++a)
        for (int b = 0; 2 * b <= n; ++b)
            for (int c = 0; 2 * c <= n; ++c) {
                TripletLabel t(n, a, b, c);
                if (long g = kronecker_two_row(t); g > 0) out.emplace_back(t, g);
            }
    return out;
}

inline std::string scan_to_csv(const std::vector<std::pair<TripletLabel, long>>& scan) {
    std::ostringstream os;
    os << "n,alpha2,beta2,gamma2,g\n";
    for (const auto& [t, g] : scan)
        os << t.n << ',' << t.alpha2 << ',' << t.beta2 << ',' << t.gamma2 << ',' << g << '\n';
    return os.str();
}

inline nlohmann::json scan_to_json(const std::vector<std::pair<TripletLabel, long>>& scan) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [t, g] : scan)
        arr.push_back({{"n", t.n},
                       {"alpha2", t.alpha2},
                       {"beta2", t.beta2},
                       {"gamma2", t.gamma2},
                       {"g", g}});
    return arr;
}

}  // namespace schurdist::kron
