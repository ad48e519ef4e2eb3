// exact.hpp — exact big-integer/rational arithmetic, half-integers, sign·sqrt(rational) values
//
// Everything combinatorial in this library (hook numbers, Clebsch-Gordan
// coefficients, Louck coefficients, Krawtchouk sums) is built from factorials,
// so it is either rational or of the form sign·sqrt(rational). Keeping those
// forms exact until the final conversion to double removes all cancellation
// error from the alternating sums.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace schurdist::exact {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

// Returns by value: callers hold results across further factorial() calls, so a
// reference into the growable memo table would dangle.
inline BigInt factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    static std::vector<BigInt> table{1};
    static std::mutex mu;
    std::lock_guard lock(mu);
    while (static_cast<long>(table.size()) <= n)
        table.push_back(table.back() * static_cast<long>(table.size()));
    return table[static_cast<std::size_t>(n)];
}

// log(n!) as a double; factorial ratios beyond double range stay finite in log
// form. Same growable-table scheme as factorial().
inline double log_factorial(long n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    static std::vector<double> table{0.0};
    static std::mutex mu;
    std::lock_guard lock(mu);
    while (static_cast<long>(table.size()) <= n)
        table.push_back(table.back() + std::log(static_cast<double>(table.size())));
    return table[static_cast<std::size_t>(n)];
}

inline BigInt binomial(long n, long k) {
    if (k < 0 || k > n || n < 0) return 0;
    BigInt num = 1;
    for (long i = 0; i < k; ++i) num *= (n - i);
    return num / factorial(k);
}

// n! / prod parts_i!, parts need not sum to n (the remainder gets no factor).
inline BigInt multinomial(long n, std::initializer_list<long> parts) {
    BigInt v = factorial(n);
    long used = 0;
    for (long p : parts) {
        if (p < 0) return 0;
        v /= factorial(p);
        used += p;
    }
    if (used > n) throw std::invalid_argument("multinomial: parts exceed n");
    return v;
}

// Half-integers stored as twice their value, the usual trick in coupling code.
struct HalfInt {
    int tw = 0;  // 2*value

    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt whole(int v) { return HalfInt{2 * v}; }
    // Boundary constructor for doubles coming from CLI/JSON.
    static HalfInt parse(double v) {
        double t = 2.0 * v;
        double r = std::round(t);
        if (std::abs(t - r) > 1e-9) throw std::invalid_argument("not a half-integer");
        return HalfInt{static_cast<int>(r)};
    }

    constexpr bool is_whole() const { return tw % 2 == 0; }
    constexpr int as_whole() const {
        if (!is_whole()) throw std::logic_error("HalfInt: not an integer");
        return tw / 2;
    }
    constexpr double value() const { return tw / 2.0; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.tw + b.tw}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.tw - b.tw}; }
    friend constexpr HalfInt operator-(HalfInt a) { return HalfInt{-a.tw}; }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

private:
    explicit constexpr HalfInt(int t) : tw(t) {}
    friend struct HalfIntAccess;
};

inline HalfInt abs(HalfInt a) { return a.tw < 0 ? -a : a; }

// sign * sqrt(mag2), exact. Closed under multiplication, which is all the
// telescoping CG products need.
struct SqrtRational {
    int sgn = 0;     // -1, 0, +1
    BigRat mag2 = 0; // squared magnitude, >= 0

    static SqrtRational zero() { return {}; }
    static SqrtRational of(const BigRat& r) {
        SqrtRational s;
        s.sgn = r == 0 ? 0 : (r > 0 ? 1 : -1);
        s.mag2 = r * r;
        return s;
    }
    static SqrtRational sqrt_of(const BigRat& r) {
        if (r < 0) throw std::invalid_argument("SqrtRational: negative radicand");
        SqrtRational s;
        s.sgn = r == 0 ? 0 : 1;
        s.mag2 = r;
        return s;
    }

    bool is_zero() const { return sgn == 0; }
    SqrtRational& operator*=(const SqrtRational& o) {
        sgn *= o.sgn;
        if (sgn == 0) mag2 = 0; else mag2 *= o.mag2;
        return *this;
    }
    friend SqrtRational operator*(SqrtRational a, const SqrtRational& b) { return a *= b; }
    SqrtRational& negate() { sgn = -sgn; return *this; }

    double value() const { return sgn * std::sqrt(to_double(mag2)); }

    friend bool operator==(const SqrtRational& a, const SqrtRational& b) {
        return a.sgn == b.sgn && (a.sgn == 0 || a.mag2 == b.mag2);
    }
};

// v = s^2 * f with f squarefree; returns {s, f}. Trial division — fine for the
// desk-scale radicands the exact oracles feed it, guarded against abuse.
inline std::pair<BigInt, BigInt> squarefree_split(BigInt v) {
    if (v <= 0) throw std::invalid_argument("squarefree_split: non-positive");
    if (v > BigInt(1) << 62) throw std::invalid_argument("squarefree_split: radicand too large");
    BigInt s = 1, f = 1;
    for (BigInt d = 2; d * d <= v; ++d) {
        int e = 0;
        while (v % d == 0) { v /= d; ++e; }
        for (int i = 0; i < e / 2; ++i) s *= d;
        if (e % 2) f *= d;
    }
    return {s, f * v};
}

// Exact accumulator for sums of sign·sqrt(rational), keyed by the squarefree
// part of the radicand. Lets small-n oracle tests assert equality, not closeness.
struct SqrtSum {
    std::map<BigInt, BigRat> terms;  // squarefree radicand -> rational coefficient

    void add(const SqrtRational& v) {
        if (v.is_zero()) return;
        BigInt num = boost::multiprecision::numerator(v.mag2);
        BigInt den = boost::multiprecision::denominator(v.mag2);
        auto [s, f] = squarefree_split(num * den);  // sqrt(n/d) = sqrt(n d)/d
        BigRat coeff(s, den);
        coeff *= v.sgn;
        auto it = terms.find(f);
        if (it == terms.end()) terms.emplace(f, coeff);
        else if ((it->second += coeff) == 0) terms.erase(it);
    }
    void add_rational(const BigRat& r) { add(SqrtRational::of(r)); }

    bool is_zero() const { return terms.empty(); }
    bool is_rational() const {
        return terms.empty() || (terms.size() == 1 && terms.begin()->first == 1);
    }
    BigRat rational_value() const {
        if (terms.empty()) return 0;
        if (!is_rational()) throw std::logic_error("SqrtSum: irrational value");
        return terms.begin()->second;
    }
    double value() const {
        double acc = 0;
        for (const auto& [f, c] : terms) acc += to_double(c) * std::sqrt(to_double(f));
        return acc;
    }
    friend bool operator==(const SqrtSum& a, const SqrtSum& b) { return a.terms == b.terms; }

    // Term-by-term product: sqrt(f1)·sqrt(f2) = s·sqrt(f) with f1·f2 = s²·f.
    friend SqrtSum operator*(const SqrtSum& a, const SqrtSum& b) {
        SqrtSum out;
        for (const auto& [fa, ca] : a.terms)
            for (const auto& [fb, cb] : b.terms) {
                auto [s, f] = squarefree_split(fa * fb);
                BigRat coeff = ca * cb * BigRat(s);
                auto it = out.terms.find(f);
                if (it == out.terms.end()) out.terms.emplace(f, std::move(coeff));
                else if ((it->second += coeff) == 0) out.terms.erase(it);
            }
        return out;
    }
    friend SqrtSum operator*(const SqrtSum& a, const SqrtRational& b) {
        SqrtSum bs;
        bs.add(b);
        return a * bs;
    }
};

}  // namespace schurdist::exact
