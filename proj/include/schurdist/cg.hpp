// cg.hpp — Clebsch-Gordan coefficients, exact (Condon-Shortley convention)
//
// Racah's single-sum formula evaluated over big rationals; every CG value is
// sign·sqrt(rational) exactly. The spin-1/2 coupling step used by the Schur
// cascades also gets a closed form to avoid big-integer work in hot loops.

#pragma once

#include "exact.hpp"

#include <algorithm>

namespace schurdist::cg {

using exact::BigInt;
using exact::BigRat;
using exact::HalfInt;
using exact::SqrtRational;
using exact::factorial;

// <j1 m1; j2 m2 | J M>, exact. Zero outside the selection rules.
inline SqrtRational clebsch_gordan_exact(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                                         HalfInt J, HalfInt M) {
    if (abs(m1) > j1 || abs(m2) > j2 || abs(M) > J) return SqrtRational::zero();
    if ((m1 + m2) != M) return SqrtRational::zero();
    if (J > j1 + j2 || J < abs(j1 - j2)) return SqrtRational::zero();
    // j1+j2+J must be an integer, and each m must sit on its j's ladder.
    if ((j1.tw + j2.tw + J.tw) % 2 != 0) return SqrtRational::zero();
    if ((j1.tw + m1.tw) % 2 || (j2.tw + m2.tw) % 2 || (J.tw + M.tw) % 2)
        return SqrtRational::zero();
    // All of these are integers when the rules above hold.
    long a1 = (J + j1 - j2).as_whole();
    long a2 = (J - j1 + j2).as_whole();
    long a3 = (j1 + j2 - J).as_whole();
    long a4 = (j1 + j2 + J).as_whole() + 1;
    long p1 = (J + M).as_whole(), p2 = (J - M).as_whole();
    long q1 = (j1 + m1).as_whole(), q2 = (j1 - m1).as_whole();
    long q3 = (j2 + m2).as_whole(), q4 = (j2 - m2).as_whole();

    BigRat radicand(BigInt(J.tw + 1) * factorial(a1) * factorial(a2) * factorial(a3) *
                        factorial(p1) * factorial(p2) * factorial(q1) * factorial(q2) *
                        factorial(q3) * factorial(q4),
                    factorial(a4));

    long b1 = a3;                           // j1+j2-J-k >= 0
    long b2 = q2;                           // j1-m1-k  >= 0
    long b3 = q3;                           // j2+m2-k  >= 0
    long c1 = (J - j2 + m1).as_whole();     // ...+k >= 0
    long c2 = (J - j1 - m2).as_whole();
    long kmin = std::max({0L, -c1, -c2});
    long kmax = std::min({b1, b2, b3});
    BigRat sum = 0;
    for (long k = kmin; k <= kmax; ++k) {
        BigRat term(1, factorial(k) * factorial(b1 - k) * factorial(b2 - k) *
                           factorial(b3 - k) * factorial(c1 + k) * factorial(c2 + k));
        if (k % 2) sum -= term; else sum += term;
    }
    SqrtRational out = SqrtRational::sqrt_of(radicand);
    out *= SqrtRational::of(sum);
    return out;
}

inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                             HalfInt J, HalfInt M) {
    return clebsch_gordan_exact(j1, m1, j2, m2, J, M).value();
}

// <j, m-sigma; 1/2, sigma | j+delta/2, m> with delta = +1/-1, sigma = +-1/2.
// two_j, two_m twice-values; sigma passed as +1/-1. Closed form:
//   delta=+1:  sqrt((j +- m + 1/2)/(2j+1))       (sign of sigma picks +-)
//   delta=-1:  -+ sqrt((j -+ m + 1/2)/(2j+1))
inline double spin_half_step(int two_j, int delta, int two_m, int sigma) {
    int two_m1 = two_m - sigma;
    if (std::abs(two_m1) > two_j) return 0.0;
    int two_jp = two_j + delta;
    if (two_jp < 0 || std::abs(two_m) > two_jp) return 0.0;
    if (delta == +1) {
        double num = sigma > 0 ? (two_j + two_m + 1) : (two_j - two_m + 1);
        return std::sqrt(num / (2.0 * (two_j + 1)));
    }
    double num = sigma > 0 ? (two_j - two_m + 1) : (two_j + two_m + 1);
    double v = std::sqrt(num / (2.0 * (two_j + 1)));
    return sigma > 0 ? -v : v;
}

}  // namespace schurdist::cg
