// louck.hpp — weight tensors, Louck coefficients, GL(2) irrep matrices, discrete
// orthogonal polynomials, and the R tensors the probability formulas contract
//
// Conventions. A weight tensor counts per-position symbol tuples of 2 or 3
// aligned bit sequences; the first sequence indexes the first axis. Magnetic
// labels follow schur.hpp, m = (#1s) - n/2. rep_matrix realizes the monomial
// formula whose natural index counts zeros instead, so its entry (m', m)
// matches Schur-basis labels (-m', -m); test_louck.cpp pins that pairing.

#pragma once

#include "entropy.hpp"
#include "partitions.hpp"
#include "schur.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace schurdist::louck {

using exact::BigInt;
using exact::BigRat;
using exact::HalfInt;
using exact::SqrtRational;
using exact::SqrtSum;
using exact::binomial;
using exact::factorial;
using exact::log_factorial;
using partitions::NormalizedPartition;
using partitions::TwoRowPartition;
using schur::BitSequence;
using Complex = std::complex<double>;

// --- weight tensors ----------------------------------------------------------

// Counts of per-position symbol tuples; tuple (b1,..,br) sits at index
// b1*2^(r-1) + .. + br, so axis i is sequence i.
struct WeightTensor {
    int rank = 2;
    std::array<long, 8> counts{};

    explicit WeightTensor(int r) : rank(r) {
        if (r != 2 && r != 3) throw std::invalid_argument("WeightTensor: rank must be 2 or 3");
    }
    static WeightTensor matrix(long c00, long c01, long c10, long c11) {
        WeightTensor w(2);
        w.counts = {c00, c01, c10, c11, 0, 0, 0, 0};
        w.validate();
        return w;
    }
    // Canonical x-parametrization of 2x2 tensors: total n, row marginal
    // row1 = O10+O11, column marginal col1 = O01+O11, free entry x = O10.
    static WeightTensor from_marginals(long n, long row1, long col1, long x) {
        return matrix(n - col1 - x, col1 - row1 + x, x, row1 - x);
    }

    int cells() const { return rank == 2 ? 4 : 8; }
    long& at(int i, int j) { return cell2(i, j); }
    long at(int i, int j) const { return const_cast<WeightTensor*>(this)->cell2(i, j); }
    long& at(int i, int j, int k) { return cell3(i, j, k); }
    long at(int i, int j, int k) const { return const_cast<WeightTensor*>(this)->cell3(i, j, k); }

    long total() const {
        long n = 0;
        for (int c = 0; c < cells(); ++c) n += counts[static_cast<std::size_t>(c)];
        return n;
    }
    // Marginal: #positions where sequence `axis` carries bit 1.
    long ones(int axis) const {
        if (axis < 0 || axis >= rank) throw std::out_of_range("WeightTensor::ones: bad axis");
        long v = 0;
        for (int c = 0; c < cells(); ++c)
            if ((c >> (rank - 1 - axis)) & 1) v += counts[static_cast<std::size_t>(c)];
        return v;
    }
    void validate() const {
        for (int c = 0; c < cells(); ++c)
            if (counts[static_cast<std::size_t>(c)] < 0)
                throw std::invalid_argument("WeightTensor: negative count");
    }

    friend bool operator==(const WeightTensor&, const WeightTensor&) = default;

private:
    long& cell2(int i, int j) {
        if (rank != 2 || (i | j) < 0 || i > 1 || j > 1)
            throw std::out_of_range("WeightTensor: bad 2d index");
        return counts[static_cast<std::size_t>(2 * i + j)];
    }
    long& cell3(int i, int j, int k) {
        if (rank != 3 || (i | j | k) < 0 || i > 1 || j > 1 || k > 1)
            throw std::out_of_range("WeightTensor: bad 3d index");
        return counts[static_cast<std::size_t>(4 * i + 2 * j + k)];
    }
};

inline WeightTensor weight_tensor(const std::vector<BitSequence>& seqs) {
    if (seqs.empty()) throw std::invalid_argument("weight_tensor: no sequences");
    if (seqs.size() != 2 && seqs.size() != 3)
        throw std::invalid_argument("weight_tensor: need 2 or 3 sequences");
    const std::size_t n = seqs[0].size();
    for (const auto& s : seqs)
        if (s.size() != n) throw std::invalid_argument("weight_tensor: length mismatch");
    WeightTensor w(static_cast<int>(seqs.size()));
    for (std::size_t p = 0; p < n; ++p) {
        int idx = 0;
        for (const auto& s : seqs) {
            const int b = s[p];
            if (b != 0 && b != 1) throw std::invalid_argument("weight_tensor: bits must be 0/1");
            idx = idx * 2 + b;
        }
        ++w.counts[static_cast<std::size_t>(idx)];
    }
    return w;
}

// Number of position assignments realizing the counts: n! / prod(counts!).
inline BigInt arrangement_count(const WeightTensor& w) {
    BigInt v = factorial(w.total());
    for (int c = 0; c < w.cells(); ++c) v /= factorial(w.counts[static_cast<std::size_t>(c)]);
    return v;
}

// --- Louck coefficients --------------------------------------------------------

// C^lambda_{m,m'}(Omega), the kernel tying the lambda block of the Schur basis
// to the weight matrix of a sequence pair:
//   sum_mu <lambda,m,mu|s> <s'|lambda,m',mu> = f^lambda C^lambda_{m,m'}(W(s,s')).
// Exact alternating k-sum; k runs over the range keeping every factorial
// argument non-negative. Marginal mismatch is a selection rule, not an error.
inline SqrtRational louck_coefficient_exact(const TwoRowPartition& lam, HalfInt m,
                                            HalfInt m_prime, const WeightTensor& omega) {
    if (omega.rank != 2) throw std::invalid_argument("louck_coefficient: need a 2x2 tensor");
    const long l2 = lam.lambda2;
    const long two_j = lam.two_j();
    if (omega.total() != lam.n()) return SqrtRational::zero();
    if ((two_j + m.tw) % 2 != 0 || (two_j + m_prime.tw) % 2 != 0) return SqrtRational::zero();
    const long jm = (two_j + m.tw) / 2, jmm = (two_j - m.tw) / 2;
    const long jp = (two_j + m_prime.tw) / 2, jpm = (two_j - m_prime.tw) / 2;
    if (jm < 0 || jmm < 0 || jp < 0 || jpm < 0) return SqrtRational::zero();
    const long o00 = omega.at(0, 0), o01 = omega.at(0, 1);
    const long o10 = omega.at(1, 0), o11 = omega.at(1, 1);
    // Row marginal carries m, column marginal carries m': j+m = row1 - lambda2.
    if (o10 + o11 - l2 != jm || o01 + o11 - l2 != jp) return SqrtRational::zero();

    const BigInt onum = factorial(o00) * factorial(o01) * factorial(o10) * factorial(o11);
    BigInt sum = 0;
    const long klo = std::max({0L, l2 - o00, l2 - o11});
    const long khi = std::min({l2, o01, o10});
    for (long k = klo; k <= khi; ++k) {
        BigInt term = binomial(l2, k) * onum /
                      (factorial(o01 - k) * factorial(o10 - k) *
                       factorial(o00 - l2 + k) * factorial(o11 - l2 + k));
        sum += (k % 2 == 0) ? term : -term;
    }
    if (sum == 0) return SqrtRational::zero();
    return SqrtRational::sqrt_of(
               BigRat(factorial(jm) * factorial(jmm) * factorial(jp) * factorial(jpm))) *
           SqrtRational::of(BigRat(sum, factorial(lam.n())));
}

inline double louck_coefficient(const TwoRowPartition& lam, HalfInt m, HalfInt m_prime,
                                const WeightTensor& omega) {
    return louck_coefficient_exact(lam, m, m_prime, omega).value();
}

// |sum_mu <lambda,m,mu|s><s'|lambda,m',mu| - f^lambda C^lambda_{m,m'}(W(s,s'))|,
// both sides exact; returns exactly 0 when the identity holds.
inline double louck_identity_residual(const TwoRowPartition& lam, HalfInt m, HalfInt m_prime,
                                      const BitSequence& s, const BitSequence& s_prime) {
    if (s.size() != s_prime.size())
        throw std::invalid_argument("louck_identity_residual: length mismatch");
    SqrtSum acc;
    for (const auto& mu : partitions::yamanouchi_symbols(lam)) {
        auto a = schur::schur_amplitude_exact({lam.j(), m, mu}, s);
        if (a.is_zero()) continue;
        acc.add(a * schur::schur_amplitude_exact({lam.j(), m_prime, mu}, s_prime));
    }
    SqrtRational rhs = louck_coefficient_exact(lam, m, m_prime, weight_tensor({s, s_prime}));
    rhs *= SqrtRational::of(BigRat(partitions::syt_count(lam)));
    acc.add(rhs.negate());
    return acc.is_zero() ? 0.0 : std::abs(acc.value());
}

// --- GL(2) irrep matrices ------------------------------------------------------

// D^lambda(g), rows and columns ordered by ascending label from -j. Entry
// (m', m) here pairs with Schur labels (-m', -m): the monomial formula counts
// zeros where schur.hpp counts ones.
struct RepMatrix {
    TwoRowPartition lambda;
    Eigen::MatrixXcd entries;  // (a, b) = D_{m' = -j+a, m = -j+b}

    long size() const { return entries.rows(); }
    Complex entry(HalfInt m_prime, HalfInt m) const {
        const int two_j = lambda.two_j();
        if (std::abs(m.tw) > two_j || std::abs(m_prime.tw) > two_j ||
            (m.tw + two_j) % 2 != 0 || (m_prime.tw + two_j) % 2 != 0)
            throw std::out_of_range("RepMatrix::entry: label outside the frame");
        return entries((m_prime.tw + two_j) / 2, (m.tw + two_j) / 2);
    }
};

namespace detail {
// Integer power with 0^0 = 1: an absent factor contributes nothing.
inline Complex ipow(Complex b, long e) {
    Complex r{1.0, 0.0};
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}
}  // namespace detail

// D^lambda_{m',m}(g) = det(g)^l2 sqrt((j+m)!(j-m)!(j+m')!(j-m')!) *
//   sum_x g00^(j+m'-x) g01^x g10^(m-m'+x) g11^(j-m-x) / ((j+m'-x)! x! (m-m'+x)! (j-m-x)!)
// over x in [max(m'-m,0), min(j-m, j+m')]. Coefficients via log-factorials, so
// large frames stay finite; singular g is fine, NaN is refused.
inline RepMatrix rep_matrix(const TwoRowPartition& lam, const Eigen::Matrix2cd& g) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::isnan(g(i, j).real()) || std::isnan(g(i, j).imag()))
                throw std::invalid_argument("rep_matrix: NaN entry");
    const long two_j = lam.two_j();
    const Complex detpow = detail::ipow(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0), lam.lambda2);
    RepMatrix rep{lam, Eigen::MatrixXcd::Zero(two_j + 1, two_j + 1)};
    for (long a = 0; a <= two_j; ++a) {      // j + m' = a
        for (long b = 0; b <= two_j; ++b) {  // j + m  = b
            const double half_pref = 0.5 * (log_factorial(a) + log_factorial(two_j - a) +
                                            log_factorial(b) + log_factorial(two_j - b));
            Complex acc{};
            for (long x = std::max(a - b, 0L); x <= std::min(two_j - b, a); ++x) {
                const double lc = half_pref - log_factorial(a - x) - log_factorial(x) -
                                  log_factorial(b - a + x) - log_factorial(two_j - b - x);
                acc += std::exp(lc) * detail::ipow(g(0, 0), a - x) * detail::ipow(g(0, 1), x) *
                       detail::ipow(g(1, 0), b - a + x) * detail::ipow(g(1, 1), two_j - b - x);
            }
            rep.entries(a, b) = detpow * acc;
        }
    }
    return rep;
}

// Asymptotic exponent of D^(n lambda_bar)_{0,0}(g)/n for unit-diagonal Hermitian
// g = [[1, c], [conj c, 1]]:  lbar2 log det(g) + (lbar1 - lbar2) log(1 + |c|).
inline double rep_matrix_rate(const NormalizedPartition& lbar, const Eigen::Matrix2cd& g) {
    if (std::abs(g(0, 0) - Complex{1.0}) > 1e-9 || std::abs(g(1, 1) - Complex{1.0}) > 1e-9 ||
        std::abs(g(1, 0) - std::conj(g(0, 1))) > 1e-9)
        throw std::invalid_argument("rep_matrix_rate: need unit-diagonal Hermitian g");
    if (std::abs(g(0, 1)) > 1.0 + 1e-9)
        throw std::invalid_argument("rep_matrix_rate: need |c| <= 1 (positivity)");
    const double c = std::min(std::abs(g(0, 1)), 1.0);
    const double det = (1.0 - c) * (1.0 + c);
    // lbar2 = 0 kills the det factor even at det = 0, same convention as xlogx.
    const double lead = lbar.bar2 > 0 ? lbar.bar2 * std::log(det) : 0.0;
    return lead + lbar.gap() * std::log1p(c);
}

// --- discrete orthogonal polynomials ---------------------------------------------

// K_k(x; n): coefficient of y^k in (1-y)^x (1+y)^(n-x). Integer-valued;
// orthogonal against binom(n,x) with norm 2^n binom(n,k).
inline BigInt krawtchouk_exact(long k, long n, long x) {
    if (n < 0 || k < 0 || x < 0) throw std::invalid_argument("krawtchouk: bad arguments");
    BigInt acc = 0;
    for (long i = std::max(0L, k - (n - x)); i <= std::min(k, x); ++i) {
        BigInt t = binomial(x, i) * binomial(n - x, k - i);
        acc += (i % 2 == 0) ? t : -t;
    }
    return acc;
}
inline double krawtchouk(long k, long n, long x) {
    return exact::to_double(krawtchouk_exact(k, n, x));
}

// E_l^(w',w)(x): coefficient of (yz)^x in (1-yz)^l (1+y)^(w'-l) (1+z)^(n-w-l),
// divided by binom(w',x) binom(n-w,x). Rational-valued; zero out of range.
inline BigRat hahn_eberlein_exact(long lambda2, long w_prime, long w, long x, long n) {
    if (n < 1 || lambda2 < 0) throw std::invalid_argument("hahn_eberlein: bad arguments");
    const BigInt den = binomial(w_prime, x) * binomial(n - w, x);
    if (den == 0) return BigRat(0);
    BigInt num = 0;
    for (long i = 0; i <= std::min(lambda2, x); ++i) {
        BigInt t = binomial(lambda2, i) * binomial(w_prime - lambda2, x - i) *
                   binomial(n - w - lambda2, x - i);
        num += (i % 2 == 0) ? t : -t;
    }
    return BigRat(num, den);
}
inline double hahn_eberlein(long lambda2, long w_prime, long w, long x, long n) {
    return exact::to_double(hahn_eberlein_exact(lambda2, w_prime, w, x, n));
}

// --- R tensors -------------------------------------------------------------------

// General R^{alpha beta gamma}_{m,m'} = f^a f^b f^g sum_Omega binom(n,Omega)
// C^a(Omega) C^b(Omega) C^g(Omega), all coefficients at (m, m'). The bullet and
// box forms below are its (n,0) and (n/2,n/2) specializations.
inline SqrtSum r_tensor_exact(const TwoRowPartition& alpha, const TwoRowPartition& beta,
                              const TwoRowPartition& gamma, HalfInt m, HalfInt m_prime) {
    const long n = alpha.n();
    if (beta.n() != n || gamma.n() != n)
        throw std::invalid_argument("r_tensor: partitions of different n");
    SqrtSum acc;
    if ((n + m.tw) % 2 != 0 || (n + m_prime.tw) % 2 != 0) return acc;
    const long row1 = (n + m.tw) / 2, col1 = (n + m_prime.tw) / 2;
    if (row1 < 0 || row1 > n || col1 < 0 || col1 > n) return acc;
    const SqrtRational fs = SqrtRational::of(BigRat(
        partitions::syt_count(alpha) * partitions::syt_count(beta) * partitions::syt_count(gamma)));
    for (long x = std::max(0L, row1 - col1); x <= std::min(row1, n - col1); ++x) {
        const WeightTensor omega = WeightTensor::from_marginals(n, row1, col1, x);
        SqrtRational t = louck_coefficient_exact(alpha, m, m_prime, omega);
        if (t.is_zero()) continue;
        t *= louck_coefficient_exact(beta, m, m_prime, omega);
        if (t.is_zero()) continue;
        t *= louck_coefficient_exact(gamma, m, m_prime, omega);
        if (t.is_zero()) continue;
        t *= SqrtRational::of(BigRat(arrangement_count(omega)));
        acc.add(t * fs);
    }
    return acc;
}
inline double r_tensor(const TwoRowPartition& alpha, const TwoRowPartition& beta,
                       const TwoRowPartition& gamma, HalfInt m, HalfInt m_prime) {
    return r_tensor_exact(alpha, beta, gamma, m, m_prime).value();
}

// alpha = (n,0) closed form: delta_{beta,gamma} f^beta /
// sqrt(binom(n, n/2+m) binom(n, n/2+m')), zero outside |m|,|m'| <= j_beta.
inline SqrtRational r_tensor_bullet_exact(const TwoRowPartition& beta,
                                          const TwoRowPartition& gamma, HalfInt m,
                                          HalfInt m_prime) {
    const long n = beta.n();
    if (gamma.n() != n) throw std::invalid_argument("r_tensor_bullet: partitions of different n");
    if (beta != gamma) return SqrtRational::zero();
    if (std::abs(m.tw) > beta.two_j() || std::abs(m_prime.tw) > beta.two_j())
        return SqrtRational::zero();
    if ((n + m.tw) % 2 != 0 || (n + m_prime.tw) % 2 != 0) return SqrtRational::zero();
    const BigInt f = partitions::syt_count(beta);
    return SqrtRational::sqrt_of(
        BigRat(f * f, binomial(n, (n + m.tw) / 2) * binomial(n, (n + m_prime.tw) / 2)));
}
inline double r_tensor_bullet(const TwoRowPartition& beta, const TwoRowPartition& gamma,
                              HalfInt m, HalfInt m_prime) {
    return r_tensor_bullet_exact(beta, gamma, m, m_prime).value();
}

// alpha = (n/2,n/2), m = m' = 0: rational closed form
//   f^box f^beta f^gamma / binom(n,n/2)^2 * sum_x (-1)^x binom(n/2,x) E_b2 E_g2
// with both E at (w',w) = (n/2,n/2). Vanishes whenever beta2 + gamma2 < n/2.
inline BigRat r_tensor_box_exact(const TwoRowPartition& beta, const TwoRowPartition& gamma,
                                 long n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("r_tensor_box_exact: n must be even");
    if (beta.n() != n || gamma.n() != n)
        throw std::invalid_argument("r_tensor_box_exact: need partitions of n");
    const long h = n / 2;
    BigRat sum = 0;
    for (long x = 0; x <= h; ++x) {
        BigRat t = BigRat(binomial(h, x)) * hahn_eberlein_exact(beta.lambda2, h, h, x, n) *
                   hahn_eberlein_exact(gamma.lambda2, h, h, x, n);
        sum += (x % 2 == 0) ? t : -t;
    }
    const BigInt fbox = partitions::syt_count(TwoRowPartition(h, h));
    return BigRat(fbox * partitions::syt_count(beta) * partitions::syt_count(gamma),
                  binomial(n, h) * binomial(n, h)) *
           sum;
}
inline double r_tensor_box(const TwoRowPartition& beta, const TwoRowPartition& gamma, long n) {
    return exact::to_double(r_tensor_box_exact(beta, gamma, n));
}

// Asymptotic exponent of the box R: half the Shannon entropy of the four counts
//   (g1 g2 + b1^2 - 1/4, g1 g2 + b2^2 - 1/4, b1 b2 + g1^2 - 1/4, b1 b2 + g2^2 - 1/4),
// which sum to one and are non-negative exactly on the support b2 + g2 >= 1/2;
// outside it the rate is -infinity.
inline double r_tensor_box_rate(const NormalizedPartition& beta_bar,
                                const NormalizedPartition& gamma_bar) {
    // Symmetric in the shapes; canonical argument order keeps that exact.
    if (beta_bar.bar2 > gamma_bar.bar2) return r_tensor_box_rate(gamma_bar, beta_bar);
    const double b1 = beta_bar.bar1, b2 = beta_bar.bar2;
    const double g1 = gamma_bar.bar1, g2 = gamma_bar.bar2;
    std::array<double, 4> p{g1 * g2 + b1 * b1 - 0.25, g1 * g2 + b2 * b2 - 0.25,
                            b1 * b2 + g1 * g1 - 0.25, b1 * b2 + g2 * g2 - 0.25};
    for (double& v : p) {
        if (v < -1e-9) return -std::numeric_limits<double>::infinity();
        v = std::max(v, 0.0);
    }
    return 0.5 * shannon(std::span<const double>(p.data(), p.size()));
}

// --- sequence-pair multiplicities --------------------------------------------------

// Z(x|w): ordered pairs of {1,2,3}-colorings of n positions, both sides with
// per-color counts w, and x_i positions leaving (equivalently entering) color i.
// Nine pairwise counts are fixed by (x, w) up to one free parameter k.
inline BigInt z_multiplicity(long x1, long x2, long x3, long w1, long w2, long w3, long n) {
    if (x1 < 0 || x2 < 0 || x3 < 0 || w1 < 0 || w2 < 0 || w3 < 0)
        throw std::invalid_argument("z_multiplicity: negative argument");
    if (w1 + w2 + w3 != n) throw std::invalid_argument("z_multiplicity: weights must sum to n");
    BigInt acc = 0;
    for (long k = std::max({0L, x1 - x3, x2 - x3}); k <= std::min({x1, x2, x1 + x2 - x3}); ++k) {
        const std::array<long, 9> cnt{k,
                                      w1 - x1,
                                      x1 - k,
                                      x1 + x2 - x3 - k,
                                      w2 - x2,
                                      x3 - x1 + k,
                                      x3 - x2 + k,
                                      x2 - k,
                                      w3 - x3};
        BigInt term = factorial(n);
        bool feasible = true;
        for (long e : cnt) {
            if (e < 0) {
                feasible = false;
                break;
            }
            term /= factorial(e);
        }
        if (feasible) acc += term;
    }
    return acc;
}

}  // namespace schurdist::louck
