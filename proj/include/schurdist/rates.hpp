// rates.hpp — n-copy outcome probabilities and asymptotic rate functions
//
// Probabilities follow the Wedderburn measure: project psi^{tensor n} onto the
// (alpha, beta, gamma) block of the triple Schur decomposition and take the
// squared norm. copy_probabilities evolves block density matrices through the
// one-copy-at-a-time Clebsch-Gordan cascade (paths to different intermediate
// spins are orthogonal multiplicity labels, so tracing them is lossless);
// r_tensor_probability contracts the Louck rep matrices against the R tensor
// for states of the form (A x B x C)|GHZ>; covariant_ratio_probability scales
// the reference probability by the LU-invariant covariant norm, which is
// proportional to p with a state-independent constant on multiplicity-one
// triplets. The three routes are independent and cross-checked in the tests.
//
// All rates are in nats. A rate function returns the exponent of the leading
// exponential decay, -lim log p / n, as a RateResult. Conventions that need
// care: rate_w_general optimizes the covariant-norm exponent of the
// Kempe-invariant generating function, which equals the probability rate at
// the origin and differs from it on the plane boundary by the normalizer
// entropy; on the plane the closed-form probability rate is returned instead
// (method "closed-form"). rate_ghz_facet keeps the det(X^dag X) coefficients
// of the printed closed form; rate_ghz_facet_composed is the strict
// rep_matrix_rate composition, the true decay exponent of the exact facet
// probability (the two differ by -(1/2)log det(A^dag A) - beta_bar2 log
// det(B^dag B) - gamma_bar2 log det(C^dag C) >= 0 and coincide on |GHZ>
// itself); both are exposed.

#pragma once

#include "cg.hpp"
#include "covariants.hpp"
#include "louck.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace schurdist::rates {

using exact::HalfInt;
using kron::TripletLabel;
using partitions::NormalizedPartition;
using partitions::TwoRowPartition;
using states::ThreeQubitState;
using Complex = std::complex<double>;

// Signals a triplet outside the support of the requested rate (above the W
// plane, or outside the box-facet support beta_bar2 + gamma_bar2 >= 1/2).
struct ImpossibleTriplet : std::domain_error {
    explicit ImpossibleTriplet(const std::string& what) : std::domain_error(what) {}
};

// --- result types ------------------------------------------------------------

struct ProbTable {
    int n = 1;
    std::map<TripletLabel, double> entries;

    double at(const TripletLabel& t) const {
        auto it = entries.find(t);
        return it == entries.end() ? 0.0 : it->second;
    }
    double total() const {
        double s = 0;
        for (const auto& [t, p] : entries) s += p;
        return s;
    }
    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [t, p] : entries)
            arr.push_back({{"alpha2", t.alpha2}, {"beta2", t.beta2}, {"gamma2", t.gamma2}, {"p", p}});
        return nlohmann::json{{"n", n}, {"entries", arr}};
    }
    std::string to_csv() const {
        std::ostringstream os;
        os << "alpha2,beta2,gamma2,p\n";
        char buf[40];
        for (const auto& [t, p] : entries) {
            std::snprintf(buf, sizeof buf, "%.17g", p);
            os << t.alpha2 << ',' << t.beta2 << ',' << t.gamma2 << ',' << buf << '\n';
        }
        return os.str();
    }
};

enum class RateMethod { ClosedForm, Optimized, FiniteNExtrapolated };

inline const char* to_string(RateMethod m) {
    switch (m) {
        case RateMethod::ClosedForm: return "closed-form";
        case RateMethod::Optimized: return "optimized";
        case RateMethod::FiniteNExtrapolated: return "finite-n-extrapolated";
    }
    return "?";
}

struct RateResult {
    double value = 0.0;  // nats
    RateMethod method = RateMethod::ClosedForm;
    std::optional<std::array<double, 3>> maximizer{};  // kbar for the W optimizer
    std::optional<double> kkt_residual{};              // certificate when optimized
};

// --- exact n-copy probabilities ----------------------------------------------

namespace detail {

// One added qubit on one register: rectangular CG step from spin two_j/2 to
// (two_j + d)/2 in the magnetic index a = j + m, bit sigma carrying spin
// sigma - 1/2. At most one entry per column.
inline Eigen::MatrixXd cascade_step(int two_j, int d, int sigma) {
    const int two_jn = two_j + d;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(two_jn + 1, two_j + 1);
    const int ss = 2 * sigma - 1;
    for (int a = 0; a <= two_j; ++a) {
        const int tm_new = -two_j + 2 * a + ss;
        if (std::abs(tm_new) > two_jn) continue;
        S((two_jn + tm_new) / 2, a) = cg::spin_half_step(two_j, d, tm_new, ss);
    }
    return S;
}

}  // namespace detail

// Squared norms of the Wedderburn projections of psi^{tensor n}. Cost grows
// like the sixth power of the block dimensions; the n = 10 cap allocates
// ~750 MB transiently (two generations of blocks), n <= 8 stays under 150 MB.
inline ProbTable copy_probabilities(const ThreeQubitState& state, int n) {
    if (n < 1) throw std::invalid_argument("copy_probabilities: n >= 1");
    if (n > 10) throw std::length_error("copy_probabilities: n > 10 exceeds the resource cap");
    const double nrm = state.norm();
    if (!state.finite() || !(nrm > 0))
        throw std::domain_error("copy_probabilities: zero or non-finite state");

    using Key = std::array<int, 3>;
    std::map<Key, Eigen::MatrixXcd> blocks;
    {
        Eigen::VectorXcd v(8);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) v(4 * i + 2 * j + k) = state(i, j, k) / nrm;
        blocks[{1, 1, 1}] = v * v.adjoint();
    }

    for (int t = 1; t < n; ++t) {
        std::map<Key, Eigen::MatrixXcd> next;
        for (const auto& [tj, W] : blocks) {
            const std::array<int, 3> dim{tj[0] + 1, tj[1] + 1, tj[2] + 1};
            const int D = dim[0] * dim[1] * dim[2];
            for (int d0 : {-1, 1})
                for (int d1 : {-1, 1})
                    for (int d2 : {-1, 1}) {
                        const Key to{tj[0] + d0, tj[1] + d1, tj[2] + d2};
                        if (to[0] < 0 || to[1] < 0 || to[2] < 0) continue;
                        const std::array<int, 3> dimn{to[0] + 1, to[1] + 1, to[2] + 1};
                        const int Dn = dimn[0] * dimn[1] * dimn[2];

                        // Kraus operator M = sum_s psi_s S1 x S2 x S3, <= 8
                        // entries per column; sparse keeps the update at
                        // O(D^2) per direction instead of GEMM's O(D^2 D').
                        std::vector<Eigen::Triplet<Complex>> trip;
                        trip.reserve(static_cast<std::size_t>(8 * D));
                        for (int s0 = 0; s0 < 2; ++s0)
                            for (int s1 = 0; s1 < 2; ++s1)
                                for (int s2 = 0; s2 < 2; ++s2) {
                                    const Complex amp = state(s0, s1, s2) / nrm;
                                    if (amp == Complex{}) continue;
                                    const Eigen::MatrixXd S0 = detail::cascade_step(tj[0], d0, s0);
                                    const Eigen::MatrixXd S1m = detail::cascade_step(tj[1], d1, s1);
                                    const Eigen::MatrixXd S2m = detail::cascade_step(tj[2], d2, s2);
                                    const int o0 = d0 > 0 ? s0 : s0 - 1;
                                    const int o1 = d1 > 0 ? s1 : s1 - 1;
                                    const int o2 = d2 > 0 ? s2 : s2 - 1;
                                    for (int a0 = 0; a0 < dim[0]; ++a0) {
                                        const int b0 = a0 + o0;
                                        if (b0 < 0 || b0 >= dimn[0] || S0(b0, a0) == 0) continue;
                                        for (int a1 = 0; a1 < dim[1]; ++a1) {
                                            const int b1 = a1 + o1;
                                            if (b1 < 0 || b1 >= dimn[1] || S1m(b1, a1) == 0) continue;
                                            const double c01 = S0(b0, a0) * S1m(b1, a1);
                                            for (int a2 = 0; a2 < dim[2]; ++a2) {
                                                const int b2 = a2 + o2;
                                                if (b2 < 0 || b2 >= dimn[2] || S2m(b2, a2) == 0)
                                                    continue;
                                                trip.emplace_back(
                                                    (b0 * dimn[1] + b1) * dimn[2] + b2,
                                                    (a0 * dim[1] + a1) * dim[2] + a2,
                                                    amp * c01 * S2m(b2, a2));
                                            }
                                        }
                                    }
                                }
                        Eigen::SparseMatrix<Complex> M(Dn, D);
                        M.setFromTriplets(trip.begin(), trip.end());
                        Eigen::MatrixXcd MW = M * W;
                        auto [it, fresh] = next.try_emplace(to, Eigen::MatrixXcd::Zero(Dn, Dn));
                        it->second.noalias() += MW * M.adjoint();
                    }
        }
        blocks = std::move(next);
    }

    ProbTable table;
    table.n = n;
    for (const auto& [tj, W] : blocks) {
        TripletLabel t(n, (n - tj[0]) / 2, (n - tj[1]) / 2, (n - tj[2]) / 2);
        // The cascade walks blocks the Kraus steps can reach, which includes
        // multiplicity-zero triplets; their weight is exactly zero in exact
        // arithmetic (stray 1e-18 here), so keep the support honest.
        if (kron::kronecker_two_row(t) == 0) continue;
        table.entries.emplace(t, std::max(0.0, W.trace().real()));
    }
    return table;
}

// The single-copy local factors that turn |GHZ> into the five-angle family:
// apply_local(ghz(), A, B, C) == ghz_family(delta, eps, theta, varphi, phi).
inline std::array<Eigen::Matrix2cd, 3> ghz_family_factors(double delta, double eps, double theta,
                                                          double varphi, double phi) {
    const double cd = std::cos(delta), sd = std::sin(delta);
    const double K = 1.0 / (1.0 + 2.0 * cd * sd * std::cos(eps) * std::cos(theta) *
                                      std::cos(varphi) * std::cos(phi));
    const Complex branch = sd * std::exp(Complex(0.0, phi));
    Eigen::Matrix2cd A, B, C;
    A << cd, branch * std::cos(eps), 0.0, branch * std::sin(eps);
    A *= std::sqrt(2.0 * K);
    B << 1.0, std::cos(theta), 0.0, std::sin(theta);
    C << 1.0, std::cos(varphi), 0.0, std::sin(varphi);
    return {A, B, C};
}

// p(alpha,beta,gamma) for (A x B x C)|GHZ> normalized: 2^{-n} sum over m, m'
// of D^alpha(A^dag A) D^beta(B^dag B) D^gamma(C^dag C) R^{alpha beta gamma},
// divided by the norm^{2n}. Exact-arithmetic R tensors; practical for n <~ 16.
inline double r_tensor_probability(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B,
                                   const Eigen::Matrix2cd& C, const TripletLabel& t) {
    const long n = t.n;
    const TwoRowPartition al(n - t.alpha2, t.alpha2), be(n - t.beta2, t.beta2),
        ga(n - t.gamma2, t.gamma2);
    const auto Da = louck::rep_matrix(al, (A.adjoint() * A).eval());
    const auto Db = louck::rep_matrix(be, (B.adjoint() * B).eval());
    const auto Dc = louck::rep_matrix(ga, (C.adjoint() * C).eval());

    const long tw = std::min({al.two_j(), be.two_j(), ga.two_j()});
    Complex acc = 0;
    for (long ta = -tw; ta <= tw; ta += 2)
        for (long tb = -tw; tb <= tw; tb += 2) {
            const auto m = HalfInt::from_twice(ta), mp = HalfInt::from_twice(tb);
            const double R = louck::r_tensor(al, be, ga, m, mp);
            if (R == 0.0) continue;
            acc += Da.entry(mp, m) * Db.entry(mp, m) * Dc.entry(mp, m) * R;
        }

    // ||(A x B x C)|GHZ>||^2 from the three Gram matrices.
    const Eigen::Matrix2cd GA = A.adjoint() * A, GB = B.adjoint() * B, GC = C.adjoint() * C;
    const double norm2 = 0.5 * (GA(0, 0) * GB(0, 0) * GC(0, 0) + GA(1, 1) * GB(1, 1) * GC(1, 1) +
                                2.0 * (GA(0, 1) * GB(0, 1) * GC(0, 1)).real())
                             .real();
    if (!(norm2 > 0)) throw std::domain_error("r_tensor_probability: singular local factors");
    return acc.real() * std::pow(2.0 * norm2, -static_cast<double>(n));
}

// Covariant-route probability on multiplicity-one triplets: the Wedderburn
// projection norm is proportional to the LU covariant norm with a
// state-independent constant, so p(t|psi) = p(t|GHZ) lu(psi) / lu(GHZ).
inline double covariant_ratio_probability(const ThreeQubitState& psi, const TripletLabel& t) {
    if (kron::kronecker_two_row(t) != 1)
        throw std::invalid_argument("covariant_ratio_probability: multiplicity-one triplets only");
    const auto dec = kron::fundamental_decompositions(t).front();
    const ThreeQubitState ref = states::ghz();
    const auto P = cov::covariant_power(psi.normalized(), dec.n_vec);
    const auto Q = cov::covariant_power(ref, dec.n_vec);
    const double lu_psi = cov::lu_inner_product(P, P).real();
    const double lu_ref = cov::lu_inner_product(Q, Q).real();
    if (!(lu_ref > 0))
        throw std::domain_error("covariant_ratio_probability: reference covariant vanishes");
    const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    return r_tensor_probability(I, I, I, t) * lu_psi / lu_ref;
}

// --- bipartite warm-up --------------------------------------------------------

// p(k) = binom(n,k) |alpha|^{2k} |beta|^{2(n-k)} for n copies of
// alpha|00> + beta|11>, counting the k copies seen in |11>.
inline double bipartite_probability(Complex alpha, Complex beta, long n, long k) {
    if (n < 1 || k < 0 || k > n) throw std::invalid_argument("bipartite_probability: 0 <= k <= n");
    const double p = std::norm(alpha), q = std::norm(beta);
    if (std::abs(p + q - 1.0) > 1e-9)
        throw std::invalid_argument("bipartite_probability: amplitudes must be normalized");
    if (p == 0.0 && k > 0) return 0.0;
    if (q == 0.0 && k < n) return 0.0;
    double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    if (k > 0) lg += k * std::log(p);
    if (k < n) lg += (n - k) * std::log(q);
    return std::exp(lg);
}

// Large-deviation rate of the binomial: D((kbar, 1-kbar) || (spec, 1-spec)).
inline double bipartite_rate(double k_bar, double spec) {
    if (k_bar < 0 || k_bar > 1) throw std::invalid_argument("bipartite_rate: kbar in [0,1]");
    if (spec < 0 || spec > 1) throw std::invalid_argument("bipartite_rate: spec in [0,1]");
    return kl_divergence({k_bar, 1.0 - k_bar}, {spec, 1.0 - spec});
}

// Probability of the frame with spin j (lambda2 = n/2 - j) for n copies of
// alpha|00> + beta|11>: f^lambda (pq)^{lambda2} sum_{i=0}^{2j} p^i q^{2j-i}.
// The geometric sum is the continuous extension of (p^{2j+1}-q^{2j+1})/(p-q),
// so the |alpha| = |beta| limit (2j+1) p^{2j} needs no separate branch.
inline double bipartite_block_probability(Complex alpha, Complex beta, long n, HalfInt j) {
    if (n < 1) throw std::invalid_argument("bipartite_block_probability: n >= 1");
    const long two_j = j.tw;
    if (two_j < 0 || two_j > n || (n - two_j) % 2 != 0)
        throw std::invalid_argument("bipartite_block_probability: j must match n");
    const double p = std::norm(alpha), q = std::norm(beta);
    if (std::abs(p + q - 1.0) > 1e-9)
        throw std::invalid_argument("bipartite_block_probability: amplitudes must be normalized");
    const long lam2 = (n - two_j) / 2;
    const TwoRowPartition lam(n - lam2, lam2);
    double geo = 0;
    for (long i = 0; i <= two_j; ++i)
        geo += std::pow(p, static_cast<double>(i)) * std::pow(q, static_cast<double>(two_j - i));
    return exact::to_double(partitions::syt_count(lam)) * std::pow(p * q, static_cast<double>(lam2)) *
           geo;
}

// --- W-class rates -------------------------------------------------------------

// Probability rate on the plane alpha_bar2 + beta_bar2 + gamma_bar2 = 1 for the
// normalized W family (a, b, c; d = 0): the KL divergence
// D((abar2, bbar2, gbar2) || (a, b, c)). Zero parameter against a nonzero
// exponent signals +infinity through the KL convention.
inline RateResult rate_w_plane(double abar2, double bbar2, double gbar2, double a, double b,
                               double c) {
    const double bars[] = {abar2, bbar2, gbar2};
    for (double v : bars)
        if (v < -1e-12 || v > 0.5 + 1e-12)
            throw std::invalid_argument("rate_w_plane: second rows lie in [0, 1/2]");
    if (std::abs(abar2 + bbar2 + gbar2 - 1.0) > 1e-9)
        throw std::invalid_argument("rate_w_plane: triplet must lie on the plane");
    if (a < 0 || b < 0 || c < 0 || std::abs(a + b + c - 1.0) > 1e-6)
        throw std::invalid_argument("rate_w_plane: parameters must be a plane W state");
    return {kl_divergence({abar2, bbar2, gbar2}, {a, b, c}), RateMethod::ClosedForm};
}

// The vertex-affine presentation relative to the reference state,
// delta_phi = phi(t|psi_W) - phi(t|W) = -log 3 - sum bars log params; exactly
// affine in the second rows with barycentric weights 1 - 2*bar2.
inline double rate_w_plane_relative(double abar2, double bbar2, double gbar2, double a, double b,
                                    double c) {
    const double inf = std::numeric_limits<double>::infinity();
    auto term = [&](double bar, double par) {
        if (bar <= 0) return 0.0;
        return par > 0 ? -bar * std::log(par) : inf;
    };
    return -std::log(3.0) + term(abar2, a) + term(bbar2, b) + term(gbar2, c);
}

namespace detail {

// Exponent of the interior W-class generating function at composition kbar,
// after Stirling: 2(1-lam) H4(kbar_i/(1-lam), rest) + sum kbar_i log(a_i/d)
// - sum (1-2 bar_i) H2(kbar_i/(1-2 bar_i)). Infeasible points give -infinity.
struct WBeastExponent {
    std::array<double, 3> bar;    // second rows
    std::array<double, 3> par;    // a, b, c
    double d;
    double L;                     // 1 - lambda_bar

    double operator()(std::span<const double> k) const {
        double ksum = 0;
        for (int i = 0; i < 3; ++i) {
            const double delta = 1.0 - 2.0 * bar[i];
            if (k[i] < -1e-15 || k[i] > delta + 1e-15) return -std::numeric_limits<double>::infinity();
            ksum += k[i];
        }
        if (ksum > L + 1e-15) return -std::numeric_limits<double>::infinity();
        const double rest = std::max(0.0, L - ksum);
        double s = 0;
        // 2 (1-lam) H4: expanded so the L = 0 plane limit is exact.
        for (int i = 0; i < 3; ++i) s -= 2.0 * xlogx(std::max(0.0, k[i]));
        s -= 2.0 * xlogx(rest);
        s += 2.0 * xlogx(L);
        for (int i = 0; i < 3; ++i) {
            const double ki = std::max(0.0, k[i]);
            if (ki > 0) {
                if (par[i] <= 0 || d <= 0) return -std::numeric_limits<double>::infinity();
                s += ki * std::log(par[i] / d);
            }
            const double delta = 1.0 - 2.0 * bar[i];
            s += xlogx(ki) + xlogx(std::max(0.0, delta - ki)) - xlogx(delta);
        }
        return s;
    }

    // Gradient component; valid strictly inside the box.
    double grad(std::span<const double> k, int i) const {
        const double rest = L - (k[0] + k[1] + k[2]);
        const double delta = 1.0 - 2.0 * bar[i];
        return 2.0 * std::log(rest / k[i]) + std::log(par[i] / d) +
               std::log(k[i] / (delta - k[i]));
    }
};

// Deterministic Nelder-Mead over the free coordinates; infeasible points carry
// -infinity, which reflection and shrink steps handle.
inline void nelder_mead(const WBeastExponent& f, std::vector<double>& x, double scale) {
    const std::size_t m = x.size();
    if (m == 0) return;
    struct Vertex {
        std::vector<double> p;
        double v;
    };
    auto eval = [&](const std::vector<double>& p) { return f(std::span<const double>(p)); };
    std::vector<Vertex> simplex;
    simplex.push_back({x, eval(x)});
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> p = x;
        p[i] += scale;
        if (eval(p) == -std::numeric_limits<double>::infinity()) p[i] = x[i] - scale;
        simplex.push_back({p, eval(p)});
    }
    auto worse = [](const Vertex& a, const Vertex& b) { return a.v > b.v; };
    for (int iter = 0; iter < 600; ++iter) {
        std::sort(simplex.begin(), simplex.end(), worse);  // best first
        double spread = 0;
        for (std::size_t i = 0; i < m; ++i)
            spread = std::max(spread,
                              std::abs(simplex.front().p[i] - simplex.back().p[i]));
        if (spread < 1e-13 && std::abs(simplex.front().v - simplex.back().v) < 1e-14) break;

        std::vector<double> cen(m, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
            for (std::size_t i = 0; i < m; ++i) cen[i] += simplex[v].p[i] / static_cast<double>(m);
        const Vertex& worst = simplex.back();
        auto blend = [&](double coef) {
            std::vector<double> p(m);
            for (std::size_t i = 0; i < m; ++i) p[i] = cen[i] + coef * (cen[i] - worst.p[i]);
            return Vertex{p, eval(p)};
        };
        Vertex refl = blend(1.0);
        if (refl.v > simplex.front().v) {
            Vertex exp_ = blend(2.0);
            simplex.back() = exp_.v > refl.v ? exp_ : refl;
        } else if (refl.v > simplex[m - 1].v) {
            simplex.back() = refl;
        } else {
            Vertex con = blend(refl.v > worst.v ? 0.5 : -0.5);
            if (con.v > std::max(refl.v, worst.v)) {
                simplex.back() = con;
            } else {
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (std::size_t i = 0; i < m; ++i)
                        simplex[v].p[i] = 0.5 * (simplex[v].p[i] + simplex.front().p[i]);
                    simplex[v].v = eval(simplex[v].p);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), worse);
    x = simplex.front().p;
}

}  // namespace detail

// Rate of the W-class generating function for the family
// sqrt(a)|100> + sqrt(b)|010> + sqrt(c)|001> + sqrt(d)|000>:
//   -(sum bars log params) - (1 - lam) log d - sup over the feasible simplex
// of the Stirling exponent. On the plane (lam = 1) the closed-form probability
// rate is returned; at the origin the two semantics agree because the
// covariant norm then equals the probability.
inline RateResult rate_w_general(double abar2, double bbar2, double gbar2, double a, double b,
                                 double c, double d) {
    const std::array<double, 3> bar{abar2, bbar2, gbar2};
    const std::array<double, 3> par{a, b, c};
    for (double v : bar)
        if (v < -1e-12 || v > 0.5 + 1e-12)
            throw std::invalid_argument("rate_w_general: second rows lie in [0, 1/2]");
    for (double v : par)
        if (v < 0) throw std::invalid_argument("rate_w_general: parameters must be nonnegative");
    if (d < 0 || std::abs(a + b + c + d - 1.0) > 1e-6)
        throw std::invalid_argument("rate_w_general: parameters must be a normalized W family");
    const double lam = abar2 + bbar2 + gbar2;
    if (!kron::class_region_membership(kron::EntClass::W, abar2, bbar2, gbar2, 1e-9))
        throw ImpossibleTriplet("rate_w_general: triplet above the plane has empty feasible region");

    const double inf = std::numeric_limits<double>::infinity();
    auto linear = [&]() -> double {
        double v = 0;
        for (int i = 0; i < 3; ++i) {
            if (bar[i] <= 0) continue;
            if (par[i] <= 0) return inf;
            v -= bar[i] * std::log(par[i]);
        }
        return v;
    };

    if (lam >= 1.0 - 1e-9) {
        // Plane boundary: exact probability rate -H(bars) - sum bars log params
        // (d-independent; the plane blocks carry no A-covariant factor).
        const double lin = linear();
        if (lin == inf) return {inf, RateMethod::ClosedForm};
        return {lin - shannon({abar2, bbar2, gbar2}), RateMethod::ClosedForm};
    }

    if (!(d > 0)) return {inf, RateMethod::ClosedForm};
    const double lin = linear();
    if (lin == inf) return {inf, RateMethod::ClosedForm};

    detail::WBeastExponent f{bar, par, d, 1.0 - lam};

    // Free coordinates: a pinched box (bar_i = 1/2) freezes kbar_i at 0.
    std::array<double, 3> width{};
    std::vector<int> free_idx;
    for (int i = 0; i < 3; ++i) {
        width[i] = std::min(1.0 - 2.0 * bar[i], f.L);
        if (width[i] > 1e-12) free_idx.push_back(i);
    }

    std::array<double, 3> k{0, 0, 0};
    double best = f(std::span<const double>(k.data(), 3));
    std::array<double, 3> bestk = k;
    if (!free_idx.empty()) {
        // 32-per-axis grid over the free box, then local refinement from the
        // best starts; ties resolved toward smaller kbar lexicographically.
        constexpr int G = 32;
        std::vector<std::pair<double, std::array<double, 3>>> starts;
        std::array<double, 3> g{0, 0, 0};
        std::vector<int> idx(free_idx.size(), 0);
        for (;;) {
            for (std::size_t u = 0; u < free_idx.size(); ++u)
                g[free_idx[u]] = width[free_idx[u]] * idx[u] / double(G - 1);
            const double v = f(std::span<const double>(g.data(), 3));
            if (v > -inf) starts.emplace_back(v, g);
            std::size_t u = 0;
            for (; u < idx.size(); ++u) {
                if (++idx[u] < G) break;
                idx[u] = 0;
            }
            if (u == idx.size()) break;
        }
        std::sort(starts.begin(), starts.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        const std::size_t nstart = std::min<std::size_t>(8, starts.size());
        for (std::size_t s = 0; s < nstart; ++s) {
            std::vector<double> x0;
            for (int i : free_idx) {
                // Nudge strictly inside so the simplex has room.
                const double eps = 1e-6 * width[i];
                x0.push_back(std::clamp(starts[s].second[i], eps, width[i] - eps));
            }
            detail::WBeastExponent sub = f;
            // Optimize over free coordinates with the frozen ones at 0.
            struct Wrapped {
                const detail::WBeastExponent* f;
                const std::vector<int>* idx;
                double operator()(std::span<const double> x) const {
                    std::array<double, 3> full{0, 0, 0};
                    for (std::size_t u = 0; u < idx->size(); ++u) full[(*idx)[u]] = x[u];
                    return (*f)(std::span<const double>(full.data(), 3));
                }
            };
            // Reuse nelder_mead through a WBeastExponent-compatible shim: run on
            // the full coordinates directly when all are free, else inline a
            // per-axis golden refinement of the frozen-pattern subproblem.
            if (free_idx.size() == 3) {
                std::vector<double> x = x0;
                detail::nelder_mead(f, x, std::max(1e-4, width[0] / (G - 1)));
                std::array<double, 3> cand{x[0], x[1], x[2]};
                const double v = f(std::span<const double>(cand.data(), 3));
                if (v > best + 1e-12 ||
                    (std::abs(v - best) <= 1e-12 && cand < bestk)) {
                    best = v;
                    bestk = cand;
                }
            } else {
                Wrapped w{&sub, &free_idx};
                // Coordinate-wise golden-section refinement, deterministic.
                std::vector<double> x = x0;
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                for (int sweep = 0; sweep < 60; ++sweep) {
                    for (std::size_t u = 0; u < x.size(); ++u) {
                        double lo = 0.0, hi = width[free_idx[u]];
                        double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
                        for (int it = 0; it < 80; ++it) {
                            auto at = [&](double xv) {
                                std::vector<double> y = x;
                                y[u] = xv;
                                return w(std::span<const double>(y));
                            };
                            if (at(c1) < at(c2)) {
                                lo = c1;
                                c1 = c2;
                                c2 = lo + gr * (hi - lo);
                            } else {
                                hi = c2;
                                c2 = c1;
                                c1 = hi - gr * (hi - lo);
                            }
                        }
                        x[u] = 0.5 * (lo + hi);
                    }
                }
                std::array<double, 3> cand{0, 0, 0};
                for (std::size_t u = 0; u < x.size(); ++u) cand[free_idx[u]] = x[u];
                const double v = f(std::span<const double>(cand.data(), 3));
                if (v > best + 1e-12 || (std::abs(v - best) <= 1e-12 && cand < bestk)) {
                    best = v;
                    bestk = cand;
                }
            }
        }
    }

    // Projected-gradient certificate: stationarity of the Stirling exponent,
    // the normalized form of the printed multiplier system.
    double resid = 0;
    {
        const double ksum = bestk[0] + bestk[1] + bestk[2];
        const bool simplex_active = ksum > f.L - 1e-9;
        std::array<double, 3> gvec{0, 0, 0};
        std::vector<int> interior;
        for (int i = 0; i < 3; ++i) {
            const double delta = 1.0 - 2.0 * bar[i];
            if (bestk[i] < 1e-9) {
                // Lower bound: gradient must point outward (<= 0); one-sided.
                std::array<double, 3> probe = bestk;
                probe[i] = std::max(probe[i], 1e-9);
                if (delta > 1e-9 && !simplex_active)
                    resid = std::max(
                        resid, std::max(0.0, f.grad(std::span<const double>(probe.data(), 3), i)));
            } else if (bestk[i] > delta - 1e-9) {
                std::array<double, 3> probe = bestk;
                probe[i] = std::min(probe[i], delta - 1e-9);
                resid = std::max(
                    resid, std::max(0.0, -f.grad(std::span<const double>(probe.data(), 3), i)));
            } else {
                gvec[i] = f.grad(std::span<const double>(bestk.data(), 3), i);
                interior.push_back(i);
            }
        }
        if (!interior.empty()) {
            if (simplex_active) {
                double mu = 0;
                for (int i : interior) mu += gvec[i] / static_cast<double>(interior.size());
                mu = std::max(mu, 0.0);
                for (int i : interior) resid = std::max(resid, std::abs(gvec[i] - mu));
            } else {
                for (int i : interior) resid = std::max(resid, std::abs(gvec[i]));
            }
        }
    }

    RateResult out;
    out.value = lin - (1.0 - lam) * std::log(d) - best;
    out.method = RateMethod::Optimized;
    out.maximizer = bestk;
    out.kkt_residual = resid;
    return out;
}

// --- GHZ-class rates -----------------------------------------------------------

namespace detail {

struct GhzFacetParts {
    double log_det_a, log_det_b, log_det_c;  // log det of the three Gram matrices
    double rep_b, rep_c;                     // rep_matrix_rate terms
    double box;                              // R-tensor box rate
};

inline GhzFacetParts ghz_facet_parts(double bbar2, double gbar2, double delta, double eps,
                                     double theta, double varphi, double phi) {
    const auto [A, B, C] = ghz_family_factors(delta, eps, theta, varphi, phi);
    const NormalizedPartition bb{1.0 - bbar2, bbar2}, gb{1.0 - gbar2, gbar2};
    const Eigen::Matrix2cd GB = B.adjoint() * B, GC = C.adjoint() * C;
    GhzFacetParts parts;
    parts.log_det_a = std::log(std::norm(A.determinant()));
    parts.log_det_b = std::log(std::norm(B.determinant()));
    parts.log_det_c = std::log(std::norm(C.determinant()));
    parts.rep_b = louck::rep_matrix_rate(bb, GB);
    parts.rep_c = louck::rep_matrix_rate(gb, GC);
    parts.box = louck::r_tensor_box_rate(bb, gb);
    return parts;
}

}  // namespace detail

// Box-facet rate phi(box, beta_bar, gamma_bar | five-angle family), the printed
// closed form: every Gram determinant enters with twice the weight of the
// strict composition (see rate_ghz_facet_composed). At the vertex this equals
// -log(tau_3) = -log(4 |D_000|).
inline RateResult rate_ghz_facet(double bbar2, double gbar2, double delta, double eps, double theta,
                                 double varphi, double phi) {
    if (bbar2 < -1e-12 || bbar2 > 0.5 + 1e-12 || gbar2 < -1e-12 || gbar2 > 0.5 + 1e-12)
        throw std::invalid_argument("rate_ghz_facet: second rows lie in [0, 1/2]");
    if (bbar2 + gbar2 < 0.5 - 1e-12)
        throw ImpossibleTriplet("rate_ghz_facet: outside the support beta_bar2 + gamma_bar2 >= 1/2");
    const auto parts = detail::ghz_facet_parts(bbar2, gbar2, delta, eps, theta, varphi, phi);
    auto halve = [](double bar, double log_det) { return bar > 0 ? bar * log_det : 0.0; };
    return {std::log(2.0) - parts.log_det_a - halve(bbar2, parts.log_det_b) - parts.rep_b -
                halve(gbar2, parts.log_det_c) - parts.rep_c - parts.box,
            RateMethod::ClosedForm};
}

// Strict composition of the exact facet probability's factors: the true decay
// exponent of p(box, beta, gamma | psi) as n grows. Coincides with
// rate_ghz_facet on |GHZ> itself, where all Gram determinants are 1.
inline RateResult rate_ghz_facet_composed(double bbar2, double gbar2, double delta, double eps,
                                          double theta, double varphi, double phi) {
    if (bbar2 < -1e-12 || bbar2 > 0.5 + 1e-12 || gbar2 < -1e-12 || gbar2 > 0.5 + 1e-12)
        throw std::invalid_argument("rate_ghz_facet_composed: second rows lie in [0, 1/2]");
    if (bbar2 + gbar2 < 0.5 - 1e-12)
        throw ImpossibleTriplet(
            "rate_ghz_facet_composed: outside the support beta_bar2 + gamma_bar2 >= 1/2");
    const auto parts = detail::ghz_facet_parts(bbar2, gbar2, delta, eps, theta, varphi, phi);
    return {std::log(2.0) - 0.5 * parts.log_det_a - parts.rep_b - parts.rep_c - parts.box,
            RateMethod::ClosedForm};
}

// Bullet-facet rate phi(bullet, beta_bar, beta_bar | GHZ) = log 4 - H(beta_bar).
inline RateResult rate_ghz_bullet(double bbar2) {
    if (bbar2 < -1e-12 || bbar2 > 0.5 + 1e-12)
        throw std::invalid_argument("rate_ghz_bullet: beta_bar2 in [0, 1/2]");
    return {std::log(4.0) - binary_entropy(std::clamp(bbar2, 0.0, 0.5)), RateMethod::ClosedForm};
}

// Exact p(bullet, beta, beta | GHZ): the rep matrices are identities, so the
// double m-sum collapses onto the diagonal R-tensor values,
// 2^{-n} f^beta sum_m 1/binom(n, n/2 + m).
inline double ghz_bullet_probability(long n, long beta2) {
    if (n < 1 || beta2 < 0 || 2 * beta2 > n)
        throw std::invalid_argument("ghz_bullet_probability: beta2 in [0, n/2]");
    const TwoRowPartition be(n - beta2, beta2);
    const double lf = std::log(exact::to_double(partitions::syt_count(be)));
    double s = 0;
    for (long tm = -be.two_j(); tm <= be.two_j(); tm += 2) {
        const long k = (n + tm) / 2;
        s += std::exp(lf - n * std::log(2.0) - std::lgamma(n + 1.0) + std::lgamma(k + 1.0) +
                      std::lgamma(n - k + 1.0));
    }
    return s;
}

// --- extrapolation, convexity, Keyl-Werner --------------------------------------

// Intercept of the least-squares line through (1/n, -log p / n) over the three
// largest n in the sample set.
inline RateResult finite_n_rate(std::span<const std::pair<long, double>> samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("finite_n_rate: need at least three (n, p) samples");
    std::vector<std::pair<long, double>> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        if (!(s[i].second > 0)) throw std::domain_error("finite_n_rate: probabilities must be > 0");
        const double x = 1.0 / static_cast<double>(s[i].first);
        const double y = -std::log(s[i].second) / static_cast<double>(s[i].first);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    return {(sy - slope * sx) / 3.0, RateMethod::FiniteNExtrapolated};
}

enum class Facet { WPlane, GhzBoxFacet };

namespace detail {

// Parallel max of f over [0, count); chunked threads, deterministic reduction.
template <typename F>
double parallel_max(long count, F&& f) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (count < 1024 || hw == 1) {
        double m = -std::numeric_limits<double>::infinity();
        for (long i = 0; i < count; ++i) m = std::max(m, f(i));
        return m;
    }
    const unsigned nt = std::min<unsigned>(hw, 8);
    std::vector<double> local(nt, -std::numeric_limits<double>::infinity());
    std::vector<std::thread> pool;
    const long chunk = (count + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            const long lo = t * chunk, hi = std::min<long>(count, lo + chunk);
            for (long i = lo; i < hi; ++i) local[t] = std::max(local[t], f(i));
        });
    for (auto& th : pool) th.join();
    double m = -std::numeric_limits<double>::infinity();
    for (double v : local) m = std::max(m, v);
    return m;
}

}  // namespace detail

// Max deviation between the relative rate and its vertex convex combination
// over a barycentric grid of the facet. W plane takes params = {a, b, c}; the
// GHZ box facet takes the five family angles. Both identities are exact, so
// the deviation measures only closed-form transcription, not optimization.
inline double convexity_check(Facet facet, std::span<const double> params, int grid_resolution) {
    if (grid_resolution < 1) throw std::invalid_argument("convexity_check: resolution >= 1");
    const long g = grid_resolution;
    const long count = (g + 1) * (g + 2) / 2;

    if (facet == Facet::WPlane) {
        if (params.size() != 3) throw std::invalid_argument("convexity_check: W plane takes {a,b,c}");
        const double a = params[0], b = params[1], c = params[2];
        // Vertices (0,1/2,1/2), (1/2,0,1/2), (1/2,1/2,0) of the plane simplex.
        const double v1 = rate_w_plane_relative(0.0, 0.5, 0.5, a, b, c);
        const double v2 = rate_w_plane_relative(0.5, 0.0, 0.5, a, b, c);
        const double v3 = rate_w_plane_relative(0.5, 0.5, 0.0, a, b, c);
        return detail::parallel_max(count, [&](long idx) {
            long i = 0, rem = idx;
            while (rem > g - i) rem -= g - i + 1, ++i;
            const long j = rem;
            const double u = static_cast<double>(i) / g, v = static_cast<double>(j) / g,
                         w = 1.0 - u - v;
            const double abar = 0.5 * (v + w), bbar = 0.5 * (u + w), gbar = 0.5 * (u + v);
            const double lhs = rate_w_plane_relative(abar, bbar, gbar, a, b, c);
            return std::abs(lhs - (u * v1 + v * v2 + w * v3));
        });
    }

    if (params.size() != 5)
        throw std::invalid_argument("convexity_check: GHZ box facet takes the five angles");
    const double de = params[0], ep = params[1], th = params[2], vp = params[3], ph = params[4];
    auto phi = [&](double bb, double gb) {
        return rate_ghz_facet(bb, gb, de, ep, th, vp, ph).value;
    };
    auto phi_ref = [&](double bb, double gb) {
        // |GHZ> angles: delta = pi/4, the rest pi/2.
        return rate_ghz_facet(bb, gb, std::acos(-1.0) / 4, std::acos(-1.0) / 2,
                              std::acos(-1.0) / 2, std::acos(-1.0) / 2, 0.0)
            .value;
    };
    // Vertices (box,box,box), (box,bullet,box), (box,box,bullet) of the facet.
    const double w1 = phi(0.5, 0.5) - phi_ref(0.5, 0.5);
    const double w2 = phi(0.0, 0.5) - phi_ref(0.0, 0.5);
    const double w3 = phi(0.5, 0.0) - phi_ref(0.5, 0.0);
    return detail::parallel_max(count, [&](long idx) {
        long i = 0, rem = idx;
        while (rem > g - i) rem -= g - i + 1, ++i;
        const long j = rem;
        const double u = static_cast<double>(i) / g, v = static_cast<double>(j) / g,
                     w = 1.0 - u - v;
        const double bb = 0.5 * (u + w), gb = 0.5 * (u + v);
        const double lhs = phi(bb, gb) - phi_ref(bb, gb);
        return std::abs(lhs - (u * w1 + v * w2 + w * w3));
    });
}

struct KeylWernerResult {
    TripletLabel argmax;
    std::array<double, 3> deviation{};  // |argmax second row / n - min local eigenvalue|
    bool tie = false;                   // ties resolved toward the lexicographic smallest
};

// Concentration check: the most probable triplet, normalized by n, against the
// sorted local spectra. Exact three-slot route for n <= 10; per-subsystem
// bipartite Schur-Weyl marginals up to n = 40.
inline KeylWernerResult keyl_werner_check(const ThreeQubitState& state, int n) {
    if (n < 1) throw std::invalid_argument("keyl_werner_check: n >= 1");
    if (n > 40) throw std::length_error("keyl_werner_check: n > 40 exceeds the bipartite cap");

    std::array<double, 3> small_eig{};
    const std::array<states::Subsystem, 3> subsys{states::Subsystem::A, states::Subsystem::B,
                                                  states::Subsystem::C};
    const ThreeQubitState psi = state.normalized();
    for (int r = 0; r < 3; ++r) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(states::reduced_density(psi, subsys[r]));
        small_eig[r] = std::clamp(es.eigenvalues().minCoeff(), 0.0, 0.5);
    }

    KeylWernerResult out{TripletLabel(n, 0, 0, 0), {}, false};
    if (n <= 10) {
        const ProbTable table = copy_probabilities(psi, n);
        double pmax = -1;
        for (const auto& [t, p] : table.entries) {  // map order = lexicographic
            if (p > pmax + 1e-12) {
                pmax = p;
                out.argmax = t;
                out.tie = false;
            } else if (std::abs(p - pmax) <= 1e-12 && !(t == out.argmax)) {
                out.tie = true;
            }
        }
    } else {
        std::array<int, 3> rows{};
        for (int r = 0; r < 3; ++r) {
            const double q = small_eig[r];
            const Complex al = std::sqrt(1.0 - q), bt = std::sqrt(q);
            double pmax = -1;
            for (long lam2 = 0; 2 * lam2 <= n; ++lam2) {
                const double p =
                    bipartite_block_probability(al, bt, n, HalfInt::from_twice(n - 2 * lam2));
                if (p > pmax + 1e-12) {
                    pmax = p;
                    rows[r] = static_cast<int>(lam2);
                } else if (std::abs(p - pmax) <= 1e-12) {
                    out.tie = true;
                }
            }
        }
        out.argmax = TripletLabel(n, rows[0], rows[1], rows[2]);
    }
    const auto bars = out.argmax.normalized();
    for (int r = 0; r < 3; ++r) out.deviation[r] = std::abs(bars[r] - small_eig[r]);
    return out;
}

}  // namespace schurdist::rates
