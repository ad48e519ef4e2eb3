// covariants.hpp — the SLOCC covariant system of three qubits: A/B/C/D forms,
// hierarchy classification, LU inner products, covariant-to-state conversion,
// and closed-form norms of covariant powers
//
// Conventions fixed here once: gamma^A_{ii'} = eps^{jj'} eps^{kk'} psi_{ijk}
// psi_{i'j'k'} with no 1/2 in front, B_200 the full bilinear (both cross terms
// kept), and D_000 = det gamma^A. Under these choices the syzygy closes as
// C^2 + (1/2) B_200 B_020 B_002 + D_000 A^2 = 0 and tau_3 = 4|D_000|.
// Polynomial exponents track the x_0 power per axis, so a_0 counts zeros.

#pragma once

#include "entropy.hpp"
#include "exact.hpp"
#include "kronecker.hpp"
#include "state.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace schurdist::cov {

using kron::TripletLabel;
using states::Complex;
using states::EntClass;
using states::Subsystem;
using states::ThreeQubitState;

// Polynomial in the auxiliary variables (x, y, z), homogeneous of multidegree
// (p, q, r), stored dense over the x_0/y_0/z_0 exponents (a0, b0, c0).
struct CovariantPoly {
    int psi_degree = 0;
    std::array<int, 3> multidegree{0, 0, 0};
    std::vector<Complex> coeff = {Complex{}};

    static CovariantPoly zero(int d_psi, std::array<int, 3> m) {
        CovariantPoly p;
        p.psi_degree = d_psi;
        p.multidegree = m;
        p.coeff.assign(static_cast<std::size_t>((m[0] + 1)) * (m[1] + 1) * (m[2] + 1), Complex{});
        return p;
    }
    static CovariantPoly constant(Complex v, int d_psi = 0) {
        CovariantPoly p = zero(d_psi, {0, 0, 0});
        p.coeff[0] = v;
        return p;
    }

    std::size_t idx(int a0, int b0, int c0) const {
        return (static_cast<std::size_t>(a0) * (multidegree[1] + 1) + b0) *
                   (multidegree[2] + 1) +
               c0;
    }
    Complex& at(int a0, int b0, int c0) { return coeff[idx(a0, b0, c0)]; }
    const Complex& at(int a0, int b0, int c0) const { return coeff[idx(a0, b0, c0)]; }

    double max_abs() const {
        double m = 0;
        for (const Complex& v : coeff) m = std::max(m, std::abs(v));
        return m;
    }

    friend CovariantPoly operator*(const CovariantPoly& lhs, const CovariantPoly& rhs) {
        CovariantPoly out = zero(lhs.psi_degree + rhs.psi_degree,
                                 {lhs.multidegree[0] + rhs.multidegree[0],
                                  lhs.multidegree[1] + rhs.multidegree[1],
                                  lhs.multidegree[2] + rhs.multidegree[2]});
        for (int a = 0; a <= lhs.multidegree[0]; ++a)
            for (int b = 0; b <= lhs.multidegree[1]; ++b)
                for (int c = 0; c <= lhs.multidegree[2]; ++c) {
                    Complex v = lhs.at(a, b, c);
                    if (v == Complex{}) continue;
                    for (int a2 = 0; a2 <= rhs.multidegree[0]; ++a2)
                        for (int b2 = 0; b2 <= rhs.multidegree[1]; ++b2)
                            for (int c2 = 0; c2 <= rhs.multidegree[2]; ++c2)
                                out.at(a + a2, b + b2, c + c2) += v * rhs.at(a2, b2, c2);
                }
        return out;
    }

    friend CovariantPoly operator+(const CovariantPoly& lhs, const CovariantPoly& rhs) {
        if (lhs.multidegree != rhs.multidegree || lhs.psi_degree != rhs.psi_degree)
            throw std::invalid_argument("CovariantPoly: degree mismatch in +");
        CovariantPoly out = lhs;
        for (std::size_t k = 0; k < out.coeff.size(); ++k) out.coeff[k] += rhs.coeff[k];
        return out;
    }
};

// Sum of |amplitude|^2 of a converted-state cube (or any coefficient cube).
inline double vector_norm2(const CovariantPoly& p) {
    double s = 0;
    for (const Complex& v : p.coeff) s += std::norm(v);
    return s;
}

inline CovariantPoly covariant_A(const ThreeQubitState& s) {
    CovariantPoly p = CovariantPoly::zero(1, {1, 1, 1});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) p.at(1 - i, 1 - j, 1 - k) = s(i, j, k);
    return p;
}

namespace detail {
inline double eps(int a, int b) { return a == b ? 0.0 : (a == 0 ? 1.0 : -1.0); }
}  // namespace detail

// gamma^A_{ii'} = eps^{jj'} eps^{kk'} psi_{ijk} psi_{i'j'k'}; B and C cyclic.
inline Eigen::Matrix2cd gamma_matrix(const ThreeQubitState& s, Subsystem which) {
    using detail::eps;
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            Complex acc = 0;
            for (int u = 0; u < 2; ++u)
                for (int u2 = 0; u2 < 2; ++u2)
                    for (int v = 0; v < 2; ++v)
                        for (int v2 = 0; v2 < 2; ++v2) {
                            double e = eps(u, u2) * eps(v, v2);
                            if (e == 0.0) continue;
                            switch (which) {
                                case Subsystem::A: acc += e * s(p, u, v) * s(q, u2, v2); break;
                                case Subsystem::B: acc += e * s(u, p, v) * s(u2, q, v2); break;
                                case Subsystem::C: acc += e * s(u, v, p) * s(u2, v2, q); break;
                            }
                        }
            g(p, q) = acc;
        }
    return g;
}

// B_200 (axis A), B_020 (axis B), B_002 (axis C): the quadratic form of the
// matching gamma matrix in its own auxiliary variable.
inline CovariantPoly covariant_B(const ThreeQubitState& s, Subsystem axis) {
    Eigen::Matrix2cd g = gamma_matrix(s, axis);
    std::array<int, 3> m{0, 0, 0};
    m[static_cast<int>(axis)] = 2;
    CovariantPoly p = CovariantPoly::zero(2, m);
    auto put = [&](int zeros, Complex v) {
        int a0 = axis == Subsystem::A ? zeros : 0;
        int b0 = axis == Subsystem::B ? zeros : 0;
        int c0 = axis == Subsystem::C ? zeros : 0;
        p.at(a0, b0, c0) = v;
    };
    put(2, g(0, 0));
    put(1, g(0, 1) + g(1, 0));
    put(0, g(1, 1));
    return p;
}

// T_{ijk} of C_111 = T_{ijk} x^i y^j z^k, computed by contracting psi against
// the gamma matrix of the chosen subsystem; all three routes agree.
inline std::array<Complex, 8> t_tensor(const ThreeQubitState& s, Subsystem route) {
    using detail::eps;
    Eigen::Matrix2cd g = gamma_matrix(s, route);
    std::array<Complex, 8> T{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Complex acc = 0;
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v) {
                        if (eps(u, v) == 0.0) continue;
                        switch (route) {
                            case Subsystem::A: acc += eps(u, v) * s(u, j, k) * g(v, i); break;
                            case Subsystem::B: acc += eps(u, v) * s(i, u, k) * g(v, j); break;
                            case Subsystem::C: acc += eps(u, v) * s(i, j, u) * g(v, k); break;
                        }
                    }
                T[static_cast<std::size_t>(4 * i + 2 * j + k)] = acc;
            }
    return T;
}

inline CovariantPoly covariant_C(const ThreeQubitState& s) {
    std::array<Complex, 8> T = t_tensor(s, Subsystem::A);
    CovariantPoly p = CovariantPoly::zero(3, {1, 1, 1});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                p.at(1 - i, 1 - j, 1 - k) = T[static_cast<std::size_t>(4 * i + 2 * j + k)];
    return p;
}

inline Complex covariant_D(const ThreeQubitState& s) {
    return gamma_matrix(s, Subsystem::A).determinant();
}

inline double three_tangle(const ThreeQubitState& s) { return 4.0 * std::abs(covariant_D(s)); }

// Independent tangle route: the degree-four epsilon contraction
// 2 |psi_{ijk} psi_{i'j'm} psi_{npk'} psi_{n'p'm'} e^{ii'} e^{jj'} e^{kk'} e^{nn'} e^{mm'} e^{pp'}|.
inline double three_tangle_contraction(const ThreeQubitState& s) {
    using detail::eps;
    Complex acc = 0;
    for (int i = 0; i < 2; ++i)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j = 0; j < 2; ++j)
                for (int j2 = 0; j2 < 2; ++j2)
                    for (int k = 0; k < 2; ++k)
                        for (int k2 = 0; k2 < 2; ++k2)
                            for (int n = 0; n < 2; ++n)
                                for (int n2 = 0; n2 < 2; ++n2)
                                    for (int m = 0; m < 2; ++m)
                                        for (int m2 = 0; m2 < 2; ++m2)
                                            for (int p = 0; p < 2; ++p)
                                                for (int p2 = 0; p2 < 2; ++p2) {
                                                    double e = eps(i, i2) * eps(j, j2) *
                                                               eps(k, k2) * eps(n, n2) *
                                                               eps(m, m2) * eps(p, p2);
                                                    if (e == 0.0) continue;
                                                    acc += e * s(i, j, k) * s(i2, j2, m) *
                                                           s(n, p, k2) * s(n2, p2, m2);
                                                }
    return 2.0 * std::abs(acc);
}

// Walks the covariant hierarchy top-down. Nonzeroness of a degree-d covariant
// means max |coefficient| > tol * ||psi||^d, which is scale-free.
inline EntClass classify(const ThreeQubitState& s, double tol = 1e-9) {
    double nrm = s.norm();
    auto alive = [&](double mag, int deg) { return mag > tol * std::pow(nrm, deg); };

    if (alive(std::abs(covariant_D(s)), 4)) return EntClass::GHZ;
    if (alive(covariant_C(s).max_abs(), 3)) return EntClass::W;
    bool b200 = alive(covariant_B(s, Subsystem::A).max_abs(), 2);
    bool b020 = alive(covariant_B(s, Subsystem::B).max_abs(), 2);
    bool b002 = alive(covariant_B(s, Subsystem::C).max_abs(), 2);
    if (b200 && !b020 && !b002) return EntClass::BiseparableA_BC;
    if (b020 && !b200 && !b002) return EntClass::BiseparableAC_B;
    if (b002 && !b200 && !b020) return EntClass::BiseparableAB_C;
    if (alive(covariant_A(s).max_abs(), 1)) return EntClass::SeparableABC;
    return EntClass::Null;
}

// <P|Q> over the auxiliary variables: conj(P) Q summed with the permanental
// weight a0! a1! b0! b1! c0! c1! / (a! b! c!), which is one over the product
// of binomials. Different multidegrees are orthogonal.
inline Complex lu_inner_product(const CovariantPoly& P, const CovariantPoly& Q) {
    if (P.multidegree != Q.multidegree) return Complex{};
    auto [p, q, r] = P.multidegree;
    Complex acc = 0;
    for (int a0 = 0; a0 <= p; ++a0)
        for (int b0 = 0; b0 <= q; ++b0)
            for (int c0 = 0; c0 <= r; ++c0) {
                Complex v = std::conj(P.at(a0, b0, c0)) * Q.at(a0, b0, c0);
                if (v == Complex{}) continue;
                double w = exact::to_double(exact::binomial(p, a0)) *
                           exact::to_double(exact::binomial(q, b0)) *
                           exact::to_double(exact::binomial(r, c0));
                acc += v / w;
            }
    return acc;
}

// K with the Kempe normalization that makes the <T|T> relation close:
// K = 3 Tr[(rho_A ⊗ rho_B) rho_AB] − Tr rho_A^3 − Tr rho_B^3.
inline double kempe_invariant(const ThreeQubitState& s) {
    Eigen::Matrix2cd ra = states::reduced_density(s, Subsystem::A);
    Eigen::Matrix2cd rb = states::reduced_density(s, Subsystem::B);
    Eigen::Matrix4cd rab = states::rho_pair(s, Subsystem::C);
    Eigen::Matrix4cd kron_ab = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    kron_ab(2 * i + k, 2 * j + l) = ra(i, j) * rb(k, l);
    double t1 = (kron_ab * rab).trace().real();
    double t2 = (ra * ra * ra).trace().real();
    double t3 = (rb * rb * rb).trace().real();
    return 3.0 * t1 - t2 - t3;
}

// |<T|T> − (2/3)(K − ||psi||^6) − (||psi||^2/16)(S_A + S_B + S_C)| with
// S_X = 16 det rho_X = 4 Tr[gamma gamma^dag + gamma gamma^dag] of the other
// two subsystems.
inline double kempe_relation_residual(const ThreeQubitState& s) {
    CovariantPoly c = covariant_C(s);
    double lhs = lu_inner_product(c, c).real();
    double n2 = s.norm2();
    double sa = 16.0 * states::reduced_density(s, Subsystem::A).determinant().real();
    double sb = 16.0 * states::reduced_density(s, Subsystem::B).determinant().real();
    double sc = 16.0 * states::reduced_density(s, Subsystem::C).determinant().real();
    double rhs = (2.0 / 3.0) * (kempe_invariant(s) - n2 * n2 * n2) + (n2 / 16.0) * (sa + sb + sc);
    return std::abs(lhs - rhs);
}

// Max |coefficient| of C^2 + (1/2) B_200 B_020 B_002 + D_000 A^2; identically
// zero in exact arithmetic.
inline double syzygy_residual(const ThreeQubitState& s) {
    CovariantPoly a = covariant_A(s);
    CovariantPoly c = covariant_C(s);
    CovariantPoly bbb = covariant_B(s, Subsystem::A) * covariant_B(s, Subsystem::B) *
                        covariant_B(s, Subsystem::C);
    CovariantPoly lhs = c * c + CovariantPoly::constant(0.5) * bbb +
                        CovariantPoly::constant(covariant_D(s), 4) * (a * a);
    return lhs.max_abs();
}

// Phi(n_vec) = A^{n1} B_200^{n2} B_020^{n3} B_002^{n4} C^{n5} D^{n6}; the box
// count n1 + 2(n2+n3+n4) + 3 n5 + 4 n6 is the copy number n.
inline CovariantPoly covariant_power(const ThreeQubitState& s, const std::array<long, 6>& n_vec) {
    for (long v : n_vec)
        if (v < 0) throw std::invalid_argument("covariant_power: negative exponent");
    long n = n_vec[0] + 2 * (n_vec[1] + n_vec[2] + n_vec[3]) + 3 * n_vec[4] + 4 * n_vec[5];
    if (n > 60) throw std::overflow_error("covariant_power: more than 60 copies");

    CovariantPoly acc = CovariantPoly::constant(1.0);
    auto raise = [&acc](const CovariantPoly& f, long times) {
        for (long t = 0; t < times; ++t) acc = acc * f;
    };
    raise(covariant_A(s), n_vec[0]);
    raise(covariant_B(s, Subsystem::A), n_vec[1]);
    raise(covariant_B(s, Subsystem::B), n_vec[2]);
    raise(covariant_B(s, Subsystem::C), n_vec[3]);
    raise(covariant_C(s), n_vec[4]);
    if (n_vec[5] > 0) {
        Complex d = covariant_D(s), dp = 1.0;
        for (long t = 0; t < n_vec[5]; ++t) dp *= d;
        acc = acc * CovariantPoly::constant(dp, static_cast<int>(4 * n_vec[5]));
    }
    return acc;
}

// Coefficients divided by the sqrt-binomial normalizers: the amplitude cube of
// the (un-normalized, eta = 1) state |Phi> in V_alpha x V_beta x V_gamma,
// indexed by zero counts per axis. P must have multidegree
// (n − 2 alpha2, n − 2 beta2, n − 2 gamma2).
inline CovariantPoly covariant_to_state(const CovariantPoly& P, int n, const TripletLabel& t) {
    if (t.n != n) throw std::invalid_argument("covariant_to_state: copy count disagrees with triplet");
    std::array<int, 3> want{n - 2 * t.alpha2, n - 2 * t.beta2, n - 2 * t.gamma2};
    if (P.multidegree != want)
        throw std::invalid_argument("covariant_to_state: multidegree does not fit the triplet");
    CovariantPoly out = P;
    auto [p, q, r] = P.multidegree;
    for (int a0 = 0; a0 <= p; ++a0)
        for (int b0 = 0; b0 <= q; ++b0)
            for (int c0 = 0; c0 <= r; ++c0)
                out.at(a0, b0, c0) /= std::sqrt(exact::to_double(exact::binomial(p, a0)) *
                                                exact::to_double(exact::binomial(q, b0)) *
                                                exact::to_double(exact::binomial(r, c0)));
    return out;
}

// <Phi_W|Phi_W> closed form for the W family sqrt(a)|100> + sqrt(b)|010> +
// sqrt(c)|001> + sqrt(d)|000>, second-row shorthand, eta = 1. Outside the W
// region (no n6 = 0 decomposition) the triplet carries nothing: 0.
inline double phi_norm_w(double a, double b, double c, double d, const TripletLabel& t) {
    if (a < 0 || b < 0 || c < 0 || d < 0 || std::abs(a + b + c + d - 1.0) > 1e-9)
        throw std::invalid_argument("phi_norm_w: parameters must be a probability vector");
    auto dec = kron::decomposition_at(t, 0);
    if (!dec) return 0.0;
    long n1 = dec->n_vec[0];
    int al = t.alpha2, be = t.beta2, ga = t.gamma2;
    auto binom = [](long nn, long kk) { return exact::to_double(exact::binomial(nn, kk)); };

    double total = 0.0;
    for (long k1 = 0; k1 <= std::min<long>(n1, t.n - 2 * al); ++k1)
        for (long k2 = 0; k1 + k2 <= n1 && k2 <= t.n - 2 * be; ++k2)
            for (long k3 = 0; k1 + k2 + k3 <= n1 && k3 <= t.n - 2 * ga; ++k3) {
                double multi =
                    exact::to_double(exact::multinomial(n1, {k1, k2, k3, n1 - k1 - k2 - k3}));
                double den = binom(t.n - 2 * al, k1) * binom(t.n - 2 * be, k2) *
                             binom(t.n - 2 * ga, k3);
                if (d > 0) {
                    total += multi * multi * std::pow(a / d, double(k1)) *
                             std::pow(b / d, double(k2)) * std::pow(c / d, double(k3)) / den;
                } else if (k1 + k2 + k3 == n1) {
                    // d = 0: the surviving terms, expanded directly.
                    total += multi * multi * std::pow(a, double(k1)) * std::pow(b, double(k2)) *
                             std::pow(c, double(k3)) / den;
                }
            }
    double pref = std::pow(a, al) * std::pow(b, be) * std::pow(c, ga);
    if (d > 0) pref *= std::pow(d, double(n1));
    return pref * total;
}

// <Phi_GHZ|Phi_GHZ> for the five-angle family, eta = 1, component n6 = i.
// Works for any triplet whose multiplicity is at most one (in particular the
// bullet and box facets); larger multiplicities mix components and are out of
// scope. Returns 0 when (triplet, i) admits no decomposition.
inline double phi_norm_ghz(double delta, double eps_angle, double theta, double varphi,
                           double phi_angle, const TripletLabel& t, long i) {
    if (kron::kronecker_two_row(t) > 1)
        throw std::domain_error("phi_norm_ghz: triplet with multiplicity > 1 unsupported");
    auto dec = kron::decomposition_at(t, i);
    if (!dec) return 0.0;
    auto [n1, n2, n3, n4, n5, n6] = dec->n_vec;

    double cd = std::cos(delta), sd = std::sin(delta);
    double ce = std::cos(eps_angle), se = std::sin(eps_angle);
    double ct = std::cos(theta), st = std::sin(theta);
    double cv = std::cos(varphi), sv = std::sin(varphi);
    double kden = 1.0 + 2.0 * cd * sd * ce * ct * cv * std::cos(phi_angle);
    if (kden <= 0) throw std::invalid_argument("phi_norm_ghz: family normalization diverges");
    double K = 1.0 / kden;

    // (cd x0y0z0 + e^{i phi} sd xi xi xi)^{n1} (cd x0y0z0 - e^{i phi} sd xi xi xi)^{n5}
    // collected by the power j of the second branch.
    long J = n1 + n5;
    std::vector<Complex> cj(static_cast<std::size_t>(J) + 1);
    for (long j = 0; j <= J; ++j) {
        double base = exact::to_double(exact::binomial(n1, j));
        if (n5 == 1 && j >= 1) base -= exact::to_double(exact::binomial(n1, j - 1));
        cj[static_cast<std::size_t>(j)] = base * std::pow(cd, double(J - j)) *
                                          std::pow(sd, double(j)) *
                                          std::exp(Complex(0.0, phi_angle * double(j)));
    }

    auto binom = [](long nn, long kk) { return exact::to_double(exact::binomial(nn, kk)); };
    long p = t.n - 2 * t.alpha2, q = t.n - 2 * t.beta2, r = t.n - 2 * t.gamma2;
    double total = 0.0;
    for (long k1 = 0; k1 <= p; ++k1)
        for (long k2 = 0; k2 <= q; ++k2)
            for (long k3 = 0; k3 <= r; ++k3) {
                Complex amp = 0;
                for (long j = 0; j <= J; ++j)
                    amp += cj[static_cast<std::size_t>(j)] * binom(n2 + j, k1) *
                           std::pow(ce, double(n2 + j - k1)) * std::pow(se, double(k1)) *
                           binom(n3 + j, k2) * std::pow(ct, double(n3 + j - k2)) *
                           std::pow(st, double(k2)) * binom(n4 + j, k3) *
                           std::pow(cv, double(n4 + j - k3)) * std::pow(sv, double(k3));
                total += std::norm(amp) / (binom(p, k1) * binom(q, k2) * binom(r, k3));
            }

    // Each B carries the sines of the two subsystems it does not touch, D all
    // three squared; read off from the exact gamma matrices of the family.
    double G = std::pow(4.0, double(n6)) * std::pow(K, t.n / 2.0) *
               std::pow(cd * sd, double(n2 + n3 + n4 + 2 * n6)) *
               std::pow(se, double(n3 + n4 + 2 * n6)) * std::pow(st, double(n2 + n4 + 2 * n6)) *
               std::pow(sv, double(n2 + n3 + 2 * n6));
    if (n5 == 1) G *= 0.5 * cd * sd * se * st * sv;
    return G * G * total;
}

}  // namespace schurdist::cov
