// state.hpp — three-qubit pure states: storage, families, reductions, spectra, io
//
// Amplitudes live in a flat array indexed row-major over (i,j,k): psi[4i+2j+k].
// Reduced density matrices keep the same qubit order, so rho_pair(AB) is the
// 4x4 matrix over |ij> obtained by tracing out the third qubit. The JSON wire
// format is {"psi": [[re,im] x 8]} in the same row-major order.

#pragma once

#include "entropy.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace schurdist::states {

using Complex = std::complex<double>;

enum class Subsystem { A, B, C };

// SLOCC orbit labels; Null is the zero vector. The biseparable names read
// "entangled pair - spectator".
enum class EntClass { Null, SeparableABC, BiseparableAB_C, BiseparableA_BC, BiseparableAC_B, W, GHZ };

inline const char* to_string(EntClass c) {
    switch (c) {
        case EntClass::Null: return "null";
        case EntClass::SeparableABC: return "A-B-C";
        case EntClass::BiseparableAB_C: return "AB-C";
        case EntClass::BiseparableA_BC: return "A-BC";
        case EntClass::BiseparableAC_B: return "AC-B";
        case EntClass::W: return "W";
        case EntClass::GHZ: return "GHZ";
    }
    return "?";
}

struct ThreeQubitState {
    std::array<Complex, 8> psi{};

    static int index(int i, int j, int k) { return 4 * i + 2 * j + k; }

    Complex& operator()(int i, int j, int k) { return psi[static_cast<std::size_t>(index(i, j, k))]; }
    const Complex& operator()(int i, int j, int k) const {
        return psi[static_cast<std::size_t>(index(i, j, k))];
    }

    double norm2() const {
        double s = 0;
        for (const Complex& a : psi) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        for (const Complex& a : psi)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
        return true;
    }

    ThreeQubitState normalized() const {
        double nrm = norm();
        if (nrm <= 0) throw std::invalid_argument("ThreeQubitState: cannot normalize zero state");
        ThreeQubitState out = *this;
        for (Complex& a : out.psi) a /= nrm;
        return out;
    }

    friend bool operator==(const ThreeQubitState&, const ThreeQubitState&) = default;
};

inline ThreeQubitState basis_state(int i, int j, int k) {
    ThreeQubitState s;
    s(i, j, k) = 1.0;
    return s;
}

// (|000> + |111>)/sqrt(2)
inline ThreeQubitState ghz() {
    ThreeQubitState s;
    s(0, 0, 0) = s(1, 1, 1) = 1.0 / std::sqrt(2.0);
    return s;
}

// (|100> + |010> + |001>)/sqrt(3)
inline ThreeQubitState w() {
    ThreeQubitState s;
    s(1, 0, 0) = s(0, 1, 0) = s(0, 0, 1) = 1.0 / std::sqrt(3.0);
    return s;
}

// sqrt(a)|100> + sqrt(b)|010> + sqrt(c)|001> + sqrt(d)|000>; the W class proper
// needs a,b,c > 0 (d may vanish), and a+b+c+d = 1 makes it a unit vector.
inline ThreeQubitState w_family(double a, double b, double c, double d) {
    if (a < 0 || b < 0 || c < 0 || d < 0)
        throw std::invalid_argument("w_family: parameters must be non-negative");
    ThreeQubitState s;
    s(1, 0, 0) = std::sqrt(a);
    s(0, 1, 0) = std::sqrt(b);
    s(0, 0, 1) = std::sqrt(c);
    s(0, 0, 0) = std::sqrt(d);
    return s;
}

// sqrt(K) (cos(delta)|000> + sin(delta) e^{i phi} |phi_A>|phi_B>|phi_C>) with
// |phi_A> = cos(eps)|0> + sin(eps)|1> and likewise theta, varphi for B, C.
// K normalizes the overlap between the two branches.
inline ThreeQubitState ghz_family(double delta, double eps, double theta, double varphi,
                                  double phi) {
    double cd = std::cos(delta), sd = std::sin(delta);
    double K = 1.0 / (1.0 + 2.0 * cd * sd * std::cos(eps) * std::cos(theta) * std::cos(varphi) *
                                std::cos(phi));
    Complex branch = sd * std::exp(Complex(0.0, phi));
    std::array<double, 2> qa{std::cos(eps), std::sin(eps)};
    std::array<double, 2> qb{std::cos(theta), std::sin(theta)};
    std::array<double, 2> qc{std::cos(varphi), std::sin(varphi)};
    ThreeQubitState s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) s(i, j, k) = branch * qa[i] * qb[j] * qc[k];
    s(0, 0, 0) += cd;
    for (Complex& a : s.psi) a *= std::sqrt(K);
    return s;
}

// psi'_{ijk} = sum A_{ii'} B_{jj'} C_{kk'} psi_{i'j'k'}
inline ThreeQubitState apply_local(const ThreeQubitState& s, const Eigen::Matrix2cd& A,
                                   const Eigen::Matrix2cd& B, const Eigen::Matrix2cd& C) {
    ThreeQubitState out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Complex acc = 0;
                for (int i2 = 0; i2 < 2; ++i2)
                    for (int j2 = 0; j2 < 2; ++j2)
                        for (int k2 = 0; k2 < 2; ++k2)
                            acc += A(i, i2) * B(j, j2) * C(k, k2) * s(i2, j2, k2);
                out(i, j, k) = acc;
            }
    return out;
}

inline Eigen::Matrix2cd reduced_density(const ThreeQubitState& s, Subsystem which) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    Complex term;
                    switch (which) {
                        case Subsystem::A: term = s(p, u, v) * std::conj(s(q, u, v)); break;
                        case Subsystem::B: term = s(u, p, v) * std::conj(s(u, q, v)); break;
                        case Subsystem::C: term = s(u, v, p) * std::conj(s(u, v, q)); break;
                    }
                    rho(p, q) += term;
                }
    return rho;
}

// rho over the pair complementary to `traced_out`, basis |ij> with the pair in
// original qubit order (A before B before C).
inline Eigen::Matrix4cd rho_pair(const ThreeQubitState& s, Subsystem traced_out) {
    auto amp = [&](int p, int q, int t) {
        switch (traced_out) {
            case Subsystem::C: return s(p, q, t);
            case Subsystem::B: return s(p, t, q);
            default: return s(t, p, q);
        }
    };
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int r = 0; r < 2; ++r)
                for (int w = 0; w < 2; ++w)
                    for (int t = 0; t < 2; ++t)
                        rho(2 * p + q, 2 * r + w) += amp(p, q, t) * std::conj(amp(r, w, t));
    return rho;
}

// von Neumann entropy of the one-qubit marginal, nats.
inline double local_entropy(const ThreeQubitState& s, Subsystem which) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(reduced_density(s, which));
    std::array<double, 2> p{std::max(es.eigenvalues()(0), 0.0), std::max(es.eigenvalues()(1), 0.0)};
    return shannon(std::span<const double>(p.data(), p.size()));
}

inline int local_rank(const ThreeQubitState& s, Subsystem which, double tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(reduced_density(s, which));
    int r = 0;
    for (int i = 0; i < 2; ++i) r += (es.eigenvalues()(i) > tol);
    return r;
}

// Wootters concurrence of a two-qubit density matrix; validates Hermiticity,
// unit trace, and positivity within tol before evaluating.
inline double concurrence(const Eigen::Matrix4cd& rho, double tol = 1e-9) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("concurrence: density matrix not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > tol)
        throw std::invalid_argument("concurrence: density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho);
    if (herm.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("concurrence: density matrix not positive semidefinite");

    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();  // sigma_y (x) sigma_y
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;
    Eigen::Matrix4cd R = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(R);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// E_F = h((1 + sqrt(1 - C^2))/2) in bits.
inline double entanglement_of_formation(const Eigen::Matrix4cd& rho, double tol = 1e-9) {
    double c = concurrence(rho, tol);
    return binary_entropy_bits(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

inline ThreeQubitState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ThreeQubitState s;
    for (Complex& a : s.psi) a = Complex(gauss(rng), gauss(rng));
    return s.normalized();
}

// Haar 2x2 unitary: QR of a Ginibre matrix with the R diagonal phase fixed.
inline Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::Matrix2cd z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
    Eigen::Matrix2cd q = qr.householderQ();
    Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

// Random invertible local factor, scaled to unit determinant.
inline Eigen::Matrix2cd random_sl2(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    while (true) {
        Eigen::Matrix2cd z;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
        Complex det = z.determinant();
        if (std::abs(det) > 1e-3) return z / std::sqrt(det);
    }
}

inline nlohmann::json to_json(const ThreeQubitState& s) {
    nlohmann::json amps = nlohmann::json::array();
    for (const Complex& a : s.psi) amps.push_back({a.real(), a.imag()});
    return nlohmann::json{{"psi", amps}};
}

inline ThreeQubitState state_from_json(const nlohmann::json& j) {
    if (!j.contains("psi") || !j["psi"].is_array() || j["psi"].size() != 8)
        throw std::invalid_argument("state_from_json: need \"psi\" as an 8-element array");
    ThreeQubitState s;
    for (std::size_t idx = 0; idx < 8; ++idx) {
        const auto& pair = j["psi"][idx];
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("state_from_json: each amplitude is a [re, im] pair");
        s.psi[idx] = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    if (!s.finite()) throw std::invalid_argument("state_from_json: non-finite amplitude");
    return s;
}

}  // namespace schurdist::states
