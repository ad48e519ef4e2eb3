// schur.hpp — the qubit Schur transform: basis labels, amplitudes, full transforms
//
// Basis vectors |j, m, mu> with mu a Yamanouchi symbol; the amplitude <j,m,mu|s>
// is the telescoping product of spin-1/2 Clebsch-Gordan coefficients along the
// coupling path mu. Bit conventions: bit b of a sequence carries spin b - 1/2
// (so |11> sits at j=1, m=+1), and sequences map to integers MSB-first, qubit 1
// in the highest bit.

#pragma once

#include "cg.hpp"
#include "partitions.hpp"

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace schurdist::schur {

using exact::HalfInt;
using exact::SqrtRational;
using partitions::TwoRowPartition;
using partitions::YamanouchiSymbol;
using Complex = std::complex<double>;

struct SchurLabel {
    HalfInt j, m;
    YamanouchiSymbol mu;

    int n() const { return static_cast<int>(mu.size()); }
    TwoRowPartition frame() const {
        int twos = 0;
        for (int r : mu) twos += (r == 2);
        return TwoRowPartition(n() - twos, twos);
    }
    friend auto operator<=>(const SchurLabel&, const SchurLabel&) = default;
};

using BitSequence = std::vector<int>;

inline int sequence_index(const BitSequence& s) {
    int v = 0;
    for (int b : s) v = (v << 1) | (b & 1);
    return v;
}
inline BitSequence sequence_from_index(int idx, int n) {
    BitSequence s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = (idx >> (n - 1 - k)) & 1;
    return s;
}

// All labels for n qubits, grouped by frame, ordered (frame dominance, mu lex, m asc).
inline std::vector<SchurLabel> enumerate_labels(int n) {
    std::vector<SchurLabel> out;
    for (const auto& lam : partitions::enumerate_two_row(n)) {
        HalfInt j = lam.j();
        for (const auto& mu : partitions::yamanouchi_symbols(lam))
            for (int tm = -j.tw; tm <= j.tw; tm += 2)
                out.push_back(SchurLabel{j, HalfInt::from_twice(tm), mu});
    }
    return out;
}

// <j,m,mu|s> as an exact product of CG coefficients.
inline SqrtRational schur_amplitude_exact(const SchurLabel& label, const BitSequence& s) {
    const int n = label.n();
    if (static_cast<int>(s.size()) != n) throw std::invalid_argument("schur_amplitude: length mismatch");
    if (n == 0 || label.mu[0] != 1 || !partitions::yamanouchi_valid(label.mu))
        throw std::invalid_argument("schur_amplitude: invalid Yamanouchi symbol");
    // Running (j_k, m_k); m_k is fixed by the bits, j_k by the symbol.
    int two_j = 1, two_m = 2 * s[0] - 1;
    SqrtRational amp = SqrtRational::of(1);
    for (int k = 1; k < n; ++k) {
        int sigma = 2 * s[static_cast<std::size_t>(k)] - 1;
        int two_jn = two_j + (label.mu[static_cast<std::size_t>(k)] == 1 ? +1 : -1);
        int two_mn = two_m + sigma;
        amp *= cg::clebsch_gordan_exact(HalfInt::from_twice(two_j), HalfInt::from_twice(two_m),
                                        HalfInt::from_twice(1), HalfInt::from_twice(sigma),
                                        HalfInt::from_twice(two_jn), HalfInt::from_twice(two_mn));
        if (amp.is_zero()) return amp;
        two_j = two_jn;
        two_m = two_mn;
    }
    if (two_j != label.j.tw || two_m != label.m.tw) return SqrtRational::zero();
    return amp;
}

inline double schur_amplitude(const SchurLabel& label, const BitSequence& s) {
    return schur_amplitude_exact(label, s).value();
}

using SchurVector = std::map<SchurLabel, Complex>;

namespace detail {
struct PathBlock {
    int two_j;
    YamanouchiSymbol mu;
    std::vector<Complex> a;  // [(m index)*(suffix count) + suffix], m = -j + idx
};
}  // namespace detail

// Full transform of a 2^n state vector (MSB-first indexing). One coupling
// cascade, O(n 2^n) up to path bookkeeping; capped to keep memory at desk scale.
inline SchurVector schur_transform(const std::vector<Complex>& amplitudes, int n,
                                   int n_cap = 20) {
    if (n < 1) throw std::invalid_argument("schur_transform: n >= 1");
    if (n > n_cap) throw std::length_error("schur_transform: n exceeds configured cap");
    if (amplitudes.size() != (std::size_t{1} << n))
        throw std::invalid_argument("schur_transform: need 2^n amplitudes");

    std::vector<detail::PathBlock> gen;
    {
        const std::size_t half = std::size_t{1} << (n - 1);
        detail::PathBlock b{1, {1}, std::vector<Complex>(2 * half)};
        for (std::size_t suf = 0; suf < half; ++suf) {
            b.a[0 * half + suf] = amplitudes[suf];         // bit 0 -> m = -1/2
            b.a[1 * half + suf] = amplitudes[half + suf];  // bit 1 -> m = +1/2
        }
        gen.push_back(std::move(b));
    }
    for (int k = 2; k <= n; ++k) {
        const std::size_t suf_in = std::size_t{1} << (n - k + 1);
        const std::size_t suf_out = suf_in / 2;
        std::vector<detail::PathBlock> next;
        next.reserve(gen.size() * 2);
        for (const auto& blk : gen) {
            for (int delta : {+1, -1}) {
                int two_jn = blk.two_j + delta;
                if (two_jn < 0) continue;
                detail::PathBlock nb;
                nb.two_j = two_jn;
                nb.mu = blk.mu;
                nb.mu.push_back(delta == +1 ? 1 : 2);
                nb.a.assign(static_cast<std::size_t>(two_jn + 1) * suf_out, Complex{});
                for (int mi = 0; mi <= two_jn; ++mi) {
                    int two_m = -two_jn + 2 * mi;
                    for (int sigma : {-1, +1}) {
                        int two_m1 = two_m - sigma;
                        if (std::abs(two_m1) > blk.two_j) continue;
                        double c = cg::spin_half_step(blk.two_j, delta, two_m, sigma);
                        if (c == 0.0) continue;
                        int mi1 = (two_m1 + blk.two_j) / 2;
                        int bit = (sigma + 1) / 2;
                        const Complex* src =
                            blk.a.data() + static_cast<std::size_t>(mi1) * suf_in +
                            static_cast<std::size_t>(bit) * suf_out;
                        Complex* dst = nb.a.data() + static_cast<std::size_t>(mi) * suf_out;
                        for (std::size_t suf = 0; suf < suf_out; ++suf) dst[suf] += c * src[suf];
                    }
                }
                next.push_back(std::move(nb));
            }
        }
        gen = std::move(next);
    }

    SchurVector out;
    for (const auto& blk : gen)
        for (int mi = 0; mi <= blk.two_j; ++mi)
            out.emplace(SchurLabel{HalfInt::from_twice(blk.two_j),
                                   HalfInt::from_twice(-blk.two_j + 2 * mi), blk.mu},
                        blk.a[static_cast<std::size_t>(mi)]);
    return out;
}

// Adjoint of schur_transform: rebuilds the 2^n computational-basis vector by
// running the coupling cascade backwards.
inline std::vector<Complex> inverse_schur_transform(const SchurVector& coeffs, int n) {
    if (n < 1) throw std::invalid_argument("inverse_schur_transform: n >= 1");
    std::map<YamanouchiSymbol, detail::PathBlock> gen;
    for (const auto& [label, c] : coeffs) {
        if (label.n() != n) throw std::invalid_argument("inverse_schur_transform: mixed n");
        auto [it, fresh] = gen.try_emplace(label.mu);
        if (fresh) {
            it->second.two_j = label.j.tw;
            it->second.mu = label.mu;
            it->second.a.assign(static_cast<std::size_t>(label.j.tw + 1), Complex{});
        }
        it->second.a[static_cast<std::size_t>((label.m.tw + label.j.tw) / 2)] = c;
    }
    for (int k = n; k >= 2; --k) {
        const std::size_t suf_out = std::size_t{1} << (n - k);  // child suffix count
        const std::size_t suf_in = suf_out * 2;
        std::map<YamanouchiSymbol, detail::PathBlock> parents;
        for (auto& [mu, blk] : gen) {
            int last = mu.back();
            YamanouchiSymbol pmu(mu.begin(), mu.end() - 1);
            int two_jp = blk.two_j + (last == 1 ? -1 : +1);
            auto [it, fresh] = parents.try_emplace(pmu);
            auto& pb = it->second;
            if (fresh) {
                pb.two_j = two_jp;
                pb.mu = pmu;
                pb.a.assign(static_cast<std::size_t>(two_jp + 1) * suf_in, Complex{});
            }
            int delta = blk.two_j - two_jp;
            for (int mi = 0; mi <= two_jp; ++mi) {
                int two_m1 = -two_jp + 2 * mi;
                for (int sigma : {-1, +1}) {
                    int two_m = two_m1 + sigma;
                    if (std::abs(two_m) > blk.two_j) continue;
                    double c = cg::spin_half_step(two_jp, delta, two_m, sigma);
                    if (c == 0.0) continue;
                    int cmi = (two_m + blk.two_j) / 2;
                    int bit = (sigma + 1) / 2;
                    const Complex* src = blk.a.data() + static_cast<std::size_t>(cmi) * suf_out;
                    Complex* dst = pb.a.data() + static_cast<std::size_t>(mi) * suf_in +
                                   static_cast<std::size_t>(bit) * suf_out;
                    for (std::size_t suf = 0; suf < suf_out; ++suf) dst[suf] += c * src[suf];
                }
            }
        }
        gen = std::move(parents);
    }
    std::vector<Complex> out(std::size_t{1} << n, Complex{});
    if (auto it = gen.find(YamanouchiSymbol{1}); it != gen.end()) {
        const std::size_t half = std::size_t{1} << (n - 1);
        for (std::size_t suf = 0; suf < half; ++suf) {
            out[suf] = it->second.a[0 * half + suf];
            out[half + suf] = it->second.a[1 * half + suf];
        }
    }
    return out;
}

}  // namespace schurdist::schur
