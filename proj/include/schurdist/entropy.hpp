// entropy.hpp — Shannon entropy and KL divergence helpers (nats unless stated)

#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace schurdist {

// 0*log(0) = 0 by continuity everywhere in this library.
inline double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

inline double shannon(std::span<const double> p) {
    double h = 0;
    for (double x : p) {
        if (x < -1e-12) throw std::domain_error("shannon: negative probability");
        h -= xlogx(x < 0 ? 0.0 : x);
    }
    return h;
}
inline double shannon(std::initializer_list<double> p) {
    return shannon(std::span<const double>(p.begin(), p.size()));
}

inline double binary_entropy(double p) { return shannon({p, 1.0 - p}); }
inline double binary_entropy_bits(double p) { return binary_entropy(p) / std::log(2.0); }

// KL divergence D(p||q); p_i > 0 with q_i = 0 gives +infinity.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0) continue;
        if (q[i] <= 0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}
inline double kl_divergence(std::initializer_list<double> p, std::initializer_list<double> q) {
    return kl_divergence(std::span<const double>(p.begin(), p.size()),
                         std::span<const double>(q.begin(), q.size()));
}

}  // namespace schurdist
