#ifndef PIR_RNG_HPP
#define PIR_RNG_HPP

// Counter-based random streams.
//
// A stream is identified by (seed, stream_id). Draw k of a stream is
// mix64(key + k * golden_gamma), with key derived from the identity and mix64
// the SplitMix64 finalizer. Only integer arithmetic is involved up to the
// uniform draw, so the uniform sequence is bit-identical on every platform.
// Normal draws use the Marsaglia polar method (sqrt and log from <cmath>).

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pir/errors.hpp"

namespace pir {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stable stream id from a list of integer coordinates (cell, replication, ...).
constexpr std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t part : parts) {
        h = mix64(h ^ mix64(part + 0x9E3779B97F4A7C15ULL));
    }
    return h;
}

/// Raw bits of a double, for hashing real-valued coordinates.
inline std::uint64_t bits_of(double x) noexcept { return std::bit_cast<std::uint64_t>(x); }

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed),
          stream_id_(stream_id),
          key_(mix64(mix64(seed ^ 0x243F6A8885A308D3ULL) ^ (stream_id * 0xD1B54A32D192ED03ULL + 1))) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double standard_normal() noexcept {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        return u * factor;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_;
};

inline std::vector<double> sample_standard_normal(RngStream& stream, std::size_t count) {
    std::vector<double> out(count);
    for (auto& v : out) v = stream.standard_normal();
    return out;
}

/// n x p matrix whose rows are i.i.d. normal with unit variances and common
/// pairwise correlation rho_x: sqrt(rho_x) * Z0 + sqrt(1 - rho_x) * Zj.
/// Draws are taken row by row; the shared factor is drawn only when rho_x > 0.
inline Eigen::MatrixXd sample_equicorrelated_normal(RngStream& stream, Eigen::Index n, Eigen::Index p,
                                                    double rho_x) {
    if (!(rho_x >= 0.0 && rho_x < 1.0)) {
        throw DomainError("equicorrelation rho_x must lie in [0,1)");
    }
    if (p < 1 || n < 0) throw DimensionError("equicorrelated sample needs p >= 1 and n >= 0");
    const double shared = std::sqrt(rho_x);
    const double own = std::sqrt(1.0 - rho_x);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z0 = rho_x > 0.0 ? stream.standard_normal() : 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            x(i, j) = shared * z0 + own * stream.standard_normal();
        }
    }
    return x;
}

}  // namespace pir

#endif  // PIR_RNG_HPP
