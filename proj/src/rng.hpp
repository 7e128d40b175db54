#pragma once

#include <cmath>
#include <cstdint>

#include "tensor.hpp"

namespace mpdcnn {

// Counter-based deterministic generator. A draw depends only on (seed, pos),
// so any (seed, pos) pair replays the exact same stream. No global state.
struct RngState {
    uint64_t seed = 0;
    uint64_t pos = 0;
};

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
}  // namespace detail

inline uint64_t rng_next_u64(RngState& s) {
    uint64_t v = detail::mix64(s.seed + (s.pos + 1) * 0x9e3779b97f4a7c15ULL);
    ++s.pos;
    return v;
}

// Derives an independent sub-stream; deterministic in (parent seed, tag) and
// independent of the parent's position, so parallel consumers never interact.
inline RngState rng_split(const RngState& s, uint64_t tag) {
    RngState out;
    out.seed = detail::mix64(s.seed ^ detail::mix64(tag + 0x632be59bd9b4e019ULL));
    out.pos = 0;
    return out;
}

// Uniform in [0, 1) with 53 random bits.
inline double rng_unit(RngState& s) {
    return static_cast<double>(rng_next_u64(s) >> 11) * 0x1.0p-53;
}

inline double rng_uniform(RngState& s, double a, double b) {
    require(b >= a, ErrorKind::argument, "uniform bounds reversed");
    return a + rng_unit(s) * (b - a);
}

// Box-Muller; consumes two raw draws per sample.
inline double rng_normal(RngState& s, double mu, double sigma) {
    require(sigma >= 0.0, ErrorKind::argument, "normal sigma must be >= 0");
    double u1 = rng_unit(s);
    double u2 = rng_unit(s);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(2.0 * M_PI * u2);
}

inline bool rng_bernoulli(RngState& s, double p) {
    require(p >= 0.0 && p <= 1.0, ErrorKind::argument,
            "bernoulli p must be in [0, 1]");
    return rng_unit(s) < p;
}

template <typename T>
Tensor<T> draw_uniform(RngState& s, Shape shape, double a, double b) {
    Tensor<T> t(std::move(shape));
    for (int64_t i = 0; i < t.numel(); ++i)
        t[i] = static_cast<T>(rng_uniform(s, a, b));
    return t;
}

template <typename T>
Tensor<T> draw_normal(RngState& s, Shape shape, double mu, double sigma) {
    Tensor<T> t(std::move(shape));
    for (int64_t i = 0; i < t.numel(); ++i)
        t[i] = static_cast<T>(rng_normal(s, mu, sigma));
    return t;
}

template <typename T>
Tensor<T> draw_bernoulli(RngState& s, Shape shape, double p) {
    Tensor<T> t(std::move(shape));
    for (int64_t i = 0; i < t.numel(); ++i)
        t[i] = rng_bernoulli(s, p) ? T{1} : T{0};
    return t;
}

}  // namespace mpdcnn
