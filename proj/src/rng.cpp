#include "noisectl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace noisectl {

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t StreamKey::state() const {
    uint64_t s = mix64(seed);
    s = mix64(s ^ (static_cast<uint64_t>(view) | (static_cast<uint64_t>(frame) << 32)));
    s = mix64(s ^ (static_cast<uint64_t>(channel) |
                   (static_cast<uint64_t>(static_cast<uint32_t>(component)) << 32)));
    s = mix64(s ^ draw);
    return s;
}

double uniform01(uint64_t state, uint64_t counter) {
    uint64_t w = mix64(state + counter * 0x9E3779B97F4A7C15ull);
    // 53-bit mantissa, offset by half an ulp so the value is never 0 or 1
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

static double normal_from(uint64_t state, uint64_t index) {
    double u1 = uniform01(state, 2 * index);
    double u2 = uniform01(state, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Tensor gaussian_sample(const std::vector<int64_t>& shape, double variance, const StreamKey& key) {
    if (variance < 0.0)
        throw std::invalid_argument("gaussian_sample: negative variance");
    Tensor out(shape);
    if (variance == 0.0) return out;
    double sd = std::sqrt(variance);
    uint64_t st = key.state();
    double* p = out.data();
    for (int64_t i = 0; i < out.numel(); ++i)
        p[i] = sd * normal_from(st, static_cast<uint64_t>(i));
    return out;
}

double gaussian_scalar(const StreamKey& key, uint64_t counter) {
    return normal_from(key.state(), counter);
}

int64_t uniform_int(const StreamKey& key, uint64_t counter, int64_t lo, int64_t hi) {
    if (hi < lo)
        throw std::invalid_argument("uniform_int: bad range");
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    uint64_t w = mix64(key.state() + counter * 0x9E3779B97F4A7C15ull);
    return lo + static_cast<int64_t>(w % span);
}

}  // namespace noisectl
