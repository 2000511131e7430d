#pragma once

#include <cstdint>

#include "noisectl/tensor.hpp"

namespace noisectl {

// Lane tags for the component field of StreamKey. Keeping every consumer on
// its own tag guarantees streams never collide across pipeline stages.
enum class NoiseLane : uint32_t {
    shared_bg = 1,
    shared_fg = 2,
    residual_bg = 3,
    residual_fg = 4,
    reverse_step = 5,
    weights = 6,
    fit_history = 7,
    timestep_pick = 8,
    generic = 9,
};

// Identifies one deterministic sample stream. Identical keys reproduce
// identical draws regardless of evaluation order or thread count: each
// element of a draw is derived purely from (key, element index).
struct StreamKey {
    uint64_t seed = 0;
    uint32_t view = 0;
    uint32_t frame = 0;
    uint32_t channel = 0;    // 0 background, 1 foreground (or ad hoc)
    NoiseLane component = NoiseLane::generic;
    uint64_t draw = 0;       // draw counter within the lane

    StreamKey with_view(uint32_t m) const { StreamKey k = *this; k.view = m; return k; }
    StreamKey with_frame(uint32_t n) const { StreamKey k = *this; k.frame = n; return k; }
    StreamKey with_draw(uint64_t d) const { StreamKey k = *this; k.draw = d; return k; }

    uint64_t state() const;
};

// 64-bit finalizer-style mixer; stateless, so (key, counter) -> word is a
// pure function.
uint64_t mix64(uint64_t x);

// Uniform in (0,1), derived from (key state, counter).
double uniform01(uint64_t state, uint64_t counter);

// i.i.d. N(0, variance) draws of the given shape. variance 0 gives zeros;
// negative variance is a parameter error.
Tensor gaussian_sample(const std::vector<int64_t>& shape, double variance, const StreamKey& key);

// Single standard normal for scalar consumers (reverse steps etc.).
double gaussian_scalar(const StreamKey& key, uint64_t counter);

// Uniform integer in [lo, hi], inclusive.
int64_t uniform_int(const StreamKey& key, uint64_t counter, int64_t lo, int64_t hi);

}  // namespace noisectl
