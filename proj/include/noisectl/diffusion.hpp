#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "noisectl/collab.hpp"
#include "noisectl/decompose.hpp"
#include "noisectl/denoiser.hpp"
#include "noisectl/rng.hpp"
#include "noisectl/tensor.hpp"

namespace noisectl {

// T-step noising schedule with linear betas; alpha_bar is the running
// product of (1 - beta) and is strictly decreasing.
struct DiffusionSchedule {
    std::vector<double> betas;
    std::vector<double> alpha_bars;

    static DiffusionSchedule linear(int64_t steps = 100, double beta_lo = 1e-4, double beta_hi = 0.02);

    int64_t steps() const { return static_cast<int64_t>(betas.size()); }
    double beta(int64_t t) const;        // t in 1..T
    double alpha_bar(int64_t t) const;   // t in 0..T, alpha_bar(0) = 1
    void validate() const;
};

// Forward process: z_t = sqrt(abar_t) * x0 + sqrt(1 - abar_t) * eps.
Tensor noisify(const Tensor& x0, const Tensor& eps, int64_t t, const DiffusionSchedule& sched);

// Masked joint prediction for one frame. Both denoisers see the same noisy
// latent; each prediction is masked by its channel's mask and the two masked
// halves sum to the final predicted noise.
struct JointPrediction {
    Tensor raw_bg, raw_fg;        // unmasked per-channel predictions
    Tensor masked_bg, masked_fg;  // mask-restricted predictions
    Tensor combined;              // final predicted noise
};

JointPrediction predict_joint(const Tensor& z_frame, const MaskVolume& masks, int64_t n,
                              const ConvDenoiser& net_bg, const ConvDenoiser& net_fg,
                              int64_t t, int64_t total_steps);

// eps' supplier for reverse sampling: (z of frame n, n, t) -> combined noise.
using NoisePredictor = std::function<Tensor(const Tensor&, int64_t, int64_t)>;

enum class SamplerKind {
    deterministic,  // noise-free trajectory inversion; exact with an oracle predictor
    ancestral,      // stochastic reverse steps with keyed per-step noise
};

// Runs the reverse chain from step t_start down to 0 on per-frame latents.
// Ancestral steps draw their noise from (key, frame, step), so identical keys
// give identical videos.
std::vector<Tensor> reverse_sample(std::vector<Tensor> z, int64_t t_start,
                                   const DiffusionSchedule& sched, const NoisePredictor& predict,
                                   SamplerKind kind, const StreamKey& key);

struct SampleOptions {
    SamplerKind sampler = SamplerKind::deterministic;
    RollOptions roll;
};

// Full generation: draws the collaborated prior as z_T, then denoises every
// frame jointly. Returns [6, N, C, H, W].
Tensor sample_video(const ConvDenoiser& net_bg, const ConvDenoiser& net_fg,
                    const MaskVolume& masks, const DecompParams& p, const CollabParams& c,
                    const DiffusionSchedule& sched, const std::vector<int64_t>& frame_dims,
                    int64_t n_frames, const StreamKey& key, const SampleOptions& opts = {});

// Stacks per-frame [6,C,H,W] tensors into [6,N,C,H,W] and back.
Tensor stack_frames(const std::vector<Tensor>& frames);
std::vector<Tensor> split_frames(const Tensor& video);

}  // namespace noisectl
