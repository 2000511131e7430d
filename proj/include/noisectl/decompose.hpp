#pragma once

#include <cstdint>
#include <vector>

#include "noisectl/rng.hpp"
#include "noisectl/tensor.hpp"

namespace noisectl {

// Variance split of the two-level decomposition. eta controls the background
// channel, lambda the foreground one; shared and residual variances of each
// channel sum to 1 by construction, so the composed noise is unit variance.
struct DecompParams {
    double eta = 1.0;
    double lambda = 1.0;

    double shared_var_bg() const { return eta * eta / (eta * eta + 1.0); }
    double shared_var_fg() const { return lambda * lambda / (lambda * lambda + 1.0); }
    double residual_var_bg() const { return 1.0 / (eta * eta + 1.0); }
    double residual_var_fg() const { return 1.0 / (lambda * lambda + 1.0); }

    double shared_var(int channel) const { return channel == 0 ? shared_var_bg() : shared_var_fg(); }
    double residual_var(int channel) const { return channel == 0 ? residual_var_bg() : residual_var_fg(); }

    void validate() const;
};

// Binary background masks [6, N, 1, H, W]; the foreground mask is the
// pointwise complement and is derived, never stored.
struct MaskVolume {
    Tensor mask_b;

    explicit MaskVolume(Tensor mb);
    MaskVolume() = default;

    static MaskVolume all_background(const std::vector<int64_t>& dims);

    int64_t frames() const { return mask_b.dim(1); }
    Tensor mask_f() const;
    // Per-frame [6, C, H, W] masks broadcast across C latent channels.
    Tensor frame_mask(int64_t n, int channel, int64_t latent_channels) const;
};

// Per-channel noise fields for one frame, each [6, C, H, W].
struct FrameNoise {
    Tensor shared_bg, shared_fg;
    Tensor residual_bg, residual_fg;

    Tensor full_bg() const { return shared_bg + residual_bg; }
    Tensor full_fg() const { return shared_fg + residual_fg; }
};

// The whole decomposed sequence: per-frame shared/residual/full fields plus
// the mask-composed noise.
struct SceneNoise {
    std::vector<FrameNoise> frames;                 // size N
    std::vector<Tensor> composed;                   // eps_n, [6, C, H, W]
    std::vector<Tensor> masked_bg, masked_fg;       // N^B_n, N^F_n

    int64_t frame_count() const { return static_cast<int64_t>(frames.size()); }
};

// Shared components for frame n: six independent per-view draws at the
// prescribed shared variances. Returns {bg, fg}, each [6, C, H, W]. Frames
// beyond the first only draw these when collaboration is disabled.
std::pair<Tensor, Tensor> sample_shared(const DecompParams& p, int64_t n,
                                        const std::vector<int64_t>& field_dims,
                                        const StreamKey& key);

inline std::pair<Tensor, Tensor> sample_first_frame_shared(const DecompParams& p,
                                                           const std::vector<int64_t>& field_dims,
                                                           const StreamKey& key) {
    return sample_shared(p, 1, field_dims, key);
}

// Residual components for frame n, independent across frames and views.
std::pair<Tensor, Tensor> sample_residual(const DecompParams& p, int64_t n,
                                          const std::vector<int64_t>& field_dims,
                                          const StreamKey& key);

// Mask composition: masked_bg = full_bg * mask_b, masked_fg = full_fg * mask_f
// (elementwise), composed = masked_bg + masked_fg. Masks must be binary.
struct ComposedFrame {
    Tensor masked_bg, masked_fg, composed;
};
ComposedFrame compose_frame(const Tensor& full_bg, const Tensor& full_fg,
                            const MaskVolume& masks, int64_t n);

}  // namespace noisectl
