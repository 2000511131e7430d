#include "noisectl/decompose.hpp"

#include <stdexcept>

namespace noisectl {

void DecompParams::validate() const {
    if (!(eta > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("decomposition: eta and lambda must be positive");
}

MaskVolume::MaskVolume(Tensor mb) : mask_b(std::move(mb)) {
    if (mask_b.rank() != 5 || mask_b.dim(0) != 6 || mask_b.dim(2) != 1)
        throw std::invalid_argument("mask volume: expected [6,N,1,H,W], got " + mask_b.shape_str());
    for (int64_t i = 0; i < mask_b.numel(); ++i)
        if (mask_b[i] != 0.0 && mask_b[i] != 1.0)
            throw std::invalid_argument("mask volume: masks must be binary");
}

MaskVolume MaskVolume::all_background(const std::vector<int64_t>& dims) {
    return MaskVolume(Tensor::full(dims, 1.0));
}

Tensor MaskVolume::mask_f() const {
    Tensor out = mask_b;
    for (int64_t i = 0; i < out.numel(); ++i) out[i] = 1.0 - out[i];
    return out;
}

Tensor MaskVolume::frame_mask(int64_t n, int channel, int64_t latent_channels) const {
    int64_t N = mask_b.dim(1), h = mask_b.dim(3), w = mask_b.dim(4);
    if (n < 1 || n > N)
        throw std::invalid_argument("mask volume: frame index out of range");
    Tensor out({6, latent_channels, h, w});
    int64_t px = h * w;
    for (int64_t v = 0; v < 6; ++v) {
        const double* src = mask_b.data() + (v * N + (n - 1)) * px;
        for (int64_t c = 0; c < latent_channels; ++c) {
            double* dst = out.data() + (v * latent_channels + c) * px;
            for (int64_t i = 0; i < px; ++i)
                dst[i] = channel == 0 ? src[i] : 1.0 - src[i];
        }
    }
    return out;
}

std::pair<Tensor, Tensor> sample_shared(const DecompParams& p, int64_t n,
                                        const std::vector<int64_t>& field_dims,
                                        const StreamKey& key) {
    p.validate();
    if (field_dims.empty() || field_dims[0] != 6)
        throw std::invalid_argument("shared sample: field dims must lead with 6 views");
    if (n < 1)
        throw std::invalid_argument("shared sample: frame index must be >= 1");
    Tensor bg(field_dims), fg(field_dims);
    int64_t inner = bg.numel() / 6;
    for (uint32_t m = 1; m <= 6; ++m) {
        StreamKey kb = key.with_view(m).with_frame(static_cast<uint32_t>(n));
        kb.component = NoiseLane::shared_bg;
        StreamKey kf = kb;
        kf.component = NoiseLane::shared_fg;
        Tensor vb = gaussian_sample({inner}, p.shared_var_bg(), kb);
        Tensor vf = gaussian_sample({inner}, p.shared_var_fg(), kf);
        for (int64_t i = 0; i < inner; ++i) {
            bg[(m - 1) * inner + i] = vb[i];
            fg[(m - 1) * inner + i] = vf[i];
        }
    }
    return {std::move(bg), std::move(fg)};
}

std::pair<Tensor, Tensor> sample_residual(const DecompParams& p, int64_t n,
                                          const std::vector<int64_t>& field_dims,
                                          const StreamKey& key) {
    p.validate();
    if (field_dims.empty() || field_dims[0] != 6)
        throw std::invalid_argument("residual: field dims must lead with 6 views");
    if (n < 1)
        throw std::invalid_argument("residual: frame index must be >= 1");
    Tensor bg(field_dims), fg(field_dims);
    int64_t inner = bg.numel() / 6;
    for (uint32_t m = 1; m <= 6; ++m) {
        StreamKey kb = key.with_view(m).with_frame(static_cast<uint32_t>(n));
        kb.component = NoiseLane::residual_bg;
        StreamKey kf = kb;
        kf.component = NoiseLane::residual_fg;
        Tensor vb = gaussian_sample({inner}, p.residual_var_bg(), kb);
        Tensor vf = gaussian_sample({inner}, p.residual_var_fg(), kf);
        for (int64_t i = 0; i < inner; ++i) {
            bg[(m - 1) * inner + i] = vb[i];
            fg[(m - 1) * inner + i] = vf[i];
        }
    }
    return {std::move(bg), std::move(fg)};
}

ComposedFrame compose_frame(const Tensor& full_bg, const Tensor& full_fg,
                            const MaskVolume& masks, int64_t n) {
    if (!full_bg.same_shape(full_fg))
        throw std::invalid_argument("compose: channel field shapes differ");
    int64_t c = full_bg.dim(1);
    Tensor mb = masks.frame_mask(n, 0, c);
    Tensor mf = masks.frame_mask(n, 1, c);
    if (!mb.same_shape(full_bg))
        throw std::invalid_argument("compose: mask shape " + mb.shape_str() +
                                    " does not match noise " + full_bg.shape_str());
    ComposedFrame out;
    out.masked_bg = hadamard(full_bg, mb);
    out.masked_fg = hadamard(full_fg, mf);
    out.composed = out.masked_bg + out.masked_fg;
    return out;
}

}  // namespace noisectl
