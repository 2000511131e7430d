#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "noisectl/rng.hpp"
#include "noisectl/tensor.hpp"

namespace noisectl {

// Small stride-1 zero-padded conv net: latent channels plus one broadcast
// timestep channel in, tanh between layers, linear head out. Stands in for
// the per-channel denoising U-Net at desk scale.
struct ConvLayer {
    Tensor weight;  // [out_c, in_c, k, k]
    Tensor bias;    // [out_c]
};

struct ConvDenoiser {
    int64_t latent_channels = 1;
    int64_t hidden = 16;
    int64_t ksize = 3;
    std::vector<ConvLayer> layers;

    static ConvDenoiser create(int64_t latent_channels, int64_t hidden, const StreamKey& key);

    // x is [C, H, W]; t_frac (= t/T) rides along as a constant extra channel.
    Tensor forward(const Tensor& x, double t_frac) const;

    void validate() const;
};

// Forward with cached pre-activations so a backward pass can run later.
struct ConvTrace {
    Tensor input;               // [C+1, H, W]
    std::vector<Tensor> pre;    // per-layer pre-activation maps
    std::vector<Tensor> post;   // per-layer outputs after the nonlinearity
};

Tensor forward_traced(const ConvDenoiser& net, const Tensor& x, double t_frac, ConvTrace& trace);

// Accumulates dLoss/dparams into `grads` (same architecture, zero-initialized
// or partially accumulated) given dLoss/doutput for the traced forward.
void backward_into(const ConvDenoiser& net, const ConvTrace& trace, const Tensor& dout,
                   ConvDenoiser& grads);

// Flat parameter access used by gradient descent and finite-difference checks.
ConvDenoiser zeros_like(const ConvDenoiser& net);
int64_t param_count(const ConvDenoiser& net);
double get_param(const ConvDenoiser& net, int64_t idx);
void add_param(ConvDenoiser& net, int64_t idx, double delta);
void axpy_params(ConvDenoiser& dst, double a, const ConvDenoiser& src);  // dst += a * src
void scale_params(ConvDenoiser& net, double a);

void save_denoiser(const std::filesystem::path& path, const ConvDenoiser& net);
ConvDenoiser load_denoiser(const std::filesystem::path& path);

}  // namespace noisectl
