#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "noisectl/decompose.hpp"
#include "noisectl/rng.hpp"
#include "noisectl/tensor.hpp"

namespace noisectl {

// Collaboration matrices. S mixes the six views of each source channel per
// frame; I weights how each view's background/foreground history feeds the
// two target channels per window slot.
//
//   S: [N, 2, 6, 6]  frame i, source channel d, target view p, source view q
//   I: [K, 2, 2, 6]  slot k, source channel d, target channel D, view m
struct CollabParams {
    Tensor S;
    Tensor I;
    int window = 5;  // K; 0 disables collaboration entirely

    // Untrained starting point: S_i = (1/K) * identity per channel, I with
    // within-channel weights 1 and cross-channel weights 0, making the
    // untrained collaboration a K-frame average of view-aligned history.
    static CollabParams initial(int64_t frames, int window);

    int64_t frames() const { return S.dim(0); }
    void validate() const;

    double s_at(int64_t frame, int d, int p, int q) const;
    double i_at(int64_t slot, int d, int D, int m) const;
};

void save_collab(const std::filesystem::path& path, const CollabParams& c);
CollabParams load_collab(const std::filesystem::path& path);

// One window slot's collaborative contribution. S_i is the [2,V,V] slice for
// source frame i, I_k the [2,2,V] slice for slot k, eps the source frame's
// per-channel noise fields [V,...]. For target channel D and view p:
//
//   out[D][p] = sum_d I_k[d][D][p] * sum_q S_i[d][p][q] * eps[d][q]
//
// i.e. each source channel is view-mixed by its own S slice, then the
// per-view impact weights combine the two channels into each target.
std::pair<Tensor, Tensor> collab_contribution(const Tensor& S_i, const Tensor& I_k,
                                              const Tensor& eps_bg, const Tensor& eps_fg);

// Shared components of frame n+1: the sum of contributions over the clamped
// window of preceding frames, i in [max(n-K+1,1), n], slot k = i - start + 1.
// history_full holds the full (shared+residual) per-channel noises of frames
// 1..n in order.
std::pair<Tensor, Tensor> shared_next(const std::vector<std::pair<Tensor, Tensor>>& history_full,
                                      const CollabParams& c, int64_t n);

// Reference implementation of shared_next: plain nested loops over target
// view, source view, source channel, window slot and pixel, reading matrix
// entries straight out of the parameter tensors. Shares no code with the
// vectorized path.
std::pair<Tensor, Tensor> oracle_shared_next(const std::vector<std::pair<Tensor, Tensor>>& history_full,
                                             const CollabParams& c, int64_t n);

struct RollOptions {
    bool renormalize = false;  // rescale collaborated shared parts to the prescribed variance
};

// Rolls the full N-frame noise sequence: frame 1 uses first_shared, later
// frames collaborate over the clamped window (or sample fresh shared parts
// when K = 0); residuals are always freshly sampled per frame.
SceneNoise roll_sequence(std::pair<Tensor, Tensor> first_shared, const DecompParams& p,
                         const CollabParams& c, int64_t n_frames, const StreamKey& key,
                         const RollOptions& opts = {});

// Ablation baseline: every frame's shared component is a fixed multiple of
// the composed first-frame noise (bg scale eta^2/(eta^2+1), fg scale
// lambda^2/(lambda^2+1)).
std::pair<Tensor, Tensor> first_frame_base(const Tensor& composed_first, const DecompParams& p);

// Composes every frame of a rolled sequence through the masks, filling the
// masked/composed fields.
void compose_sequence(SceneNoise& noise, const MaskVolume& masks);

}  // namespace noisectl
