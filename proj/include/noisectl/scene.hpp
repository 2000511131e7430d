#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "noisectl/config.hpp"
#include "noisectl/tensor.hpp"

namespace noisectl {

inline constexpr int kViews = 6;

// One moving rectangle. Positions and velocities are integer world pixels;
// the world is a torus, so trajectories wrap in x and y.
struct ObjectSpec {
    int64_t width = 8;
    int64_t height = 6;
    int64_t x = 0;
    int64_t y = 0;
    int64_t vx = 0;
    int64_t vy = 0;
    double intensity = 0.9;
};

// The hexview rig: a 2D panoramic world of 6 contiguous horizontal sectors,
// one per view, each view_h x view_w. Background is a static low-frequency
// cosine texture (periodic in x so the wrap seam is seamless); foreground
// objects move over it with constant velocity.
struct SceneSpec {
    int64_t frames = 16;
    int64_t view_h = 32;
    int64_t view_w = 56;
    int64_t pool = 2;          // latent = view downsampled by pool x pool
    int64_t channels = 1;
    uint64_t seed = 1;
    int bg_harmonics = 3;
    double bg_amplitude = 0.3;
    std::vector<ObjectSpec> objects;

    int64_t world_width() const { return kViews * view_w; }
    int64_t latent_h() const { return view_h / pool; }
    int64_t latent_w() const { return view_w / pool; }

    static SceneSpec from_doc(const ConfigDoc& doc);
    void validate() const;

    // World position of an object's top-left corner at 1-indexed frame n.
    std::pair<int64_t, int64_t> object_pos(const ObjectSpec& o, int64_t n) const;
    double background_at(int64_t wx, int64_t y) const;
};

struct SceneDataset {
    Tensor latents;   // [6, N, C, h, w]
    Tensor masks_b;   // [6, N, 1, h, w], 1 = background
    SceneSpec spec;
};

// Rasterizes view m at frame n (both 1-indexed). Returns image [C,H,W] in
// [0,1] and a binary foreground mask [1,H,W].
std::pair<Tensor, Tensor> render(const SceneSpec& spec, int64_t n, int64_t m);

// Renders all frames/views, average-pools images into latents and any-pools
// foreground masks; masks_b is the pointwise complement.
SceneDataset build_dataset(const SceneSpec& spec);

// Full-resolution world mosaic of frame n (views side by side), for PPM dumps.
Tensor render_world_frame(const SceneSpec& spec, int64_t n);

}  // namespace noisectl
