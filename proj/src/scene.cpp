#include "noisectl/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "noisectl/rng.hpp"

namespace noisectl {

namespace {

struct Harmonic {
    double amp, fx, fy, px, py;
};

std::vector<Harmonic> background_harmonics(const SceneSpec& spec) {
    std::vector<Harmonic> hs;
    if (spec.bg_harmonics <= 0 || spec.bg_amplitude <= 0.0) return hs;
    StreamKey key{spec.seed, 0, 0, 0, NoiseLane::generic, 0xb9};
    uint64_t st = key.state();
    double total = 0.0;
    for (int k = 0; k < spec.bg_harmonics; ++k) {
        Harmonic h;
        uint64_t base = static_cast<uint64_t>(k) * 8;
        h.amp = 0.5 + uniform01(st, base);
        h.fx = 1.0 + static_cast<double>(uniform_int(key, base + 1, 0, 3));
        h.fy = static_cast<double>(uniform_int(key, base + 2, 0, 2));
        h.px = 2.0 * std::numbers::pi * uniform01(st, base + 3);
        h.py = 2.0 * std::numbers::pi * uniform01(st, base + 4);
        total += h.amp;
        hs.push_back(h);
    }
    for (auto& h : hs) h.amp *= spec.bg_amplitude / total;
    return hs;
}

}  // namespace

SceneSpec SceneSpec::from_doc(const ConfigDoc& doc) {
    SceneSpec s;
    const auto& g = doc.globals;
    s.frames = cfg_int(g, "frames", s.frames);
    s.view_h = cfg_int(g, "view_h", s.view_h);
    s.view_w = cfg_int(g, "view_w", s.view_w);
    s.pool = cfg_int(g, "pool", s.pool);
    s.channels = cfg_int(g, "channels", s.channels);
    s.seed = static_cast<uint64_t>(cfg_int(g, "seed", static_cast<int64_t>(s.seed)));
    s.bg_harmonics = static_cast<int>(cfg_int(g, "background_harmonics", s.bg_harmonics));
    s.bg_amplitude = cfg_double(g, "background_amplitude", s.bg_amplitude);
    for (const auto& okv : doc.objects) {
        for (const auto& [key, _] : okv) {
            static const char* ok[] = {"width", "height", "x", "y", "vx", "vy", "intensity"};
            bool known = false;
            for (const char* k : ok) known = known || key == k;
            if (!known) throw config_error("unknown [object] key '" + key + "'");
        }
        ObjectSpec o;
        o.width = cfg_int(okv, "width", o.width);
        o.height = cfg_int(okv, "height", o.height);
        o.x = cfg_int(okv, "x", o.x);
        o.y = cfg_int(okv, "y", o.y);
        o.vx = cfg_int(okv, "vx", o.vx);
        o.vy = cfg_int(okv, "vy", o.vy);
        o.intensity = cfg_double(okv, "intensity", o.intensity);
        s.objects.push_back(o);
    }
    s.validate();
    return s;
}

void SceneSpec::validate() const {
    if (frames < 1) throw config_error("scene: frames must be >= 1");
    if (view_h < 1 || view_w < 1) throw config_error("scene: view size must be positive");
    if (channels < 1) throw config_error("scene: channels must be >= 1");
    if (pool < 1 || view_h % pool != 0 || view_w % pool != 0)
        throw config_error("scene: latent pool factor must divide the view resolution");
    if (bg_amplitude < 0.0 || bg_amplitude > 0.45)
        throw config_error("scene: background_amplitude must be in [0, 0.45]");
    for (const auto& o : objects) {
        if (o.width < 1 || o.height < 1) throw config_error("scene: object size must be positive");
        if (o.width > world_width() || o.height > view_h)
            throw config_error("scene: object larger than the world");
        if (o.intensity < 0.0 || o.intensity > 1.0)
            throw config_error("scene: object intensity must be in [0,1]");
    }
}

std::pair<int64_t, int64_t> SceneSpec::object_pos(const ObjectSpec& o, int64_t n) const {
    int64_t ww = world_width();
    auto wrap = [](int64_t v, int64_t m) { return ((v % m) + m) % m; };
    return {wrap(o.x + (n - 1) * o.vx, ww), wrap(o.y + (n - 1) * o.vy, view_h)};
}

static double background_eval(const std::vector<Harmonic>& hs, const SceneSpec& spec,
                              int64_t wx, int64_t y) {
    double v = 0.5;
    double ww = static_cast<double>(spec.world_width());
    double hh = static_cast<double>(spec.view_h);
    for (const auto& h : hs) {
        v += h.amp * std::cos(2.0 * std::numbers::pi * h.fx * static_cast<double>(wx) / ww + h.px) *
             std::cos(std::numbers::pi * h.fy * static_cast<double>(y) / hh + h.py);
    }
    return v;
}

double SceneSpec::background_at(int64_t wx, int64_t y) const {
    return background_eval(background_harmonics(*this), *this, wx, y);
}

std::pair<Tensor, Tensor> render(const SceneSpec& spec, int64_t n, int64_t m) {
    if (n < 1 || n > spec.frames)
        throw std::invalid_argument("render: frame index out of range");
    if (m < 1 || m > kViews)
        throw std::invalid_argument("render: view index out of range");
    int64_t h = spec.view_h, w = spec.view_w, c = spec.channels;
    int64_t ww = spec.world_width();
    int64_t x_base = (m - 1) * w;

    Tensor image({c, h, w});
    Tensor fg({1, h, w});
    std::vector<std::pair<int64_t, int64_t>> pos;
    pos.reserve(spec.objects.size());
    for (const auto& o : spec.objects) pos.push_back(spec.object_pos(o, n));
    const auto harmonics = background_harmonics(spec);

    for (int64_t y = 0; y < h; ++y) {
        for (int64_t x = 0; x < w; ++x) {
            int64_t wx = x_base + x;
            double v = background_eval(harmonics, spec, wx, y);
            bool covered = false;
            for (size_t oi = 0; oi < spec.objects.size(); ++oi) {
                const auto& o = spec.objects[oi];
                int64_t dx = ((wx - pos[oi].first) % ww + ww) % ww;
                int64_t dy = ((y - pos[oi].second) % h + h) % h;
                if (dx < o.width && dy < o.height) {
                    v = o.intensity;
                    covered = true;
                }
            }
            for (int64_t ch = 0; ch < c; ++ch) image[(ch * h + y) * w + x] = v;
            if (covered) fg[y * w + x] = 1.0;
        }
    }
    return {std::move(image), std::move(fg)};
}

SceneDataset build_dataset(const SceneSpec& spec) {
    spec.validate();
    int64_t N = spec.frames, c = spec.channels;
    int64_t lh = spec.latent_h(), lw = spec.latent_w(), p = spec.pool;
    SceneDataset ds;
    ds.spec = spec;
    ds.latents = Tensor({kViews, N, c, lh, lw});
    ds.masks_b = Tensor({kViews, N, 1, lh, lw});
    double inv_pool = 1.0 / static_cast<double>(p * p);
    for (int64_t m = 1; m <= kViews; ++m) {
        for (int64_t n = 1; n <= N; ++n) {
            auto [image, fg] = render(spec, n, m);
            for (int64_t ch = 0; ch < c; ++ch) {
                for (int64_t y = 0; y < lh; ++y) {
                    for (int64_t x = 0; x < lw; ++x) {
                        double sum = 0.0;
                        for (int64_t dy = 0; dy < p; ++dy)
                            for (int64_t dx = 0; dx < p; ++dx)
                                sum += image[(ch * spec.view_h + y * p + dy) * spec.view_w + x * p + dx];
                        int64_t li = ((((m - 1) * N + (n - 1)) * c + ch) * lh + y) * lw + x;
                        ds.latents[li] = sum * inv_pool;
                    }
                }
            }
            for (int64_t y = 0; y < lh; ++y) {
                for (int64_t x = 0; x < lw; ++x) {
                    bool any_fg = false;
                    for (int64_t dy = 0; dy < p && !any_fg; ++dy)
                        for (int64_t dx = 0; dx < p && !any_fg; ++dx)
                            any_fg = fg[(y * p + dy) * spec.view_w + x * p + dx] != 0.0;
                    int64_t mi = (((m - 1) * N + (n - 1)) * lh + y) * lw + x;
                    ds.masks_b[mi] = any_fg ? 0.0 : 1.0;
                }
            }
        }
    }
    return ds;
}

Tensor render_world_frame(const SceneSpec& spec, int64_t n) {
    int64_t h = spec.view_h, w = spec.view_w, c = spec.channels;
    Tensor world({c, h, kViews * w});
    for (int64_t m = 1; m <= kViews; ++m) {
        auto [image, fg] = render(spec, n, m);
        (void)fg;
        for (int64_t ch = 0; ch < c; ++ch)
            for (int64_t y = 0; y < h; ++y)
                for (int64_t x = 0; x < w; ++x)
                    world[(ch * h + y) * (kViews * w) + (m - 1) * w + x] = image[(ch * h + y) * w + x];
    }
    return world;
}

}  // namespace noisectl
