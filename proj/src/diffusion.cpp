#include "noisectl/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "noisectl/parallel.hpp"

namespace noisectl {

DiffusionSchedule DiffusionSchedule::linear(int64_t steps, double beta_lo, double beta_hi) {
    if (steps < 1)
        throw std::invalid_argument("schedule: need at least one step");
    DiffusionSchedule s;
    s.betas.resize(static_cast<size_t>(steps));
    s.alpha_bars.resize(static_cast<size_t>(steps));
    double abar = 1.0;
    for (int64_t t = 0; t < steps; ++t) {
        double beta = steps == 1 ? beta_lo
                                 : beta_lo + (beta_hi - beta_lo) * static_cast<double>(t) /
                                       static_cast<double>(steps - 1);
        s.betas[static_cast<size_t>(t)] = beta;
        abar *= 1.0 - beta;
        s.alpha_bars[static_cast<size_t>(t)] = abar;
    }
    s.validate();
    return s;
}

double DiffusionSchedule::beta(int64_t t) const {
    if (t < 1 || t > steps())
        throw std::invalid_argument("schedule: step out of range");
    return betas[static_cast<size_t>(t - 1)];
}

double DiffusionSchedule::alpha_bar(int64_t t) const {
    if (t < 0 || t > steps())
        throw std::invalid_argument("schedule: step out of range");
    return t == 0 ? 1.0 : alpha_bars[static_cast<size_t>(t - 1)];
}

void DiffusionSchedule::validate() const {
    if (betas.size() != alpha_bars.size() || betas.empty())
        throw std::invalid_argument("schedule: empty or inconsistent");
    double prev = 1.0;
    for (size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0 && betas[i] < 1.0))
            throw std::invalid_argument("schedule: betas must lie in (0,1)");
        if (!(alpha_bars[i] > 0.0 && alpha_bars[i] < prev))
            throw std::invalid_argument("schedule: alpha_bar must be strictly decreasing in (0,1)");
        prev = alpha_bars[i];
    }
}

Tensor noisify(const Tensor& x0, const Tensor& eps, int64_t t, const DiffusionSchedule& sched) {
    if (!x0.same_shape(eps))
        throw std::invalid_argument("noisify: shape mismatch");
    double abar = sched.alpha_bar(t);  // range-checks t
    double a = std::sqrt(abar), b = std::sqrt(1.0 - abar);
    Tensor out = x0;
    out *= a;
    for (int64_t i = 0; i < out.numel(); ++i) out[i] += b * eps[i];
    return out;
}

JointPrediction predict_joint(const Tensor& z_frame, const MaskVolume& masks, int64_t n,
                              const ConvDenoiser& net_bg, const ConvDenoiser& net_fg,
                              int64_t t, int64_t total_steps) {
    if (z_frame.rank() != 4 || z_frame.dim(0) != 6)
        throw std::invalid_argument("predict_joint: expected [6,C,H,W], got " + z_frame.shape_str());
    int64_t c = z_frame.dim(1), h = z_frame.dim(2), w = z_frame.dim(3);
    int64_t slice = c * h * w;
    double t_frac = static_cast<double>(t) / static_cast<double>(total_steps);

    JointPrediction out;
    out.raw_bg = Tensor(z_frame.dims());
    out.raw_fg = Tensor(z_frame.dims());
    parallel_for(12, [&](int64_t b, int64_t e) {
        for (int64_t job = b; job < e; ++job) {
            int64_t v = job % 6;
            bool fg = job >= 6;
            Tensor in({c, h, w});
            for (int64_t i = 0; i < slice; ++i) in[i] = z_frame[v * slice + i];
            Tensor pred = (fg ? net_fg : net_bg).forward(in, t_frac);
            Tensor& dst = fg ? out.raw_fg : out.raw_bg;
            for (int64_t i = 0; i < slice; ++i) dst[v * slice + i] = pred[i];
        }
    });
    out.masked_bg = hadamard(out.raw_bg, masks.frame_mask(n, 0, c));
    out.masked_fg = hadamard(out.raw_fg, masks.frame_mask(n, 1, c));
    out.combined = out.masked_bg + out.masked_fg;
    return out;
}

std::vector<Tensor> reverse_sample(std::vector<Tensor> z, int64_t t_start,
                                   const DiffusionSchedule& sched, const NoisePredictor& predict,
                                   SamplerKind kind, const StreamKey& key) {
    if (t_start < 1 || t_start > sched.steps())
        throw std::invalid_argument("reverse_sample: start step out of range");
    for (int64_t t = t_start; t >= 1; --t) {
        double abar = sched.alpha_bar(t);
        double abar_prev = sched.alpha_bar(t - 1);
        for (size_t nf = 0; nf < z.size(); ++nf) {
            int64_t n = static_cast<int64_t>(nf) + 1;
            Tensor eps = predict(z[nf], n, t);
            if (!eps.same_shape(z[nf]))
                throw std::runtime_error("reverse_sample: predictor returned wrong shape");
            Tensor& zn = z[nf];
            if (kind == SamplerKind::deterministic) {
                double sa = std::sqrt(abar), sb = std::sqrt(1.0 - abar);
                double pa = std::sqrt(abar_prev), pb = std::sqrt(1.0 - abar_prev);
                for (int64_t i = 0; i < zn.numel(); ++i) {
                    double x0hat = (zn[i] - sb * eps[i]) / sa;
                    zn[i] = pa * x0hat + pb * eps[i];
                }
            } else {
                double beta = sched.beta(t);
                double alpha = 1.0 - beta;
                double coef = beta / std::sqrt(1.0 - abar);
                double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);
                double sigma = t > 1 ? std::sqrt((1.0 - abar_prev) / (1.0 - abar) * beta) : 0.0;
                StreamKey sk = key.with_frame(static_cast<uint32_t>(n));
                sk.component = NoiseLane::reverse_step;
                sk.draw = static_cast<uint64_t>(t);
                Tensor zeta = sigma > 0.0 ? gaussian_sample(zn.dims(), 1.0, sk) : Tensor(zn.dims());
                for (int64_t i = 0; i < zn.numel(); ++i)
                    zn[i] = inv_sqrt_alpha * (zn[i] - coef * eps[i]) + sigma * zeta[i];
            }
        }
    }
    return z;
}

Tensor sample_video(const ConvDenoiser& net_bg, const ConvDenoiser& net_fg,
                    const MaskVolume& masks, const DecompParams& p, const CollabParams& c,
                    const DiffusionSchedule& sched, const std::vector<int64_t>& frame_dims,
                    int64_t n_frames, const StreamKey& key, const SampleOptions& opts) {
    auto first = sample_first_frame_shared(p, frame_dims, key);
    SceneNoise prior = roll_sequence(std::move(first), p, c, n_frames, key, opts.roll);
    compose_sequence(prior, masks);

    std::vector<Tensor> z = std::move(prior.composed);
    NoisePredictor predict = [&](const Tensor& zf, int64_t n, int64_t t) {
        return predict_joint(zf, masks, n, net_bg, net_fg, t, sched.steps()).combined;
    };
    z = reverse_sample(std::move(z), sched.steps(), sched, predict, opts.sampler, key);
    return stack_frames(z);
}

Tensor stack_frames(const std::vector<Tensor>& frames) {
    if (frames.empty())
        throw std::invalid_argument("stack_frames: no frames");
    int64_t n = static_cast<int64_t>(frames.size());
    int64_t v = frames[0].dim(0), c = frames[0].dim(1), h = frames[0].dim(2), w = frames[0].dim(3);
    Tensor out({v, n, c, h, w});
    int64_t slice = c * h * w;
    for (int64_t ni = 0; ni < n; ++ni) {
        const Tensor& f = frames[static_cast<size_t>(ni)];
        if (f.dim(0) != v || f.dim(1) != c || f.dim(2) != h || f.dim(3) != w)
            throw std::invalid_argument("stack_frames: inconsistent frame shapes");
        for (int64_t vi = 0; vi < v; ++vi)
            for (int64_t i = 0; i < slice; ++i)
                out[(vi * n + ni) * slice + i] = f[vi * slice + i];
    }
    return out;
}

std::vector<Tensor> split_frames(const Tensor& video) {
    if (video.rank() != 5)
        throw std::invalid_argument("split_frames: expected [V,N,C,H,W], got " + video.shape_str());
    int64_t v = video.dim(0), n = video.dim(1), c = video.dim(2), h = video.dim(3), w = video.dim(4);
    int64_t slice = c * h * w;
    std::vector<Tensor> frames;
    frames.reserve(static_cast<size_t>(n));
    for (int64_t ni = 0; ni < n; ++ni) {
        Tensor f({v, c, h, w});
        for (int64_t vi = 0; vi < v; ++vi)
            for (int64_t i = 0; i < slice; ++i)
                f[vi * slice + i] = video[(vi * n + ni) * slice + i];
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace noisectl
