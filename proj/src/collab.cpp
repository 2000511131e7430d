#include "noisectl/collab.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "noisectl/io.hpp"

namespace noisectl {

CollabParams CollabParams::initial(int64_t frames, int window) {
    if (frames < 1)
        throw std::invalid_argument("collab: need at least one frame");
    if (window < 0 || window > frames)
        throw std::invalid_argument("collab: window must be in [0, frames]");
    CollabParams c;
    c.window = window;
    c.S = Tensor({frames, 2, 6, 6});
    c.I = Tensor({std::max<int64_t>(window, 1), 2, 2, 6});
    if (window == 0) return c;  // matrices unused
    double w = 1.0 / static_cast<double>(window);
    for (int64_t i = 0; i < frames; ++i)
        for (int d = 0; d < 2; ++d)
            for (int p = 0; p < 6; ++p)
                c.S[((i * 2 + d) * 6 + p) * 6 + p] = w;
    for (int64_t k = 0; k < window; ++k)
        for (int d = 0; d < 2; ++d)
            for (int m = 0; m < 6; ++m)
                c.I[((k * 2 + d) * 2 + d) * 6 + m] = 1.0;
    return c;
}

void CollabParams::validate() const {
    if (S.rank() != 4 || S.dim(1) != 2 || S.dim(2) != 6 || S.dim(3) != 6)
        throw std::invalid_argument("collab: S must be [N,2,6,6], got " + S.shape_str());
    if (I.rank() != 4 || I.dim(1) != 2 || I.dim(2) != 2 || I.dim(3) != 6)
        throw std::invalid_argument("collab: I must be [K,2,2,6], got " + I.shape_str());
    if (window < 0 || window > S.dim(0))
        throw std::invalid_argument("collab: window out of range");
    if (window > 0 && I.dim(0) < window)
        throw std::invalid_argument("collab: I has fewer slots than the window length");
    for (int64_t i = 0; i < S.numel(); ++i)
        if (!std::isfinite(S[i])) throw std::invalid_argument("collab: non-finite entry in S");
    for (int64_t i = 0; i < I.numel(); ++i)
        if (!std::isfinite(I[i])) throw std::invalid_argument("collab: non-finite entry in I");
}

double CollabParams::s_at(int64_t frame, int d, int p, int q) const {
    return S[(((frame - 1) * 2 + d) * 6 + p) * 6 + q];
}

double CollabParams::i_at(int64_t slot, int d, int D, int m) const {
    return I[(((slot - 1) * 2 + d) * 2 + D) * 6 + m];
}

void save_collab(const std::filesystem::path& path, const CollabParams& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path.string());
    write_tagged(os,
                 {{"K", std::to_string(c.window)}, {"N", std::to_string(c.frames())}},
                 {&c.S, &c.I});
}

CollabParams load_collab(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path.string());
    auto header = read_tagged_header(is);
    CollabParams c;
    c.window = -1;
    for (const auto& [k, v] : header) {
        if (k == "K") c.window = std::stoi(v);
    }
    if (c.window < 0) throw std::runtime_error("collab load: header missing K");
    c.S = read_nct(is);
    c.I = read_nct(is);
    c.validate();
    return c;
}

std::pair<Tensor, Tensor> collab_contribution(const Tensor& S_i, const Tensor& I_k,
                                              const Tensor& eps_bg, const Tensor& eps_fg) {
    if (S_i.rank() != 3 || S_i.dim(0) != 2 || S_i.dim(1) != S_i.dim(2))
        throw std::invalid_argument("contribution: S slice must be [2,V,V], got " + S_i.shape_str());
    int64_t v = S_i.dim(1);
    if (I_k.rank() != 3 || I_k.dim(0) != 2 || I_k.dim(1) != 2 || I_k.dim(2) != v)
        throw std::invalid_argument("contribution: I slice must be [2,2,V], got " + I_k.shape_str());
    if (!eps_bg.same_shape(eps_fg) || eps_bg.dim(0) != v)
        throw std::invalid_argument("contribution: noise fields must be [V,...] and match");

    int64_t inner = eps_bg.numel() / v;
    const double* s = S_i.data();
    const double* im = I_k.data();
    const Tensor* eps[2] = {&eps_bg, &eps_fg};
    Tensor out_bg(eps_bg.dims()), out_fg(eps_bg.dims());
    Tensor* out[2] = {&out_bg, &out_fg};

    // mixed[d][p] = sum_q S[d][p][q] * eps[d][q], then impact weights fold the
    // two source channels into each target channel.
    std::vector<double> mixed(static_cast<size_t>(inner));
    for (int d = 0; d < 2; ++d) {
        const double* src = eps[d]->data();
        for (int64_t p = 0; p < v; ++p) {
            std::fill(mixed.begin(), mixed.end(), 0.0);
            for (int64_t q = 0; q < v; ++q) {
                double w = s[(d * v + p) * v + q];
                if (w == 0.0) continue;
                const double* in = src + q * inner;
                for (int64_t i = 0; i < inner; ++i) mixed[static_cast<size_t>(i)] += w * in[i];
            }
            for (int D = 0; D < 2; ++D) {
                double f = im[(d * 2 + D) * v + p];
                if (f == 0.0) continue;
                double* dst = out[D]->data() + p * inner;
                for (int64_t i = 0; i < inner; ++i) dst[i] += f * mixed[static_cast<size_t>(i)];
            }
        }
    }
    return {std::move(out_bg), std::move(out_fg)};
}

static Tensor s_slice(const CollabParams& c, int64_t frame) {
    Tensor out({2, 6, 6});
    const double* src = c.S.data() + (frame - 1) * 72;
    for (int64_t i = 0; i < 72; ++i) out[i] = src[i];
    return out;
}

static Tensor i_slice(const CollabParams& c, int64_t slot) {
    Tensor out({2, 2, 6});
    const double* src = c.I.data() + (slot - 1) * 24;
    for (int64_t i = 0; i < 24; ++i) out[i] = src[i];
    return out;
}

std::pair<Tensor, Tensor> shared_next(const std::vector<std::pair<Tensor, Tensor>>& history_full,
                                      const CollabParams& c, int64_t n) {
    c.validate();
    if (c.window == 0)
        throw std::logic_error("shared_next: collaboration disabled (K = 0)");
    if (n < 1 || static_cast<int64_t>(history_full.size()) < n)
        throw std::invalid_argument("shared_next: history must cover frames 1..n");
    if (n > c.frames())
        throw std::invalid_argument("shared_next: frame beyond parameter range");

    int64_t start = std::max<int64_t>(n - c.window + 1, 1);
    Tensor out_bg(history_full[0].first.dims());
    Tensor out_fg(history_full[0].first.dims());
    for (int64_t i = start; i <= n; ++i) {
        int64_t k = i - start + 1;
        auto [cb, cf] = collab_contribution(s_slice(c, i), i_slice(c, k),
                                            history_full[static_cast<size_t>(i - 1)].first,
                                            history_full[static_cast<size_t>(i - 1)].second);
        out_bg += cb;
        out_fg += cf;
    }
    return {std::move(out_bg), std::move(out_fg)};
}

std::pair<Tensor, Tensor> oracle_shared_next(const std::vector<std::pair<Tensor, Tensor>>& history_full,
                                             const CollabParams& c, int64_t n) {
    if (c.window == 0)
        throw std::logic_error("oracle_shared_next: collaboration disabled (K = 0)");
    if (n < 1 || static_cast<int64_t>(history_full.size()) < n)
        throw std::invalid_argument("oracle_shared_next: history must cover frames 1..n");

    const Tensor& probe = history_full[0].first;
    int64_t views = probe.dim(0);
    int64_t inner = probe.numel() / views;
    Tensor out_bg(probe.dims());
    Tensor out_fg(probe.dims());

    int64_t start = n - c.window + 1;
    if (start < 1) start = 1;

    for (int64_t target_channel = 0; target_channel < 2; ++target_channel) {
        for (int64_t p = 0; p < views; ++p) {
            for (int64_t px = 0; px < inner; ++px) {
                double acc = 0.0;
                for (int64_t i = start; i <= n; ++i) {
                    int64_t k = i - start + 1;
                    for (int64_t d = 0; d < 2; ++d) {
                        double impact = c.I[(((k - 1) * 2 + d) * 2 + target_channel) * 6 + p];
                        for (int64_t q = 0; q < views; ++q) {
                            double s = c.S[(((i - 1) * 2 + d) * 6 + p) * 6 + q];
                            double val = d == 0 ? history_full[static_cast<size_t>(i - 1)].first[q * inner + px]
                                                : history_full[static_cast<size_t>(i - 1)].second[q * inner + px];
                            acc += impact * s * val;
                        }
                    }
                }
                if (target_channel == 0)
                    out_bg[p * inner + px] = acc;
                else
                    out_fg[p * inner + px] = acc;
            }
        }
    }
    return {std::move(out_bg), std::move(out_fg)};
}

static void renormalize_shared(Tensor& shared, double target_var) {
    Moments m = moments(shared);
    if (m.variance > 1e-12) shared *= std::sqrt(target_var / m.variance);
}

SceneNoise roll_sequence(std::pair<Tensor, Tensor> first_shared, const DecompParams& p,
                         const CollabParams& c, int64_t n_frames, const StreamKey& key,
                         const RollOptions& opts) {
    p.validate();
    c.validate();
    if (n_frames < 1)
        throw std::invalid_argument("roll_sequence: need at least one frame");
    const std::vector<int64_t> dims = first_shared.first.dims();

    SceneNoise noise;
    noise.frames.reserve(static_cast<size_t>(n_frames));
    std::vector<std::pair<Tensor, Tensor>> history;
    history.reserve(static_cast<size_t>(n_frames));

    for (int64_t n = 1; n <= n_frames; ++n) {
        FrameNoise fr;
        if (n == 1) {
            fr.shared_bg = std::move(first_shared.first);
            fr.shared_fg = std::move(first_shared.second);
        } else if (c.window == 0) {
            // collaboration disabled: fresh shared draws every frame
            auto [sb, sf] = sample_shared(p, n, dims, key);
            fr.shared_bg = std::move(sb);
            fr.shared_fg = std::move(sf);
        } else {
            auto [sb, sf] = shared_next(history, c, n - 1);
            if (opts.renormalize) {
                renormalize_shared(sb, p.shared_var_bg());
                renormalize_shared(sf, p.shared_var_fg());
            }
            fr.shared_bg = std::move(sb);
            fr.shared_fg = std::move(sf);
        }
        auto [rb, rf] = sample_residual(p, n, dims, key);
        fr.residual_bg = std::move(rb);
        fr.residual_fg = std::move(rf);
        history.emplace_back(fr.full_bg(), fr.full_fg());
        noise.frames.push_back(std::move(fr));
    }
    return noise;
}

std::pair<Tensor, Tensor> first_frame_base(const Tensor& composed_first, const DecompParams& p) {
    p.validate();
    Tensor bg = composed_first;
    Tensor fg = composed_first;
    bg *= p.shared_var_bg();
    fg *= p.shared_var_fg();
    return {std::move(bg), std::move(fg)};
}

void compose_sequence(SceneNoise& noise, const MaskVolume& masks) {
    noise.composed.clear();
    noise.masked_bg.clear();
    noise.masked_fg.clear();
    for (int64_t n = 1; n <= noise.frame_count(); ++n) {
        const FrameNoise& fr = noise.frames[static_cast<size_t>(n - 1)];
        ComposedFrame cf = compose_frame(fr.full_bg(), fr.full_fg(), masks, n);
        noise.masked_bg.push_back(std::move(cf.masked_bg));
        noise.masked_fg.push_back(std::move(cf.masked_fg));
        noise.composed.push_back(std::move(cf.composed));
    }
}

}  // namespace noisectl
