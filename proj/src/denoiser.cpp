#include "noisectl/denoiser.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "noisectl/io.hpp"

namespace noisectl {

ConvDenoiser ConvDenoiser::create(int64_t latent_channels, int64_t hidden, const StreamKey& key) {
    if (latent_channels < 1 || hidden < 1)
        throw std::invalid_argument("denoiser: channels must be positive");
    ConvDenoiser net;
    net.latent_channels = latent_channels;
    net.hidden = hidden;
    int64_t k = net.ksize;
    int64_t chans[4] = {latent_channels + 1, hidden, hidden, latent_channels};
    for (int layer = 0; layer < 3; ++layer) {
        int64_t in_c = chans[layer], out_c = chans[layer + 1];
        StreamKey wk = key;
        wk.component = NoiseLane::weights;
        wk.draw = key.draw * 8 + static_cast<uint64_t>(layer);
        double scale = 1.0 / std::sqrt(static_cast<double>(in_c * k * k));
        ConvLayer cl;
        cl.weight = gaussian_sample({out_c, in_c, k, k}, scale * scale, wk);
        cl.bias = Tensor({out_c});
        net.layers.push_back(std::move(cl));
    }
    return net;
}

void ConvDenoiser::validate() const {
    if (layers.size() != 3)
        throw std::invalid_argument("denoiser: expected 3 layers");
    for (const auto& l : layers) {
        for (int64_t i = 0; i < l.weight.numel(); ++i)
            if (!std::isfinite(l.weight[i])) throw std::invalid_argument("denoiser: non-finite weight");
        for (int64_t i = 0; i < l.bias.numel(); ++i)
            if (!std::isfinite(l.bias[i])) throw std::invalid_argument("denoiser: non-finite bias");
    }
}

// Same-size conv with zero padding, stride 1.
static Tensor conv2d(const Tensor& x, const ConvLayer& layer) {
    int64_t in_c = x.dim(0), h = x.dim(1), w = x.dim(2);
    int64_t out_c = layer.weight.dim(0), k = layer.weight.dim(2);
    if (layer.weight.dim(1) != in_c)
        throw std::invalid_argument("conv2d: channel mismatch");
    int64_t pad = k / 2;
    Tensor out({out_c, h, w});
    const double* wt = layer.weight.data();
    const double* src = x.data();
    for (int64_t oc = 0; oc < out_c; ++oc) {
        double b = layer.bias[oc];
        double* dst = out.data() + oc * h * w;
        for (int64_t y = 0; y < h; ++y)
            for (int64_t xx = 0; xx < w; ++xx) dst[y * w + xx] = b;
        for (int64_t ic = 0; ic < in_c; ++ic) {
            const double* plane = src + ic * h * w;
            const double* kern = wt + (oc * in_c + ic) * k * k;
            for (int64_t ky = 0; ky < k; ++ky) {
                for (int64_t kx = 0; kx < k; ++kx) {
                    double wv = kern[ky * k + kx];
                    if (wv == 0.0) continue;
                    int64_t y0 = std::max<int64_t>(0, pad - ky);
                    int64_t y1 = std::min<int64_t>(h, h + pad - ky);
                    for (int64_t y = y0; y < y1; ++y) {
                        int64_t sy = y + ky - pad;
                        int64_t x0 = std::max<int64_t>(0, pad - kx);
                        int64_t x1 = std::min<int64_t>(w, w + pad - kx);
                        const double* srow = plane + sy * w + (x0 + kx - pad);
                        double* drow = dst + y * w + x0;
                        for (int64_t xx = 0; xx < x1 - x0; ++xx) drow[xx] += wv * srow[xx];
                    }
                }
            }
        }
    }
    return out;
}

static Tensor with_time_channel(const Tensor& x, double t_frac) {
    int64_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
    Tensor out({c + 1, h, w});
    for (int64_t i = 0; i < c * h * w; ++i) out[i] = x[i];
    double* tc = out.data() + c * h * w;
    for (int64_t i = 0; i < h * w; ++i) tc[i] = t_frac;
    return out;
}

Tensor ConvDenoiser::forward(const Tensor& x, double t_frac) const {
    ConvTrace trace;
    return forward_traced(*this, x, t_frac, trace);
}

Tensor forward_traced(const ConvDenoiser& net, const Tensor& x, double t_frac, ConvTrace& trace) {
    if (x.rank() != 3 || x.dim(0) != net.latent_channels)
        throw std::invalid_argument("denoiser forward: expected [C,H,W] with C=" +
                                    std::to_string(net.latent_channels) + ", got " + x.shape_str());
    trace.pre.clear();
    trace.post.clear();
    trace.input = with_time_channel(x, t_frac);
    Tensor cur = trace.input;
    for (size_t li = 0; li < net.layers.size(); ++li) {
        Tensor pre = conv2d(cur, net.layers[li]);
        trace.pre.push_back(pre);
        if (li + 1 < net.layers.size()) {
            Tensor post = pre;
            for (int64_t i = 0; i < post.numel(); ++i) post[i] = std::tanh(post[i]);
            trace.post.push_back(post);
            cur = std::move(post);
        } else {
            cur = std::move(pre);
        }
    }
    return cur;
}

// dout -> accumulate weight/bias grads; returns grad wrt the layer input.
static Tensor conv2d_backward(const Tensor& input, const ConvLayer& layer, const Tensor& dout,
                              ConvLayer& grad) {
    int64_t in_c = input.dim(0), h = input.dim(1), w = input.dim(2);
    int64_t out_c = layer.weight.dim(0), k = layer.weight.dim(2);
    int64_t pad = k / 2;
    Tensor dinput({in_c, h, w});
    for (int64_t oc = 0; oc < out_c; ++oc) {
        const double* dplane = dout.data() + oc * h * w;
        double bsum = 0.0;
        for (int64_t i = 0; i < h * w; ++i) bsum += dplane[i];
        grad.bias[oc] += bsum;
        for (int64_t ic = 0; ic < in_c; ++ic) {
            const double* iplane = input.data() + ic * h * w;
            double* gkern = grad.weight.data() + (oc * in_c + ic) * k * k;
            const double* kern = layer.weight.data() + (oc * in_c + ic) * k * k;
            double* diplane = dinput.data() + ic * h * w;
            for (int64_t ky = 0; ky < k; ++ky) {
                for (int64_t kx = 0; kx < k; ++kx) {
                    double wsum = 0.0;
                    double wv = kern[ky * k + kx];
                    int64_t y0 = std::max<int64_t>(0, pad - ky);
                    int64_t y1 = std::min<int64_t>(h, h + pad - ky);
                    for (int64_t y = y0; y < y1; ++y) {
                        int64_t sy = y + ky - pad;
                        int64_t x0 = std::max<int64_t>(0, pad - kx);
                        int64_t x1 = std::min<int64_t>(w, w + pad - kx);
                        const double* srow = iplane + sy * w + (x0 + kx - pad);
                        const double* drow = dplane + y * w + x0;
                        double* dirow = diplane + sy * w + (x0 + kx - pad);
                        for (int64_t xx = 0; xx < x1 - x0; ++xx) {
                            wsum += drow[xx] * srow[xx];
                            dirow[xx] += wv * drow[xx];
                        }
                    }
                    gkern[ky * k + kx] += wsum;
                }
            }
        }
    }
    return dinput;
}

void backward_into(const ConvDenoiser& net, const ConvTrace& trace, const Tensor& dout,
                   ConvDenoiser& grads) {
    if (grads.layers.size() != net.layers.size())
        throw std::invalid_argument("backward: grads architecture mismatch");
    Tensor cur = dout;
    for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
        if (static_cast<size_t>(li) + 1 < net.layers.size()) {
            // through tanh: d pre = d post * (1 - tanh^2)
            const Tensor& post = trace.post[static_cast<size_t>(li)];
            for (int64_t i = 0; i < cur.numel(); ++i) cur[i] *= 1.0 - post[i] * post[i];
        }
        const Tensor& input = li == 0 ? trace.input : trace.post[static_cast<size_t>(li - 1)];
        cur = conv2d_backward(input, net.layers[static_cast<size_t>(li)], cur,
                              grads.layers[static_cast<size_t>(li)]);
    }
}

ConvDenoiser zeros_like(const ConvDenoiser& net) {
    ConvDenoiser z = net;
    for (auto& l : z.layers) {
        l.weight = Tensor(l.weight.dims());
        l.bias = Tensor(l.bias.dims());
    }
    return z;
}

int64_t param_count(const ConvDenoiser& net) {
    int64_t n = 0;
    for (const auto& l : net.layers) n += l.weight.numel() + l.bias.numel();
    return n;
}

static std::pair<Tensor*, int64_t> locate(ConvDenoiser& net, int64_t idx) {
    for (auto& l : net.layers) {
        if (idx < l.weight.numel()) return {&l.weight, idx};
        idx -= l.weight.numel();
        if (idx < l.bias.numel()) return {&l.bias, idx};
        idx -= l.bias.numel();
    }
    throw std::out_of_range("denoiser param index");
}

double get_param(const ConvDenoiser& net, int64_t idx) {
    auto [t, off] = locate(const_cast<ConvDenoiser&>(net), idx);
    return (*t)[off];
}

void add_param(ConvDenoiser& net, int64_t idx, double delta) {
    auto [t, off] = locate(net, idx);
    (*t)[off] += delta;
}

void axpy_params(ConvDenoiser& dst, double a, const ConvDenoiser& src) {
    for (size_t li = 0; li < dst.layers.size(); ++li) {
        auto& d = dst.layers[li];
        const auto& s = src.layers[li];
        for (int64_t i = 0; i < d.weight.numel(); ++i) d.weight[i] += a * s.weight[i];
        for (int64_t i = 0; i < d.bias.numel(); ++i) d.bias[i] += a * s.bias[i];
    }
}

void scale_params(ConvDenoiser& net, double a) {
    for (auto& l : net.layers) {
        l.weight *= a;
        l.bias *= a;
    }
}

void save_denoiser(const std::filesystem::path& path, const ConvDenoiser& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path.string());
    std::vector<const Tensor*> tensors;
    for (const auto& l : net.layers) {
        tensors.push_back(&l.weight);
        tensors.push_back(&l.bias);
    }
    write_tagged(os,
                 {{"arch", "conv3"},
                  {"latent_channels", std::to_string(net.latent_channels)},
                  {"hidden", std::to_string(net.hidden)},
                  {"ksize", std::to_string(net.ksize)}},
                 tensors);
}

ConvDenoiser load_denoiser(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path.string());
    auto header = read_tagged_header(is);
    ConvDenoiser net;
    std::string arch;
    for (const auto& [k, v] : header) {
        if (k == "arch") arch = v;
        else if (k == "latent_channels") net.latent_channels = std::stoll(v);
        else if (k == "hidden") net.hidden = std::stoll(v);
        else if (k == "ksize") net.ksize = std::stoll(v);
    }
    if (arch != "conv3") throw std::runtime_error("denoiser load: unsupported arch '" + arch + "'");
    for (int layer = 0; layer < 3; ++layer) {
        ConvLayer l;
        l.weight = read_nct(is);
        l.bias = read_nct(is);
        net.layers.push_back(std::move(l));
    }
    net.validate();
    return net;
}

}  // namespace noisectl
