#include "noisectl/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace noisectl {

static int64_t checked_numel(const std::vector<int64_t>& dims) {
    if (dims.empty())
        throw std::invalid_argument("tensor: empty shape");
    int64_t n = 1;
    for (int64_t d : dims) {
        if (d <= 0)
            throw std::invalid_argument("tensor: non-positive extent in shape");
        n *= d;
    }
    return n;
}

Tensor::Tensor(std::vector<int64_t> dims)
    : dims_(std::move(dims)), data_(static_cast<size_t>(checked_numel(dims_)), 0.0) {}

Tensor::Tensor(std::vector<int64_t> dims, std::vector<double> data) : dims_(std::move(dims)) {
    int64_t n = checked_numel(dims_);
    if (n != static_cast<int64_t>(data.size()))
        throw std::invalid_argument("tensor: data length does not match shape");
    data_ = std::move(data);
}

Tensor Tensor::full(std::vector<int64_t> dims, double value) {
    Tensor t(std::move(dims));
    for (auto& v : t.data_) v = value;
    return t;
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
    os << "]";
    return os.str();
}

Tensor& Tensor::operator+=(const Tensor& other) {
    if (!same_shape(other))
        throw std::invalid_argument("tensor add: shape mismatch " + shape_str() + " vs " + other.shape_str());
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
    if (!same_shape(other))
        throw std::invalid_argument("tensor sub: shape mismatch " + shape_str() + " vs " + other.shape_str());
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Tensor& Tensor::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("hadamard: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Tensor out = a;
    const double* pb = b.data();
    double* po = out.data();
    for (int64_t i = 0; i < out.numel(); ++i) po[i] *= pb[i];
    return out;
}

Tensor view_mix(const Tensor& M, const Tensor& stacked) {
    if (M.rank() != 2 || M.dim(0) != M.dim(1))
        throw std::invalid_argument("view_mix: M must be square, got " + M.shape_str());
    int64_t v = M.dim(0);
    if (stacked.rank() < 1 || stacked.dim(0) != v)
        throw std::invalid_argument("view_mix: leading dim of stacked is " + stacked.shape_str() +
                                    ", expected " + std::to_string(v));
    int64_t inner = stacked.numel() / v;
    Tensor out(stacked.dims());
    const double* src = stacked.data();
    const double* m = M.data();
    double* dst = out.data();
    for (int64_t p = 0; p < v; ++p) {
        double* row = dst + p * inner;
        for (int64_t q = 0; q < v; ++q) {
            double w = m[p * v + q];
            if (w == 0.0) continue;
            const double* in = src + q * inner;
            for (int64_t i = 0; i < inner; ++i) row[i] += w * in[i];
        }
    }
    return out;
}

Moments moments(const Tensor& t) {
    int64_t n = t.numel();
    if (n < 2)
        throw std::invalid_argument("moments: need at least 2 elements");
    const double* p = t.data();
    double mean = 0.0;
    for (int64_t i = 0; i < n; ++i) mean += p[i];
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        double d = p[i] - mean;
        double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    Moments out;
    out.mean = mean;
    out.variance = m2 / static_cast<double>(n - 1);
    double m2n = m2 / static_cast<double>(n);
    double m4n = m4 / static_cast<double>(n);
    out.kurtosis = (m2n > 0.0) ? m4n / (m2n * m2n) - 3.0 : 0.0;
    return out;
}

double correlation(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("correlation: shape mismatch");
    int64_t n = a.numel();
    if (n < 2)
        throw std::invalid_argument("correlation: need at least 2 elements");
    const double* pa = a.data();
    const double* pb = b.data();
    double ma = 0.0, mb = 0.0;
    for (int64_t i = 0; i < n; ++i) { ma += pa[i]; mb += pb[i]; }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        double da = pa[i] - ma, db = pb[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int64_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace noisectl
