#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace noisectl {

// Dense row-major n-d array of doubles. Values, not views: copies are deep,
// every operation returns a fresh tensor. Shapes use int64 extents.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int64_t> dims);
    Tensor(std::vector<int64_t> dims, std::vector<double> data);

    static Tensor zeros(std::vector<int64_t> dims) { return Tensor(std::move(dims)); }
    static Tensor full(std::vector<int64_t> dims, double value);

    const std::vector<int64_t>& dims() const { return dims_; }
    int64_t rank() const { return static_cast<int64_t>(dims_.size()); }
    int64_t numel() const { return static_cast<int64_t>(data_.size()); }
    int64_t dim(int i) const { return dims_[static_cast<size_t>(i)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }
    double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }

    bool same_shape(const Tensor& other) const { return dims_ == other.dims_; }
    std::string shape_str() const;

    Tensor& operator+=(const Tensor& other);
    Tensor& operator-=(const Tensor& other);
    Tensor& operator*=(double s);

    friend Tensor operator+(Tensor a, const Tensor& b) { a += b; return a; }
    friend Tensor operator-(Tensor a, const Tensor& b) { a -= b; return a; }
    friend Tensor operator*(Tensor a, double s) { a *= s; return a; }
    friend Tensor operator*(double s, Tensor a) { a *= s; return a; }

private:
    std::vector<int64_t> dims_;
    std::vector<double> data_;
};

// out[i] = a[i] * b[i]; shapes must match.
Tensor hadamard(const Tensor& a, const Tensor& b);

// Mixes the leading axis: out[p] = sum_q M[p][q] * stacked[q]. M is [V,V],
// stacked is [V, ...]; trailing axes pass through unchanged.
Tensor view_mix(const Tensor& M, const Tensor& stacked);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double kurtosis = 0.0;  // excess, m4/m2^2 - 3
};

// Needs at least two elements.
Moments moments(const Tensor& t);

// Pearson correlation over flattened values; shapes must match.
double correlation(const Tensor& a, const Tensor& b);

double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace noisectl
