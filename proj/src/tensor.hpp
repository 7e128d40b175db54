#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace mpdcnn {

using Shape = std::vector<int64_t>;

std::string shape_str(const Shape& s);

inline int64_t shape_numel(const Shape& s) {
    int64_t n = 1;
    for (int64_t d : s) n *= d;
    return n;
}

// Dense contiguous tensor, NCHW order for 4-D data. Instantiated for float
// (training/inference) and double (gradient-check tooling); integer
// instantiations carry masks and pooling indices.
template <typename T>
class Tensor {
public:
    Tensor() = default;  // empty placeholder; public ops reject it

    explicit Tensor(Shape shape) : shape_(std::move(shape)) {
        validate_shape();
        data_.assign(static_cast<size_t>(shape_numel(shape_)), T{});
    }

    Tensor(Shape shape, std::vector<T> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        validate_shape();
        require(static_cast<int64_t>(data_.size()) == shape_numel(shape_),
                ErrorKind::argument,
                "tensor data length " + std::to_string(data_.size()) +
                    " does not match shape " + shape_str(shape_));
    }

    static Tensor full(Shape shape, T value) {
        Tensor t(std::move(shape));
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    bool empty() const { return data_.empty(); }
    int rank() const { return static_cast<int>(shape_.size()); }
    int64_t numel() const { return static_cast<int64_t>(data_.size()); }
    const Shape& shape() const { return shape_; }

    int64_t dim(int i) const {
        require(i >= 0 && i < rank(), ErrorKind::argument,
                "dimension index " + std::to_string(i) + " out of range for " +
                    shape_str(shape_));
        return shape_[static_cast<size_t>(i)];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
    const T& operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

    // 4-D accessors (N, C, H, W)
    int64_t n() const { return dim4(0); }
    int64_t c() const { return dim4(1); }
    int64_t h() const { return dim4(2); }
    int64_t w() const { return dim4(3); }

    int64_t index4(int64_t n, int64_t c, int64_t h, int64_t w) const {
        return ((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w;
    }
    T& at(int64_t n, int64_t c, int64_t h, int64_t w) {
        return data_[static_cast<size_t>(index4(n, c, h, w))];
    }
    const T& at(int64_t n, int64_t c, int64_t h, int64_t w) const {
        return data_[static_cast<size_t>(index4(n, c, h, w))];
    }

    Tensor reshaped(Shape s) const {
        require(shape_numel(s) == numel(), ErrorKind::argument,
                "cannot reshape " + shape_str(shape_) + " to " + shape_str(s));
        Tensor t;
        t.shape_ = std::move(s);
        t.data_ = data_;
        return t;
    }

    template <typename U>
    Tensor<U> cast() const {
        std::vector<U> out(data_.size());
        for (size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
        return Tensor<U>(shape_, std::move(out));
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

private:
    int64_t dim4(int i) const {
        require(rank() == 4, ErrorKind::argument,
                "expected 4-D tensor, got " + shape_str(shape_));
        return shape_[static_cast<size_t>(i)];
    }

    void validate_shape() const {
        require(!shape_.empty(), ErrorKind::argument,
                "zero-dimensional tensors are forbidden");
        for (int64_t d : shape_)
            require(d > 0, ErrorKind::argument,
                    "non-positive extent in shape " + shape_str(shape_));
    }

    Shape shape_;
    std::vector<T> data_;
};

template <typename T>
bool all_finite(const Tensor<T>& t) {
    if constexpr (std::is_floating_point_v<T>) {
        for (int64_t i = 0; i < t.numel(); ++i)
            if (!std::isfinite(t[i])) return false;
    }
    return true;
}

// NaN/Inf detection is a checked failure in debug builds only.
template <typename T>
void debug_check_finite(const Tensor<T>& t, const char* where) {
#ifndef NDEBUG
    require(all_finite(t), ErrorKind::numeric,
            std::string("non-finite value produced by ") + where);
#else
    (void)t;
    (void)where;
#endif
}

namespace detail {
template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
    require(a.same_shape(b), ErrorKind::argument,
            std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                " vs " + shape_str(b.shape()));
}
}  // namespace detail

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape(a, b, "add");
    Tensor<T> out(a.shape());
    for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] + b[i];
    debug_check_finite(out, "add");
    return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape(a, b, "sub");
    Tensor<T> out(a.shape());
    for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] - b[i];
    debug_check_finite(out, "sub");
    return out;
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape(a, b, "mul");
    Tensor<T> out(a.shape());
    for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] * b[i];
    debug_check_finite(out, "mul");
    return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T s) {
    Tensor<T> out(a.shape());
    for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] * s;
    debug_check_finite(out, "scale");
    return out;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& a) {
    Tensor<T> out(a.shape());
    for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] > T{0} ? a[i] : T{0};
    return out;
}

// Passes the upstream gradient where the forward input was positive.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& upstream) {
    detail::check_same_shape(input, upstream, "relu_backward");
    Tensor<T> out(input.shape());
    for (int64_t i = 0; i < input.numel(); ++i)
        out[i] = input[i] > T{0} ? upstream[i] : T{0};
    return out;
}

// Nearest-neighbor upsampling: each source pixel becomes a factor x factor block.
template <typename T>
Tensor<T> upsample_nearest(const Tensor<T>& x, int factor) {
    require(factor >= 1, ErrorKind::argument,
            "upsample factor must be >= 1, got " + std::to_string(factor));
    if (factor == 1) return x;
    const int64_t N = x.n(), C = x.c(), H = x.h(), W = x.w();
    Tensor<T> out({N, C, H * factor, W * factor});
    const int64_t ow = W * factor;
    for (int64_t nc = 0; nc < N * C; ++nc) {
        const T* src = x.data() + nc * H * W;
        T* dst = out.data() + nc * H * factor * ow;
        for (int64_t h = 0; h < H; ++h) {
            T* row0 = dst + h * factor * ow;
            for (int64_t w = 0; w < W; ++w) {
                const T v = src[h * W + w];
                for (int f = 0; f < factor; ++f) row0[w * factor + f] = v;
            }
            for (int f = 1; f < factor; ++f)
                std::copy(row0, row0 + ow, row0 + f * ow);
        }
    }
    return out;
}

// Backward of nearest-neighbor upsampling: sums gradients over each block.
template <typename T>
Tensor<T> upsample_nearest_backward(const Tensor<T>& upstream, int factor) {
    require(factor >= 1, ErrorKind::argument,
            "upsample factor must be >= 1, got " + std::to_string(factor));
    if (factor == 1) return upstream;
    const int64_t N = upstream.n(), C = upstream.c();
    const int64_t UH = upstream.h(), UW = upstream.w();
    require(UH % factor == 0 && UW % factor == 0, ErrorKind::argument,
            "upstream dims " + shape_str(upstream.shape()) +
                " not divisible by factor " + std::to_string(factor));
    const int64_t H = UH / factor, W = UW / factor;
    Tensor<T> out({N, C, H, W});
    for (int64_t nc = 0; nc < N * C; ++nc) {
        const T* src = upstream.data() + nc * UH * UW;
        T* dst = out.data() + nc * H * W;
        for (int64_t uh = 0; uh < UH; ++uh)
            for (int64_t uw = 0; uw < UW; ++uw)
                dst[(uh / factor) * W + (uw / factor)] += src[uh * UW + uw];
    }
    return out;
}

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

}  // namespace mpdcnn
