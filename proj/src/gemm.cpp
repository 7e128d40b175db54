#include "gemm.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "error.hpp"
#include "threadpool.hpp"

namespace mpdcnn {

namespace {

// 64-byte register tiles; element alignment so plain dereference emits
// unaligned loads.
template <typename T>
struct VecTraits;

template <>
struct VecTraits<float> {
    typedef float v __attribute__((vector_size(64), aligned(4), may_alias));
    static constexpr int width = 16;
};

template <>
struct VecTraits<double> {
    typedef double v __attribute__((vector_size(64), aligned(8), may_alias));
    static constexpr int width = 8;
};

constexpr int kMR = 8;   // microkernel rows
constexpr int kNRV = 2;  // microkernel column vectors

constexpr int64_t kKC = 256;  // k block: B panel of kKC x NR stays L1-resident
constexpr int64_t kMC = 96;   // m block: packed A block stays L2-resident

template <typename T>
inline typename VecTraits<T>::v broadcast(T x) {
    typename VecTraits<T>::v out;
    for (int i = 0; i < VecTraits<T>::width; ++i) out[i] = x;
    return out;
}

// Computes an MR x NR tile: Ctile (+)= Ap * Bp over kc steps. Ap is packed
// MR-major per k step, Bp is packed NR-major per k step.
template <typename T>
void micro_kernel(int64_t kc, const T* ap, const T* bp, T alpha, T* c,
                  int64_t ldc, bool accumulate) {
    using V = typename VecTraits<T>::v;
    constexpr int W = VecTraits<T>::width;
    constexpr int NR = kNRV * W;

    V acc[kMR][kNRV] = {};
    for (int64_t k = 0; k < kc; ++k) {
        V b0 = *reinterpret_cast<const V*>(bp + k * NR);
        V b1 = *reinterpret_cast<const V*>(bp + k * NR + W);
        const T* arow = ap + k * kMR;
#pragma GCC unroll 8
        for (int r = 0; r < kMR; ++r) {
            V av = broadcast(arow[r]);
            acc[r][0] += av * b0;
            acc[r][1] += av * b1;
        }
    }
    const V valpha = broadcast(alpha);
    for (int r = 0; r < kMR; ++r) {
        V* crow0 = reinterpret_cast<V*>(c + r * ldc);
        V* crow1 = reinterpret_cast<V*>(c + r * ldc + W);
        if (accumulate) {
            *crow0 += valpha * acc[r][0];
            *crow1 += valpha * acc[r][1];
        } else {
            *crow0 = valpha * acc[r][0];
            *crow1 = valpha * acc[r][1];
        }
    }
}

// Packs an (mc x kc) block of op(A) into MR-row panels, zero-padding the tail.
template <typename T>
void pack_a(bool trans, const T* a, int64_t lda, int64_t i0, int64_t p0,
            int64_t mc, int64_t kc, T* ap) {
    for (int64_t ir = 0; ir < mc; ir += kMR) {
        const int64_t rows = std::min<int64_t>(kMR, mc - ir);
        T* panel = ap + ir * kc;
        for (int64_t k = 0; k < kc; ++k) {
            T* dst = panel + k * kMR;
            if (!trans) {
                for (int64_t r = 0; r < rows; ++r)
                    dst[r] = a[(i0 + ir + r) * lda + p0 + k];
            } else {
                const T* src = a + (p0 + k) * lda + i0 + ir;
                for (int64_t r = 0; r < rows; ++r) dst[r] = src[r];
            }
            for (int64_t r = rows; r < kMR; ++r) dst[r] = T{0};
        }
    }
}

// Packs a (kc x nc) block of op(B) into NR-column panels, zero-padding the tail.
template <typename T>
void pack_b(bool trans, const T* b, int64_t ldb, int64_t p0, int64_t j0,
            int64_t kc, int64_t nc, T* bp) {
    constexpr int NR = kNRV * VecTraits<T>::width;
    for (int64_t jr = 0; jr < nc; jr += NR) {
        const int64_t cols = std::min<int64_t>(NR, nc - jr);
        T* panel = bp + jr * kc;
        for (int64_t k = 0; k < kc; ++k) {
            T* dst = panel + k * NR;
            if (!trans) {
                const T* src = b + (p0 + k) * ldb + j0 + jr;
                for (int64_t j = 0; j < cols; ++j) dst[j] = src[j];
            } else {
                for (int64_t j = 0; j < cols; ++j)
                    dst[j] = b[(j0 + jr + j) * ldb + p0 + k];
            }
            for (int64_t j = cols; j < NR; ++j) dst[j] = T{0};
        }
    }
}

template <typename T>
struct Workspace {
    std::vector<T> ap, bp;
    alignas(64) T ctile[kMR * kNRV * VecTraits<T>::width];
};

template <typename T>
Workspace<T>& workspace() {
    thread_local Workspace<T> ws;
    return ws;
}

// Single-thread GEMM over a column slice [j0, j0+nc) of C.
template <typename T>
void gemm_slice(bool trans_a, bool trans_b, int64_t m, int64_t k, T alpha,
                const T* a, int64_t lda, const T* b, int64_t ldb, T beta,
                T* c, int64_t ldc, int64_t j0, int64_t nc) {
    constexpr int NR = kNRV * VecTraits<T>::width;
    Workspace<T>& ws = workspace<T>();
    ws.bp.resize(static_cast<size_t>(kKC * ((nc + NR - 1) / NR) * NR));
    ws.ap.resize(static_cast<size_t>(kMC * kKC));

    for (int64_t pc = 0; pc < k; pc += kKC) {
        const int64_t kc = std::min<int64_t>(kKC, k - pc);
        const bool first_k = (pc == 0);
        pack_b(trans_b, b, ldb, pc, j0, kc, nc, ws.bp.data());
        for (int64_t ic = 0; ic < m; ic += kMC) {
            const int64_t mc = std::min<int64_t>(kMC, m - ic);
            pack_a(trans_a, a, lda, ic, pc, mc, kc, ws.ap.data());
            for (int64_t jr = 0; jr < nc; jr += NR) {
                const int64_t cols = std::min<int64_t>(NR, nc - jr);
                for (int64_t ir = 0; ir < mc; ir += kMR) {
                    const int64_t rows = std::min<int64_t>(kMR, mc - ir);
                    const T* ap = ws.ap.data() + ir * kc;
                    const T* bp = ws.bp.data() + jr * kc;
                    const bool accumulate = !first_k || beta != T{0};
                    if (rows == kMR && cols == NR) {
                        micro_kernel(kc, ap, bp, alpha,
                                     c + (ic + ir) * ldc + j0 + jr, ldc,
                                     accumulate);
                    } else {
                        micro_kernel(kc, ap, bp, alpha, ws.ctile,
                                     static_cast<int64_t>(NR), false);
                        T* cdst = c + (ic + ir) * ldc + j0 + jr;
                        for (int64_t r = 0; r < rows; ++r)
                            for (int64_t j = 0; j < cols; ++j) {
                                if (accumulate)
                                    cdst[r * ldc + j] += ws.ctile[r * NR + j];
                                else
                                    cdst[r * ldc + j] = ws.ctile[r * NR + j];
                            }
                    }
                }
            }
        }
    }
}

template <typename T>
void gemm_impl(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k,
               T alpha, const T* a, int64_t lda, const T* b, int64_t ldb,
               T beta, T* c, int64_t ldc) {
    require(beta == T{0} || beta == T{1}, ErrorKind::argument,
            "gemm beta must be 0 or 1");
    if (m <= 0 || n <= 0) return;
    if (k <= 0) {
        if (beta == T{0})
            for (int64_t i = 0; i < m; ++i)
                std::fill(c + i * ldc, c + i * ldc + n, T{0});
        return;
    }
    constexpr int NR = kNRV * VecTraits<T>::width;
    // One contiguous column span per worker, rounded to whole NR panels so
    // packing never straddles a boundary.
    const int64_t panels = (n + NR - 1) / NR;
    parallel_for(panels, [&](int64_t pb, int64_t pe) {
        const int64_t j0 = pb * NR;
        const int64_t j1 = std::min<int64_t>(pe * NR, n);
        if (j0 < j1)
            gemm_slice(trans_a, trans_b, m, k, alpha, a, lda, b, ldb, beta, c,
                       ldc, j0, j1 - j0);
    });
}

}  // namespace

void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k,
          float alpha, const float* a, int64_t lda, const float* b,
          int64_t ldb, float beta, float* c, int64_t ldc) {
    gemm_impl(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k,
          double alpha, const double* a, int64_t lda, const double* b,
          int64_t ldb, double beta, double* c, int64_t ldc) {
    gemm_impl(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

}  // namespace mpdcnn
