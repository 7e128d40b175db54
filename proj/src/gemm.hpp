#pragma once

#include <cstdint>

namespace mpdcnn {

// Row-major GEMM: C = alpha * op(A) * op(B) + beta * C, with op(X) = X or X^T.
// A is stored (trans_a ? K x M : M x K) with leading dimension lda; B likewise.
// beta must be 0 (overwrite) or 1 (accumulate). Internally blocked and packed;
// parallelized over disjoint column slices, and every C element is produced by
// exactly one thread with a fixed summation order, so results are identical
// for any thread count.
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k,
          float alpha, const float* a, int64_t lda, const float* b, int64_t ldb,
          float beta, float* c, int64_t ldc);

void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k,
          double alpha, const double* a, int64_t lda, const double* b,
          int64_t ldb, double beta, double* c, int64_t ldc);

}  // namespace mpdcnn
