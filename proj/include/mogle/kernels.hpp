#pragma once

#include <cstdint>

// Dense float kernels behind the tensor ops. The primary versions are
// OpenMP-parallel; every output element is owned by exactly one thread and
// accumulated in a fixed order, so results are bitwise reproducible for any
// thread count. kernels::serial holds plain reference implementations that
// stay in the build for tests and the benchmark target.
namespace mogle::kernels {

// c[m*n] = op(a) * op(b) (+ c when accumulate). op(x) transposes when the
// flag is set; a is m*k (or k*m transposed), b is k*n (or n*k transposed).
void gemm(const float* a, const float* b, float* c, int m, int k, int n,
          bool trans_a, bool trans_b, bool accumulate);

void ew_add(const float* a, const float* b, float* out, int64_t n);
void ew_mul(const float* a, const float* b, float* out, int64_t n);
void scale(const float* a, float s, float* out, int64_t n);
// y += alpha * x
void axpy(float alpha, const float* x, float* y, int64_t n);

void gelu(const float* x, float* y, int64_t n);
// gx += gy * gelu'(x)
void gelu_grad(const float* x, const float* gy, float* gx, int64_t n);

void softmax_rows(const float* x, float* y, int rows, int cols);
// gx += y .* (gy - rowsum(gy .* y))
void softmax_rows_grad(const float* y, const float* gy, float* gx, int rows, int cols);

// y = xhat * gain + bias with xhat = (x - mean) * invstd per row.
// xhat and invstd are saved for the backward pass.
void layernorm_rows(const float* x, const float* gain, const float* bias,
                    float* y, float* xhat, float* invstd, int rows, int cols,
                    float eps);
void layernorm_rows_grad(const float* xhat, const float* invstd, const float* gain,
                         const float* gy, float* gx, float* ggain, float* gbias,
                         int rows, int cols);

namespace serial {
void gemm(const float* a, const float* b, float* c, int m, int k, int n,
          bool trans_a, bool trans_b, bool accumulate);
void ew_add(const float* a, const float* b, float* out, int64_t n);
void ew_mul(const float* a, const float* b, float* out, int64_t n);
void scale(const float* a, float s, float* out, int64_t n);
void gelu(const float* x, float* y, int64_t n);
void softmax_rows(const float* x, float* y, int rows, int cols);
void layernorm_rows(const float* x, const float* gain, const float* bias,
                    float* y, float* xhat, float* invstd, int rows, int cols,
                    float eps);
}  // namespace serial

}  // namespace mogle::kernels
