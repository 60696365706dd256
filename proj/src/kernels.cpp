#include "mogle/kernels.hpp"

#include <cmath>
#include <cstring>

namespace mogle::kernels {

namespace {
// Work below this many scalar ops is not worth a parallel region.
constexpr int64_t kParallelCutoff = 16384;

inline bool go_parallel(int64_t work) {
#ifdef _OPENMP
    return work >= kParallelCutoff;
#else
    (void)work;
    return false;
#endif
}

constexpr float kInvSqrt2 = 0.70710678118654752f;
constexpr float kInvSqrt2Pi = 0.39894228040143268f;

inline float gelu_one(float x) { return 0.5f * x * (1.0f + std::erf(x * kInvSqrt2)); }
inline float gelu_grad_one(float x) {
    const float cdf = 0.5f * (1.0f + std::erf(x * kInvSqrt2));
    const float pdf = kInvSqrt2Pi * std::exp(-0.5f * x * x);
    return cdf + x * pdf;
}
}  // namespace

void gemm(const float* a, const float* b, float* c, int m, int k, int n,
          bool trans_a, bool trans_b, bool accumulate) {
    const int64_t work = int64_t(m) * k * n;
#pragma omp parallel for schedule(static) if (go_parallel(work))
    for (int i = 0; i < m; ++i) {
        float* crow = c + int64_t(i) * n;
        if (!accumulate) {
            std::memset(crow, 0, sizeof(float) * n);
        }
        if (!trans_b) {
            // stream rows of b; inner loop over j vectorizes
            for (int l = 0; l < k; ++l) {
                const float av = trans_a ? a[int64_t(l) * m + i] : a[int64_t(i) * k + l];
                const float* brow = b + int64_t(l) * n;
                for (int j = 0; j < n; ++j) {
                    crow[j] += av * brow[j];
                }
            }
        } else if (!trans_a) {
            // contiguous dot products
            const float* arow = a + int64_t(i) * k;
            for (int j = 0; j < n; ++j) {
                const float* brow = b + int64_t(j) * k;
                float acc = 0.0f;
                for (int l = 0; l < k; ++l) {
                    acc += arow[l] * brow[l];
                }
                crow[j] += acc;
            }
        } else {
            for (int j = 0; j < n; ++j) {
                float acc = 0.0f;
                for (int l = 0; l < k; ++l) {
                    acc += a[int64_t(l) * m + i] * b[int64_t(j) * k + l];
                }
                crow[j] += acc;
            }
        }
    }
}

void ew_add(const float* a, const float* b, float* out, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n))
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void ew_mul(const float* a, const float* b, float* out, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n))
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const float* a, float s, float* out, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n))
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void axpy(float alpha, const float* x, float* y, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n))
    for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gelu(const float* x, float* y, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(4 * n))
    for (int64_t i = 0; i < n; ++i) y[i] = gelu_one(x[i]);
}

void gelu_grad(const float* x, const float* gy, float* gx, int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(4 * n))
    for (int64_t i = 0; i < n; ++i) gx[i] += gy[i] * gelu_grad_one(x[i]);
}

void softmax_rows(const float* x, float* y, int rows, int cols) {
    const int64_t work = int64_t(rows) * cols * 4;
#pragma omp parallel for schedule(static) if (go_parallel(work))
    for (int i = 0; i < rows; ++i) {
        const float* xr = x + int64_t(i) * cols;
        float* yr = y + int64_t(i) * cols;
        float mx = xr[0];
        for (int j = 1; j < cols; ++j) mx = xr[j] > mx ? xr[j] : mx;
        float sum = 0.0f;
        for (int j = 0; j < cols; ++j) {
            yr[j] = std::exp(xr[j] - mx);
            sum += yr[j];
        }
        const float inv = 1.0f / sum;
        for (int j = 0; j < cols; ++j) yr[j] *= inv;
    }
}

void softmax_rows_grad(const float* y, const float* gy, float* gx, int rows, int cols) {
    const int64_t work = int64_t(rows) * cols * 3;
#pragma omp parallel for schedule(static) if (go_parallel(work))
    for (int i = 0; i < rows; ++i) {
        const float* yr = y + int64_t(i) * cols;
        const float* gr = gy + int64_t(i) * cols;
        float* gxr = gx + int64_t(i) * cols;
        float dot = 0.0f;
        for (int j = 0; j < cols; ++j) dot += yr[j] * gr[j];
        for (int j = 0; j < cols; ++j) gxr[j] += yr[j] * (gr[j] - dot);
    }
}

void layernorm_rows(const float* x, const float* gain, const float* bias,
                    float* y, float* xhat, float* invstd, int rows, int cols,
                    float eps) {
    const int64_t work = int64_t(rows) * cols * 4;
#pragma omp parallel for schedule(static) if (go_parallel(work))
    for (int i = 0; i < rows; ++i) {
        const float* xr = x + int64_t(i) * cols;
        float* yr = y + int64_t(i) * cols;
        float* hr = xhat + int64_t(i) * cols;
        float mean = 0.0f;
        for (int j = 0; j < cols; ++j) mean += xr[j];
        mean /= float(cols);
        float var = 0.0f;
        for (int j = 0; j < cols; ++j) {
            const float d = xr[j] - mean;
            var += d * d;
        }
        var /= float(cols);
        const float is = 1.0f / std::sqrt(var + eps);
        invstd[i] = is;
        for (int j = 0; j < cols; ++j) {
            hr[j] = (xr[j] - mean) * is;
            yr[j] = hr[j] * gain[j] + bias[j];
        }
    }
}

void layernorm_rows_grad(const float* xhat, const float* invstd, const float* gain,
                         const float* gy, float* gx, float* ggain, float* gbias,
                         int rows, int cols) {
    const int64_t work = int64_t(rows) * cols * 4;
#pragma omp parallel for schedule(static) if (go_parallel(work))
    for (int i = 0; i < rows; ++i) {
        const float* hr = xhat + int64_t(i) * cols;
        const float* gr = gy + int64_t(i) * cols;
        float* gxr = gx + int64_t(i) * cols;
        float sum_g = 0.0f;
        float sum_gh = 0.0f;
        for (int j = 0; j < cols; ++j) {
            const float gt = gr[j] * gain[j];
            sum_g += gt;
            sum_gh += gt * hr[j];
        }
        const float mg = sum_g / float(cols);
        const float mgh = sum_gh / float(cols);
        for (int j = 0; j < cols; ++j) {
            const float gt = gr[j] * gain[j];
            gxr[j] += invstd[i] * (gt - mg - hr[j] * mgh);
        }
    }
    if (ggain != nullptr || gbias != nullptr) {
#pragma omp parallel for schedule(static) if (go_parallel(work))
        for (int j = 0; j < cols; ++j) {
            float sg = 0.0f;
            float sb = 0.0f;
            for (int i = 0; i < rows; ++i) {
                sg += gy[int64_t(i) * cols + j] * xhat[int64_t(i) * cols + j];
                sb += gy[int64_t(i) * cols + j];
            }
            if (ggain) ggain[j] += sg;
            if (gbias) gbias[j] += sb;
        }
    }
}

namespace serial {

void gemm(const float* a, const float* b, float* c, int m, int k, int n,
          bool trans_a, bool trans_b, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            float acc = accumulate ? c[int64_t(i) * n + j] : 0.0f;
            for (int l = 0; l < k; ++l) {
                const float av = trans_a ? a[int64_t(l) * m + i] : a[int64_t(i) * k + l];
                const float bv = trans_b ? b[int64_t(j) * k + l] : b[int64_t(l) * n + j];
                acc += av * bv;
            }
            c[int64_t(i) * n + j] = acc;
        }
    }
}

void ew_add(const float* a, const float* b, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void ew_mul(const float* a, const float* b, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const float* a, float s, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void gelu(const float* x, float* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) y[i] = gelu_one(x[i]);
}

void softmax_rows(const float* x, float* y, int rows, int cols) {
    for (int i = 0; i < rows; ++i) {
        const float* xr = x + int64_t(i) * cols;
        float* yr = y + int64_t(i) * cols;
        float mx = xr[0];
        for (int j = 1; j < cols; ++j) mx = xr[j] > mx ? xr[j] : mx;
        float sum = 0.0f;
        for (int j = 0; j < cols; ++j) {
            yr[j] = std::exp(xr[j] - mx);
            sum += yr[j];
        }
        for (int j = 0; j < cols; ++j) yr[j] /= sum;
    }
}

void layernorm_rows(const float* x, const float* gain, const float* bias,
                    float* y, float* xhat, float* invstd, int rows, int cols,
                    float eps) {
    for (int i = 0; i < rows; ++i) {
        const float* xr = x + int64_t(i) * cols;
        float mean = 0.0f;
        for (int j = 0; j < cols; ++j) mean += xr[j];
        mean /= float(cols);
        float var = 0.0f;
        for (int j = 0; j < cols; ++j) var += (xr[j] - mean) * (xr[j] - mean);
        var /= float(cols);
        const float is = 1.0f / std::sqrt(var + eps);
        invstd[i] = is;
        for (int j = 0; j < cols; ++j) {
            xhat[int64_t(i) * cols + j] = (xr[j] - mean) * is;
            y[int64_t(i) * cols + j] = xhat[int64_t(i) * cols + j] * gain[j] + bias[j];
        }
    }
}

}  // namespace serial

}  // namespace mogle::kernels
