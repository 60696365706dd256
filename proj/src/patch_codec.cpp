#include "mogle/patch_codec.hpp"

#include <cmath>
#include <vector>

#include "mogle/error.hpp"
#include "mogle/kernels.hpp"

namespace mogle {

namespace {

// Orthonormalizes a seeded Gaussian matrix with modified Gram-Schmidt in
// double precision; the result is deterministic in the seed.
std::vector<double> orthonormal_basis(int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> q(size_t(n) * n);
    for (auto& v : q) v = double(rng.normal());
    for (int i = 0; i < n; ++i) {
        double* qi = q.data() + size_t(i) * n;
        for (int j = 0; j < i; ++j) {
            const double* qj = q.data() + size_t(j) * n;
            double dot = 0.0;
            for (int k = 0; k < n; ++k) dot += qi[k] * qj[k];
            for (int k = 0; k < n; ++k) qi[k] -= dot * qj[k];
        }
        double norm = 0.0;
        for (int k = 0; k < n; ++k) norm += qi[k] * qi[k];
        norm = std::sqrt(norm);
        for (int k = 0; k < n; ++k) qi[k] /= norm;
    }
    return q;
}

}  // namespace

PatchCodec::PatchCodec(int patch_size, uint64_t seed) : patch_(patch_size) {
    if (patch_ <= 0) fail<ConfigError>("patch codec: patch size ", patch_, " must be positive");
    dim_ = 3 * patch_ * patch_;
    const std::vector<double> q = orthonormal_basis(dim_, seed);
    std::vector<float> qf(q.size());
    for (size_t i = 0; i < q.size(); ++i) qf[i] = float(q[i]);
    projection_ = Tensor::from({dim_, dim_}, std::move(qf));
}

int PatchCodec::token_count(int height, int width) const {
    return (height / patch_) * (width / patch_);
}

Tensor PatchCodec::encode(const Image& image) const {
    if (image.height <= 0 || image.width <= 0 || image.height % patch_ != 0 ||
        image.width % patch_ != 0) {
        fail("encode: image ", image.height, "x", image.width,
             " not divisible by patch size ", patch_);
    }
    const int rows = image.height / patch_;
    const int cols = image.width / patch_;
    const int count = rows * cols;
    // gather flattened patches, then tokens = patches * Q^T
    Tensor patches = Tensor::zeros({count, dim_});
    float* pd = patches.data();
    for (int pr = 0; pr < rows; ++pr) {
        for (int pc = 0; pc < cols; ++pc) {
            float* dst = pd + int64_t(pr * cols + pc) * dim_;
            int k = 0;
            for (int y = 0; y < patch_; ++y) {
                for (int x = 0; x < patch_; ++x) {
                    for (int c = 0; c < 3; ++c) {
                        dst[k++] = image.at(pr * patch_ + y, pc * patch_ + x, c);
                    }
                }
            }
        }
    }
    Tensor tokens = Tensor::zeros({count, dim_});
    kernels::gemm(patches.data(), projection_.data(), tokens.data(), count, dim_, dim_, false,
                  true, false);
    return tokens;
}

Image PatchCodec::decode(const Tensor& tokens, int height, int width) const {
    if (height % patch_ != 0 || width % patch_ != 0) {
        fail("decode: target ", height, "x", width, " not divisible by patch size ", patch_);
    }
    const int rows = height / patch_;
    const int cols = width / patch_;
    if (tokens.rank() != 2 || tokens.dim(0) != rows * cols || tokens.dim(1) != dim_) {
        fail("decode: tokens ", shape_str(tokens.shape()), " do not match ", rows * cols, "x",
             dim_, " for ", height, "x", width);
    }
    const int count = rows * cols;
    Tensor patches = Tensor::zeros({count, dim_});
    kernels::gemm(tokens.data(), projection_.data(), patches.data(), count, dim_, dim_, false,
                  false, false);
    Image img(height, width);
    const float* pd = patches.data();
    for (int pr = 0; pr < rows; ++pr) {
        for (int pc = 0; pc < cols; ++pc) {
            const float* src = pd + int64_t(pr * cols + pc) * dim_;
            int k = 0;
            for (int y = 0; y < patch_; ++y) {
                for (int x = 0; x < patch_; ++x) {
                    for (int c = 0; c < 3; ++c) {
                        float v = src[k++];
                        v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
                        img.at(pr * patch_ + y, pc * patch_ + x, c) = v;
                    }
                }
            }
        }
    }
    return img;
}

double PatchCodec::orthonormality_error() const {
    const float* q = projection_.data();
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            double dot = 0.0;
            for (int k = 0; k < dim_; ++k) {
                dot += double(q[size_t(k) * dim_ + i]) * double(q[size_t(k) * dim_ + j]);
            }
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(dot - target));
        }
    }
    return worst;
}

}  // namespace mogle
