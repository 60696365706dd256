#pragma once

#include <cstdint>

#include "mogle/image_io.hpp"
#include "mogle/tensor.hpp"

namespace mogle {

// Invertible patch tokenizer: non-overlapping p x p x 3 patches, each mapped
// through a frozen seeded orthonormal token_dim x token_dim projection.
// decode is the transpose map, so roundtrips are exact up to float rounding.
class PatchCodec {
  public:
    PatchCodec(int patch_size, uint64_t seed);

    int patch_size() const { return patch_; }
    int token_dim() const { return dim_; }
    // tokens per image axis pair: (h/p) * (w/p)
    int token_count(int height, int width) const;

    // image must have extents divisible by the patch size; rows of the
    // result are patch tokens in row-major patch order.
    Tensor encode(const Image& image) const;
    // exact inverse of encode; output clamped to [0,1] at emission.
    Image decode(const Tensor& tokens, int height, int width) const;

    // max |Q^T Q - I|; construction guarantees < 1e-5
    double orthonormality_error() const;
    const Tensor& projection() const { return projection_; }

  private:
    int patch_;
    int dim_;
    Tensor projection_;  // dim x dim, row i = i-th output basis functional
};

}  // namespace mogle
