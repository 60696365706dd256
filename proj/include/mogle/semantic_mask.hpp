#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mogle/image_io.hpp"
#include "mogle/patch_codec.hpp"
#include "mogle/tensor.hpp"

namespace mogle {

// H x W grid of class indices in {0..n_classes}; 0 is the background.
struct SemanticMask {
    int height = 0;
    int width = 0;
    int n_classes = 0;
    std::vector<uint8_t> classes;

    SemanticMask() = default;
    SemanticMask(int h, int w, int n)
        : height(h), width(w), n_classes(n), classes(size_t(h) * w, 0) {}

    uint8_t at(int y, int x) const { return classes[size_t(y) * width + x]; }
    void set(int y, int x, uint8_t cls) { classes[size_t(y) * width + x] = cls; }
};

// Full color-coded mask plus one binary grid per foreground class.
struct MaskComponents {
    Image global_colored;                          // M0
    std::vector<std::vector<uint8_t>> components;  // n grids, values in {0,1}
    int height = 0;
    int width = 0;
};

// component_i(x,y) = 1 iff mask(x,y) = i; the colored mask maps every pixel
// through the class palette. Out-of-range class indices are rejected.
MaskComponents decouple(const SemanticMask& mask);

// n+1 token sequences: index 0 encodes the colored full mask, index i the
// i-th binary component replicated to three channels.
std::vector<Tensor> to_token_inputs(const MaskComponents& comps, const PatchCodec& codec);

SemanticMask empty_mask(int height, int width, int n_classes = 4);

// PGM (P5) of raw class indices.
void write_mask_pgm(const std::string& path, const SemanticMask& mask);
SemanticMask read_mask_pgm(const std::string& path, int n_classes = 4);

}  // namespace mogle
