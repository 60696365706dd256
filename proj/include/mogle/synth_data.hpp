#pragma once

#include <array>
#include <cstdint>

#include "mogle/image_io.hpp"
#include "mogle/rng.hpp"
#include "mogle/semantic_mask.hpp"

namespace mogle {

// Prompt vocabulary. Color tokens share ids with attribute palette indices.
namespace vocab {
constexpr int kColorBase = 0;  // ids 0..5
constexpr int kHair = 6;
constexpr int kNoHair = 7;
constexpr int kEnd = 8;
constexpr int kNull = 9;  // dropped-condition filler
constexpr int kSize = 10;
}  // namespace vocab

constexpr int kPromptLength = 6;

struct PromptTokens {
    std::array<int, kPromptLength> ids{};
};

// The all-null prompt standing for a dropped text condition.
PromptTokens null_prompt();

// Mask classes: 1 face, 2 eye, 3 mouth, 4 hair.
namespace face_class {
constexpr int kFace = 1;
constexpr int kEye = 2;
constexpr int kMouth = 3;
constexpr int kHair = 4;
constexpr int kCount = 4;
}  // namespace face_class

// Procedural blob face on a 32x32 canvas. Geometry ranges keep every region
// inside the canvas; draw order face < hair < eyes < mouth, later regions
// overwrite earlier ones.
struct FaceSpec {
    int face_color = 0;
    int eye_color = 0;
    int mouth_color = 0;
    bool hair_present = false;
    int hair_color = 0;
    float center_x = 0, center_y = 0;  // face ellipse
    float axis_x = 0, axis_y = 0;
    float eye_dx = 0, eye_dy = 0, eye_r = 0;
    float mouth_dy = 0, mouth_hw = 0, mouth_hh = 0;
    int hair_rows = 0;
};

constexpr int kCanvas = 32;

// Colors are drawn pairwise distinct so nearest-palette classification of a
// render recovers the mask; hair is present with probability 0.5.
FaceSpec sample_spec(Rng& rng);

struct RenderedSample {
    Image image;
    SemanticMask mask;
};

// Deterministic rasterization: region color from the attribute palette plus
// a fixed per-pixel shading of amplitude < 0.05.
RenderedSample render(const FaceSpec& spec);

PromptTokens spec_to_prompt(const FaceSpec& spec);

}  // namespace mogle
