#pragma once

#include <array>
#include <cstddef>

namespace mogle::palette {

using Rgb = std::array<float, 3>;

// Attribute colors a region can take. Pairwise channel-wise Linf gap >= 0.2
// (including against the background), and every channel stays in [0.1, 0.9]
// so render shading never clips.
constexpr int kAttributeCount = 6;
constexpr std::array<Rgb, kAttributeCount> kAttributeColors = {{
    {0.90f, 0.15f, 0.15f},  // red
    {0.15f, 0.80f, 0.20f},  // green
    {0.20f, 0.25f, 0.90f},  // blue
    {0.90f, 0.85f, 0.15f},  // yellow
    {0.85f, 0.15f, 0.80f},  // magenta
    {0.15f, 0.85f, 0.85f},  // cyan
}};
constexpr Rgb kBackground = {0.15f, 0.15f, 0.15f};
constexpr int kBackgroundId = kAttributeCount;  // classification id for the background

// Colors of the full color-coded mask: class index -> RGB. Class 0 is the
// background, classes 1..4 are face, eye, mouth, hair.
constexpr int kClassCount = 5;
constexpr std::array<Rgb, kClassCount> kClassColors = {{
    kBackground,
    kAttributeColors[0],
    kAttributeColors[1],
    kAttributeColors[2],
    kAttributeColors[3],
}};

inline float sq_dist(const Rgb& a, float r, float g, float b) {
    const float dr = a[0] - r, dg = a[1] - g, db = a[2] - b;
    return dr * dr + dg * dg + db * db;
}

// Nearest entry among the attribute colors plus background; returns an
// attribute index in [0, kAttributeCount) or kBackgroundId.
inline int nearest_entry(float r, float g, float b) {
    int best = kBackgroundId;
    float best_d = sq_dist(kBackground, r, g, b);
    for (int i = 0; i < kAttributeCount; ++i) {
        const float d = sq_dist(kAttributeColors[size_t(i)], r, g, b);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace mogle::palette
