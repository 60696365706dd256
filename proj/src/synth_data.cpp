#include "mogle/synth_data.hpp"

#include <cmath>

#include "mogle/palette.hpp"

namespace mogle {

PromptTokens null_prompt() {
    PromptTokens p;
    p.ids.fill(vocab::kNull);
    return p;
}

FaceSpec sample_spec(Rng& rng) {
    FaceSpec s;
    // four distinct colors from the six-entry palette
    std::array<int, palette::kAttributeCount> pool = {0, 1, 2, 3, 4, 5};
    int remaining = palette::kAttributeCount;
    auto draw_color = [&rng, &pool, &remaining]() {
        const int pick = rng.uniform_int(0, remaining - 1);
        const int color = pool[size_t(pick)];
        pool[size_t(pick)] = pool[size_t(remaining - 1)];
        --remaining;
        return color;
    };
    s.face_color = draw_color();
    s.eye_color = draw_color();
    s.mouth_color = draw_color();
    s.hair_color = draw_color();
    s.hair_present = rng.bernoulli(0.5);

    s.center_x = rng.uniform(13.0f, 19.0f);
    s.center_y = rng.uniform(14.0f, 18.0f);
    s.axis_x = rng.uniform(8.0f, 11.0f);
    s.axis_y = rng.uniform(9.0f, 12.0f);
    s.eye_dx = rng.uniform(3.0f, 5.0f);
    s.eye_dy = rng.uniform(2.0f, 4.0f);
    s.eye_r = rng.uniform(1.5f, 2.5f);
    s.mouth_dy = rng.uniform(3.0f, 5.0f);
    s.mouth_hw = rng.uniform(2.0f, 4.0f);
    s.mouth_hh = rng.uniform(1.0f, 2.0f);
    s.hair_rows = rng.uniform_int(3, 6);
    return s;
}

namespace {

inline bool in_ellipse(float x, float y, const FaceSpec& s) {
    const float dx = (x - s.center_x) / s.axis_x;
    const float dy = (y - s.center_y) / s.axis_y;
    return dx * dx + dy * dy <= 1.0f;
}

int class_at(int xi, int yi, const FaceSpec& s) {
    const float x = float(xi);
    const float y = float(yi);
    // topmost region wins: mouth > eyes > hair > face
    const float mdx = x - s.center_x;
    const float mdy = y - (s.center_y + s.mouth_dy);
    if (std::abs(mdx) <= s.mouth_hw && std::abs(mdy) <= s.mouth_hh) return face_class::kMouth;
    const float ey = y - (s.center_y - s.eye_dy);
    for (float sign : {-1.0f, 1.0f}) {
        const float ex = x - (s.center_x + sign * s.eye_dx);
        if (ex * ex + ey * ey <= s.eye_r * s.eye_r) return face_class::kEye;
    }
    if (!in_ellipse(x, y, s)) return 0;
    if (s.hair_present && y < s.center_y - s.axis_y + float(s.hair_rows)) {
        return face_class::kHair;
    }
    return face_class::kFace;
}

// fixed shading pattern, amplitude 0.04 < 0.05
inline float shade(int x, int y) {
    return 0.04f * std::sin(0.7f * float(x) + 1.3f * float(y));
}

}  // namespace

RenderedSample render(const FaceSpec& spec) {
    RenderedSample out;
    out.image = Image(kCanvas, kCanvas);
    out.mask = SemanticMask(kCanvas, kCanvas, face_class::kCount);
    for (int y = 0; y < kCanvas; ++y) {
        for (int x = 0; x < kCanvas; ++x) {
            const int cls = class_at(x, y, spec);
            out.mask.set(y, x, uint8_t(cls));
            palette::Rgb color = palette::kBackground;
            switch (cls) {
                case face_class::kFace:
                    color = palette::kAttributeColors[size_t(spec.face_color)];
                    break;
                case face_class::kEye:
                    color = palette::kAttributeColors[size_t(spec.eye_color)];
                    break;
                case face_class::kMouth:
                    color = palette::kAttributeColors[size_t(spec.mouth_color)];
                    break;
                case face_class::kHair:
                    color = palette::kAttributeColors[size_t(spec.hair_color)];
                    break;
                default:
                    break;
            }
            const float sh = shade(x, y);
            for (int c = 0; c < 3; ++c) out.image.at(y, x, c) = color[size_t(c)] + sh;
        }
    }
    return out;
}

PromptTokens spec_to_prompt(const FaceSpec& spec) {
    PromptTokens p;
    p.ids[0] = vocab::kColorBase + spec.face_color;
    p.ids[1] = vocab::kColorBase + spec.eye_color;
    p.ids[2] = vocab::kColorBase + spec.mouth_color;
    p.ids[3] = spec.hair_present ? vocab::kHair : vocab::kNoHair;
    p.ids[4] = spec.hair_present ? vocab::kColorBase + spec.hair_color : vocab::kNull;
    p.ids[5] = vocab::kEnd;
    return p;
}

}  // namespace mogle
