#include "mogle/semantic_mask.hpp"

#include "mogle/error.hpp"
#include "mogle/palette.hpp"

namespace mogle {

MaskComponents decouple(const SemanticMask& mask) {
    if (mask.n_classes < 1 || mask.n_classes >= palette::kClassCount) {
        fail<ContractError>("decouple: n_classes ", mask.n_classes, " outside palette range");
    }
    MaskComponents out;
    out.height = mask.height;
    out.width = mask.width;
    out.global_colored = Image(mask.height, mask.width);
    out.components.assign(size_t(mask.n_classes),
                          std::vector<uint8_t>(size_t(mask.height) * mask.width, 0));
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const uint8_t cls = mask.at(y, x);
            if (cls > mask.n_classes) {
                fail<ContractError>("decouple: class ", int(cls), " at (", y, ",", x,
                                    ") exceeds n_classes ", mask.n_classes);
            }
            const palette::Rgb& color = palette::kClassColors[cls];
            for (int c = 0; c < 3; ++c) out.global_colored.at(y, x, c) = color[size_t(c)];
            if (cls > 0) out.components[size_t(cls - 1)][size_t(y) * mask.width + x] = 1;
        }
    }
    return out;
}

std::vector<Tensor> to_token_inputs(const MaskComponents& comps, const PatchCodec& codec) {
    const int p = codec.patch_size();
    if (comps.height % p != 0 || comps.width % p != 0) {
        fail("to_token_inputs: mask ", comps.height, "x", comps.width,
             " not divisible by patch size ", p);
    }
    std::vector<Tensor> sequences;
    sequences.reserve(comps.components.size() + 1);
    sequences.push_back(codec.encode(comps.global_colored));
    for (const auto& comp : comps.components) {
        Image channels(comps.height, comps.width);
        for (size_t i = 0; i < comp.size(); ++i) {
            const float v = comp[i] ? 1.0f : 0.0f;
            channels.data[i * 3 + 0] = v;
            channels.data[i * 3 + 1] = v;
            channels.data[i * 3 + 2] = v;
        }
        sequences.push_back(codec.encode(channels));
    }
    return sequences;
}

SemanticMask empty_mask(int height, int width, int n_classes) {
    if (height <= 0 || width <= 0) {
        fail<ContractError>("empty_mask: extents ", height, "x", width, " must be positive");
    }
    return SemanticMask(height, width, n_classes);
}

void write_mask_pgm(const std::string& path, const SemanticMask& mask) {
    write_pgm(path, mask.height, mask.width, mask.classes);
}

SemanticMask read_mask_pgm(const std::string& path, int n_classes) {
    int h = 0, w = 0;
    std::vector<uint8_t> values = read_pgm(path, &h, &w);
    SemanticMask mask(h, w, n_classes);
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] > n_classes) {
            fail<IoError>(path, ": class index ", int(values[i]), " exceeds n_classes ",
                          n_classes);
        }
        mask.classes[i] = values[i];
    }
    return mask;
}

}  // namespace mogle
