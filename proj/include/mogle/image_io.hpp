#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mogle {

// Dense H x W x 3 image, channels interleaved, values in [0,1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<float> data;

    Image() = default;
    Image(int h, int w) : height(h), width(w), data(size_t(h) * w * 3, 0.0f) {}

    float& at(int y, int x, int c) { return data[(size_t(y) * width + x) * 3 + c]; }
    float at(int y, int x, int c) const { return data[(size_t(y) * width + x) * 3 + c]; }
};

// PPM (P6, maxval 255). Values are quantized to bytes on write.
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);
std::vector<uint8_t> ppm_bytes(const Image& img);

// PGM (P5, maxval 255) carrying raw byte grids (class indices for masks).
void write_pgm(const std::string& path, int height, int width,
               const std::vector<uint8_t>& values);
std::vector<uint8_t> read_pgm(const std::string& path, int* height, int* width);

inline uint8_t float_to_byte(float v) {
    const float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
    return uint8_t(c * 255.0f + 0.5f);
}
inline float byte_to_float(uint8_t b) { return float(b) / 255.0f; }

}  // namespace mogle
