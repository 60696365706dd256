#include "mogle/image_io.hpp"

#include <fstream>

#include "mogle/error.hpp"

namespace mogle {

namespace {

// skips whitespace and '#' comments between header fields
int parse_header_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) fail<IoError>(path, ": malformed netpbm header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

void read_netpbm(const std::string& path, const char* magic, int channels,
                 int* height, int* width, std::vector<uint8_t>* bytes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail<IoError>(path, ": cannot open");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != magic[0] || m1 != magic[1]) fail<IoError>(path, ": expected ", magic, " file");
    const int w = parse_header_int(in, path);
    const int h = parse_header_int(in, path);
    const int maxval = parse_header_int(in, path);
    if (maxval != 255) fail<IoError>(path, ": unsupported maxval ", maxval);
    bytes->resize(size_t(h) * w * channels);
    in.read(reinterpret_cast<char*>(bytes->data()), std::streamsize(bytes->size()));
    if (size_t(in.gcount()) != bytes->size()) fail<IoError>(path, ": truncated pixel data");
    *height = h;
    *width = w;
}

}  // namespace

std::vector<uint8_t> ppm_bytes(const Image& img) {
    std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                         "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.data.size());
    for (float v : img.data) out.push_back(float_to_byte(v));
    return out;
}

void write_ppm(const std::string& path, const Image& img) {
    const std::vector<uint8_t> bytes = ppm_bytes(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail<IoError>(path, ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) fail<IoError>(path, ": write failed");
}

Image read_ppm(const std::string& path) {
    int h = 0, w = 0;
    std::vector<uint8_t> bytes;
    read_netpbm(path, "P6", 3, &h, &w, &bytes);
    Image img(h, w);
    for (size_t i = 0; i < bytes.size(); ++i) img.data[i] = byte_to_float(bytes[i]);
    return img;
}

void write_pgm(const std::string& path, int height, int width,
               const std::vector<uint8_t>& values) {
    if (int64_t(values.size()) != int64_t(height) * width) {
        fail<IoError>(path, ": value count ", values.size(), " does not match ", height, "x",
                      width);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail<IoError>(path, ": cannot open for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(values.data()), std::streamsize(values.size()));
    if (!out) fail<IoError>(path, ": write failed");
}

std::vector<uint8_t> read_pgm(const std::string& path, int* height, int* width) {
    std::vector<uint8_t> bytes;
    read_netpbm(path, "P5", 1, height, width, &bytes);
    return bytes;
}

}  // namespace mogle
