#include "mogle/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mogle/hashing.hpp"

namespace mogle {

using nlohmann::json;

namespace {

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}
uint32_t get_u32(const unsigned char* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}
uint64_t get_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors,
                     const json& config, const std::string& phase) {
    json manifest;
    manifest["format_version"] = kCheckpointVersion;
    manifest["phase"] = phase;
    manifest["config"] = config;
    json entries = json::array();
    uint64_t offset = 0;
    for (const auto& nt : tensors) {
        const uint64_t bytes = uint64_t(nt.tensor.numel()) * sizeof(float);
        json e;
        e["name"] = nt.name;
        e["shape"] = nt.tensor.shape();
        e["offset"] = offset;
        e["length"] = bytes;
        e["fnv64"] = hex64(fnv1a64(nt.tensor.data(), size_t(bytes)));
        entries.push_back(std::move(e));
        offset += bytes;
    }
    manifest["tensors"] = std::move(entries);

    const std::string mbytes = manifest.dump();
    std::string header;
    header.append(kCheckpointMagic, 4);
    put_u32(header, kCheckpointVersion);
    put_u64(header, uint64_t(mbytes.size()));

    std::ofstream out(path, std::ios::binary);
    if (!out) fail<IoError>(path, ": cannot open for writing");
    out.write(header.data(), std::streamsize(header.size()));
    out.write(mbytes.data(), std::streamsize(mbytes.size()));
    for (const auto& nt : tensors) {
        out.write(reinterpret_cast<const char*>(nt.tensor.data()),
                  std::streamsize(nt.tensor.numel() * sizeof(float)));
    }
    if (!out) fail<IoError>(path, ": write failed");
}

const Tensor* Checkpoint::find(const std::string& name) const {
    for (const auto& nt : tensors) {
        if (nt.name == name) return &nt.tensor;
    }
    return nullptr;
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail<IoError>(path, ": cannot open");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 16 || std::memcmp(p, kCheckpointMagic, 4) != 0) {
        fail<CheckpointFormatError>(path, ": bad magic");
    }
    const uint32_t version = get_u32(p + 4);
    if (version != kCheckpointVersion) {
        fail<CheckpointFormatError>(path, ": unsupported format version ", version);
    }
    const uint64_t mlen = get_u64(p + 8);
    if (16 + mlen > bytes.size()) fail<CheckpointCorruptionError>(path, ": truncated manifest");
    json manifest;
    try {
        manifest = json::parse(bytes.begin() + 16, bytes.begin() + 16 + std::ptrdiff_t(mlen));
    } catch (const json::exception& e) {
        fail<CheckpointCorruptionError>(path, ": manifest parse failed: ", e.what());
    }

    const unsigned char* payload = p + 16 + mlen;
    const uint64_t payload_size = bytes.size() - 16 - mlen;

    Checkpoint ck;
    ck.phase = manifest.value("phase", "");
    if (manifest.contains("config")) ck.config_dump = manifest["config"].dump();

    uint64_t expected_offset = 0;
    for (const auto& e : manifest.at("tensors")) {
        const std::string name = e.at("name").get<std::string>();
        const Shape shape = e.at("shape").get<Shape>();
        const uint64_t offset = e.at("offset").get<uint64_t>();
        const uint64_t length = e.at("length").get<uint64_t>();
        if (offset != expected_offset) {
            fail<CheckpointCorruptionError>(path, ": tensor '", name,
                                            "' offset not contiguous");
        }
        if (length != uint64_t(shape_numel(shape)) * sizeof(float)) {
            fail<CheckpointCorruptionError>(path, ": tensor '", name,
                                            "' length does not match shape");
        }
        if (offset + length > payload_size) {
            fail<CheckpointCorruptionError>(path, ": tensor '", name, "' truncated payload");
        }
        const uint64_t want = std::strtoull(e.at("fnv64").get<std::string>().c_str(), nullptr, 16);
        const uint64_t got = fnv1a64(payload + offset, size_t(length));
        if (want != got) {
            fail<CheckpointCorruptionError>(path, ": tensor '", name, "' checksum mismatch");
        }
        std::vector<float> values(size_t(length / sizeof(float)));
        std::memcpy(values.data(), payload + offset, size_t(length));
        ck.tensors.push_back({name, Tensor::from(shape, std::move(values))});
        expected_offset = offset + length;
    }
    if (expected_offset != payload_size) {
        fail<CheckpointCorruptionError>(path, ": payload size does not match manifest");
    }
    return ck;
}

}  // namespace mogle
