#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mogle/error.hpp"
#include "mogle/tensor.hpp"

namespace mogle {

// Wrong magic or unsupported format version.
class CheckpointFormatError : public IoError {
  public:
    using IoError::IoError;
};
// Payload does not match the manifest accounting or checksums.
class CheckpointCorruptionError : public IoError {
  public:
    using IoError::IoError;
};

struct NamedTensor {
    std::string name;
    Tensor tensor;
};

constexpr char kCheckpointMagic[4] = {'M', 'G', 'L', 'E'};
constexpr uint32_t kCheckpointVersion = 1;

// Single-file container: "MGLE" | u32 version (LE) | u64 manifest length
// (LE) | manifest JSON | raw float32 LE payloads in manifest order. The
// manifest lists {name, shape, offset, length, fnv64} per tensor (offsets
// relative to the payload base, contiguous) plus the producing config and
// phase.
void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors,
                     const nlohmann::json& config, const std::string& phase);

struct Checkpoint {
    std::string phase;
    std::vector<NamedTensor> tensors;
    std::string config_dump;  // canonical RunConfig document

    const Tensor* find(const std::string& name) const;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace mogle
