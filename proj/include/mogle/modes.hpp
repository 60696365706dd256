#pragma once

#include <string>

#include "mogle/error.hpp"

namespace mogle {

enum class ExpertComposition { kGlobal, kLocal, kBoth };
enum class GatingMode { kMatrix, kScalar, kStatic };
enum class Phase { kPretrain, kFinetune };

inline std::string to_string(ExpertComposition c) {
    switch (c) {
        case ExpertComposition::kGlobal: return "global";
        case ExpertComposition::kLocal: return "local";
        case ExpertComposition::kBoth: return "both";
    }
    return "both";
}

inline std::string to_string(GatingMode m) {
    switch (m) {
        case GatingMode::kMatrix: return "matrix";
        case GatingMode::kScalar: return "scalar";
        case GatingMode::kStatic: return "static";
    }
    return "matrix";
}

inline std::string to_string(Phase p) {
    return p == Phase::kPretrain ? "pretrain" : "finetune";
}

inline ExpertComposition expert_composition_from(const std::string& s) {
    if (s == "global") return ExpertComposition::kGlobal;
    if (s == "local") return ExpertComposition::kLocal;
    if (s == "both") return ExpertComposition::kBoth;
    fail<ConfigError>("unknown expert_composition '", s, "'");
}

inline GatingMode gating_mode_from(const std::string& s) {
    if (s == "matrix") return GatingMode::kMatrix;
    if (s == "scalar") return GatingMode::kScalar;
    if (s == "static") return GatingMode::kStatic;
    fail<ConfigError>("unknown gating_mode '", s, "'");
}

inline Phase phase_from(const std::string& s) {
    if (s == "pretrain") return Phase::kPretrain;
    if (s == "finetune") return Phase::kFinetune;
    fail<ConfigError>("unknown phase '", s, "'");
}

}  // namespace mogle
