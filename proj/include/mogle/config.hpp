#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mogle/modes.hpp"

namespace mogle {

// Run configuration; defaults pin the standard desk-scale setup. Fields
// track the CLI/JSON document one to one.
struct RunConfig {
    uint64_t seed = 42;
    int image_size = 32;
    int patch_size = 4;
    int token_dim = 48;  // must equal 3 * patch_size^2
    int blocks = 4;
    int heads = 4;
    int n_classes = 4;
    std::string expert_composition = "both";  // global | local | both
    std::string gating_mode = "matrix";       // matrix | scalar | static

    struct Lora {
        int rank = 4;
        double alpha = 4.0;
    } lora;

    struct Schedule {
        int T = 1000;
    } schedule;

    struct Train {
        int batch = 8;
        int steps = 2000;
        double drop_prob = 0.1;
        double lr = 1e-3;
        double wd = 0.01;
        // ablation knobs: a module left untrained stays at its neutral
        // initialization (identity experts, uniform gates)
        bool train_experts = true;
        bool train_gating = true;
    } train;

    struct Sample {
        int steps = 28;
        double guidance = 1.0;
    } sample;

    struct Data {
        int n_train = 2048;
        int n_test = 256;
    } data;

    ExpertComposition composition() const { return expert_composition_from(expert_composition); }
    GatingMode gating() const { return gating_mode_from(gating_mode); }

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    // throws ConfigError when derived constraints are violated
    void validate() const;

    // fnv-1a over the canonical (sorted-key) JSON document, as 16 hex chars
    std::string hash() const;
};

// Defaults overlaid with the JSON document at `path` (empty path keeps the
// defaults). MGLE_SEED in the environment overrides the seed either way.
RunConfig load_config(const std::string& path);

}  // namespace mogle
