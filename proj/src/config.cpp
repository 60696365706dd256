#include "mogle/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mogle/hashing.hpp"

namespace mogle {

using nlohmann::json;

json RunConfig::to_json() const {
    json j;
    j["seed"] = seed;
    j["image_size"] = image_size;
    j["patch_size"] = patch_size;
    j["token_dim"] = token_dim;
    j["blocks"] = blocks;
    j["heads"] = heads;
    j["n_classes"] = n_classes;
    j["expert_composition"] = expert_composition;
    j["gating_mode"] = gating_mode;
    j["lora"] = {{"rank", lora.rank}, {"alpha", lora.alpha}};
    j["schedule"] = {{"T", schedule.T}};
    j["train"] = {{"batch", train.batch},       {"steps", train.steps},
                  {"drop_prob", train.drop_prob}, {"lr", train.lr},
                  {"wd", train.wd},             {"train_experts", train.train_experts},
                  {"train_gating", train.train_gating}};
    j["sample"] = {{"steps", sample.steps}, {"guidance", sample.guidance}};
    j["data"] = {{"n_train", data.n_train}, {"n_test", data.n_test}};
    return j;
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            fail<ConfigError>("config field '", key, "': ", e.what());
        }
    }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    if (!j.is_object()) fail<ConfigError>("config document must be a JSON object");
    for (const auto& item : j.items()) {
        static const char* known[] = {"seed",   "image_size", "patch_size", "token_dim",
                                      "blocks", "heads",      "n_classes",  "expert_composition",
                                      "gating_mode", "lora",  "schedule",   "train",
                                      "sample", "data"};
        bool ok = false;
        for (const char* k : known) ok = ok || (item.key() == k);
        if (!ok) fail<ConfigError>("unknown config field '", item.key(), "'");
    }
    maybe(j, "seed", c.seed);
    maybe(j, "image_size", c.image_size);
    maybe(j, "patch_size", c.patch_size);
    maybe(j, "token_dim", c.token_dim);
    maybe(j, "blocks", c.blocks);
    maybe(j, "heads", c.heads);
    maybe(j, "n_classes", c.n_classes);
    maybe(j, "expert_composition", c.expert_composition);
    maybe(j, "gating_mode", c.gating_mode);
    if (j.contains("lora")) {
        maybe(j["lora"], "rank", c.lora.rank);
        maybe(j["lora"], "alpha", c.lora.alpha);
    }
    if (j.contains("schedule")) maybe(j["schedule"], "T", c.schedule.T);
    if (j.contains("train")) {
        const json& t = j["train"];
        maybe(t, "batch", c.train.batch);
        maybe(t, "steps", c.train.steps);
        maybe(t, "drop_prob", c.train.drop_prob);
        maybe(t, "lr", c.train.lr);
        maybe(t, "wd", c.train.wd);
        maybe(t, "train_experts", c.train.train_experts);
        maybe(t, "train_gating", c.train.train_gating);
    }
    if (j.contains("sample")) {
        maybe(j["sample"], "steps", c.sample.steps);
        maybe(j["sample"], "guidance", c.sample.guidance);
    }
    if (j.contains("data")) {
        maybe(j["data"], "n_train", c.data.n_train);
        maybe(j["data"], "n_test", c.data.n_test);
    }
    c.validate();
    return c;
}

void RunConfig::validate() const {
    expert_composition_from(expert_composition);
    gating_mode_from(gating_mode);
    if (image_size <= 0 || patch_size <= 0 || image_size % patch_size != 0) {
        fail<ConfigError>("image_size ", image_size, " must be a positive multiple of patch_size ",
                          patch_size);
    }
    if (token_dim != 3 * patch_size * patch_size) {
        fail<ConfigError>("token_dim ", token_dim, " must equal 3*patch_size^2 = ",
                          3 * patch_size * patch_size);
    }
    if (heads <= 0 || token_dim % heads != 0) {
        fail<ConfigError>("token_dim ", token_dim, " must be divisible by heads ", heads);
    }
    if (blocks <= 0) fail<ConfigError>("blocks must be positive");
    if (n_classes < 1 || n_classes > 4) fail<ConfigError>("n_classes must be in 1..4");
    if (lora.rank < 1) fail<ConfigError>("lora.rank must be positive");
    if (schedule.T < 1) fail<ConfigError>("schedule.T must be positive");
    if (train.batch < 1) fail<ConfigError>("train.batch must be positive");
    if (train.steps < 0) fail<ConfigError>("train.steps must be nonnegative");
    if (train.drop_prob < 0.0 || train.drop_prob > 1.0) {
        fail<ConfigError>("train.drop_prob ", train.drop_prob, " outside [0,1]");
    }
    if (sample.steps < 1 || sample.steps > schedule.T) {
        fail<ConfigError>("sample.steps ", sample.steps, " outside 1..T=", schedule.T);
    }
    if (data.n_train < 1 || data.n_test < 1) {
        fail<ConfigError>("data split sizes must be positive");
    }
}

std::string RunConfig::hash() const {
    const std::string doc = to_json().dump();
    return hex64(fnv1a64(doc.data(), doc.size()));
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) fail<ConfigError>("config file ", path, ": cannot open");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            fail<ConfigError>("config file ", path, ": ", e.what());
        }
        c = RunConfig::from_json(j);
    }
    if (const char* env = std::getenv("MGLE_SEED")) {
        c.seed = std::strtoull(env, nullptr, 10);
    }
    c.validate();
    return c;
}

}  // namespace mogle
