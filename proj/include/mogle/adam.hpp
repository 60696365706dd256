#pragma once

#include <vector>

#include "mogle/tensor.hpp"

namespace mogle {

struct AdamConfig {
    float lr = 1e-3f;
    float weight_decay = 0.01f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
};

// Bias-corrected Adam with decoupled weight decay over a fixed parameter set.
class AdamOptimizer {
  public:
    AdamOptimizer(std::vector<Tensor> params, AdamConfig cfg);

    // Applies one update from the accumulated grads, then clears them.
    // Every parameter must have a grad buffer.
    void step();

    int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

  private:
    struct Slot {
        Tensor param;
        std::vector<float> m1;
        std::vector<float> m2;
    };
    std::vector<Slot> slots_;
    AdamConfig cfg_;
    int64_t step_ = 0;
};

}  // namespace mogle
