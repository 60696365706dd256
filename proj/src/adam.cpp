#include "mogle/adam.hpp"

#include <cmath>

#include "mogle/error.hpp"

namespace mogle {

AdamOptimizer::AdamOptimizer(std::vector<Tensor> params, AdamConfig cfg) : cfg_(cfg) {
    slots_.reserve(params.size());
    for (auto& p : params) {
        Slot s;
        s.m1.assign(size_t(p.numel()), 0.0f);
        s.m2.assign(size_t(p.numel()), 0.0f);
        s.param = std::move(p);
        slots_.push_back(std::move(s));
    }
}

void AdamOptimizer::step() {
    ++step_;
    const float bc1 = 1.0f - std::pow(cfg_.beta1, float(step_));
    const float bc2 = 1.0f - std::pow(cfg_.beta2, float(step_));
    for (auto& s : slots_) {
        if (!s.param.has_grad()) {
            fail<ContractError>("adam_step: parameter ", shape_str(s.param.shape()),
                                " has no gradient");
        }
        const std::vector<float>& g = s.param.grad_values();
        float* w = s.param.data();
        const int64_t n = s.param.numel();
        for (int64_t i = 0; i < n; ++i) {
            s.m1[i] = cfg_.beta1 * s.m1[i] + (1.0f - cfg_.beta1) * g[i];
            s.m2[i] = cfg_.beta2 * s.m2[i] + (1.0f - cfg_.beta2) * g[i] * g[i];
            const float mhat = s.m1[i] / bc1;
            const float vhat = s.m2[i] / bc2;
            w[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + cfg_.weight_decay * w[i]);
        }
        s.param.clear_grad();
    }
}

}  // namespace mogle
