#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mogle/rng.hpp"

namespace mogle {

using Shape = std::vector<int>;

int64_t shape_numel(const Shape& s);
std::string shape_str(const Shape& s);

struct TensorImpl {
    Shape shape;
    std::vector<float> data;
    std::vector<float> grad;  // empty until first accumulation
    bool requires_grad = false;
    int64_t node_id = 0;
};

// Shared-storage handle over a dense row-major float buffer. Copies alias,
// clone() deep-copies.
class Tensor {
  public:
    Tensor() = default;
    static Tensor zeros(Shape shape);
    static Tensor full(Shape shape, float value);
    static Tensor scalar(float value);
    static Tensor from(Shape shape, std::vector<float> values);
    static Tensor randn(Rng& rng, Shape shape, float stddev = 1.0f);

    bool defined() const { return impl_ != nullptr; }
    const Shape& shape() const { return impl_->shape; }
    int rank() const { return int(impl_->shape.size()); }
    int dim(int i) const { return impl_->shape[size_t(i)]; }
    int64_t numel() const { return int64_t(impl_->data.size()); }

    float* data() { return impl_->data.data(); }
    const float* data() const { return impl_->data.data(); }
    std::vector<float>& values() { return impl_->data; }
    const std::vector<float>& values() const { return impl_->data; }
    float at(int64_t i) const { return impl_->data[size_t(i)]; }
    // value of a scalar tensor
    float item() const;

    bool requires_grad() const { return impl_->requires_grad; }
    Tensor& set_requires_grad(bool on);

    bool has_grad() const { return !impl_->grad.empty(); }
    // allocates a zeroed buffer on first use
    float* grad();
    const std::vector<float>& grad_values() const { return impl_->grad; }
    void clear_grad() { impl_->grad.clear(); }

    int64_t node_id() const { return impl_->node_id; }
    Tensor clone() const;

    const std::shared_ptr<TensorImpl>& impl() const { return impl_; }

  private:
    explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
    static Tensor make(Shape shape);
    std::shared_ptr<TensorImpl> impl_;
};

}  // namespace mogle
