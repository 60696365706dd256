#include "mogle/tensor.hpp"

#include <atomic>

#include "mogle/error.hpp"

namespace mogle {

namespace {
std::atomic<int64_t> g_next_node_id{1};
}

int64_t shape_numel(const Shape& s) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return n;
}

std::string shape_str(const Shape& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += "x";
        out += std::to_string(s[i]);
    }
    out += "]";
    return out;
}

Tensor Tensor::make(Shape shape) {
    if (shape.empty()) fail("tensor: empty shape");
    for (int d : shape) {
        if (d <= 0) fail("tensor: nonpositive extent in ", shape_str(shape));
    }
    auto impl = std::make_shared<TensorImpl>();
    impl->shape = std::move(shape);
    impl->data.assign(size_t(shape_numel(impl->shape)), 0.0f);
    impl->node_id = g_next_node_id.fetch_add(1, std::memory_order_relaxed);
    return Tensor(std::move(impl));
}

Tensor Tensor::zeros(Shape shape) { return make(std::move(shape)); }

Tensor Tensor::full(Shape shape, float value) {
    Tensor t = make(std::move(shape));
    for (auto& v : t.impl_->data) v = value;
    return t;
}

Tensor Tensor::scalar(float value) { return full({1}, value); }

Tensor Tensor::from(Shape shape, std::vector<float> values) {
    Tensor t = make(std::move(shape));
    if (int64_t(values.size()) != t.numel()) {
        fail("tensor: ", values.size(), " values for shape ", shape_str(t.shape()));
    }
    t.impl_->data = std::move(values);
    return t;
}

Tensor Tensor::randn(Rng& rng, Shape shape, float stddev) {
    Tensor t = make(std::move(shape));
    for (auto& v : t.impl_->data) v = rng.normal(0.0f, stddev);
    return t;
}

float Tensor::item() const {
    if (numel() != 1) {
        fail<ContractError>("item: tensor ", shape_str(shape()), " is not scalar");
    }
    return impl_->data[0];
}

Tensor& Tensor::set_requires_grad(bool on) {
    impl_->requires_grad = on;
    return *this;
}

float* Tensor::grad() {
    if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0f);
    return impl_->grad.data();
}

Tensor Tensor::clone() const {
    Tensor t = make(impl_->shape);
    t.impl_->data = impl_->data;
    t.impl_->requires_grad = impl_->requires_grad;
    return t;
}

}  // namespace mogle
