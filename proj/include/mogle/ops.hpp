#pragma once

#include <functional>
#include <vector>

#include "mogle/tensor.hpp"

namespace mogle {

// Append-only computation record. Ops push nodes while a TapeScope is active
// and any input requires gradients; construction order is topological, so
// backward() is one reverse sweep that touches each node exactly once.
// Single writer per tape; independent tapes may run on different threads.
class Tape {
  public:
    // loss must be scalar. Grads of tensors not reachable from loss are left
    // untouched.
    void backward(const Tensor& loss);

    size_t size() const { return nodes_.size(); }

    struct Node {
        const char* op;
        std::shared_ptr<TensorImpl> out;
        std::vector<std::shared_ptr<TensorImpl>> parents;
        std::function<void()> backward;
    };
    void push(Node node) { nodes_.push_back(std::move(node)); }

  private:
    std::vector<Node> nodes_;
};

// RAII guard publishing the tape as this thread's recording target.
class TapeScope {
  public:
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

  private:
    Tape* prev_;
};

Tape* active_tape();

// --- op catalogue ---------------------------------------------------------
// All ops operate on rank-1/rank-2 tensors (rank-1 is treated as a single
// row where that matters). add/mul broadcast per standard rules.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, float s);
Tensor softmax(const Tensor& a, int axis);
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias);
Tensor gelu(const Tensor& x);
Tensor reshape(const Tensor& a, Shape shape);
Tensor transpose(const Tensor& a);
Tensor concat(const std::vector<Tensor>& parts, int axis);
Tensor slice(const Tensor& a, int axis, int start, int len);
Tensor embedding(const Tensor& table, const std::vector<int>& ids);
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
// mean over one axis of a 2-D tensor, keeping the reduced axis at extent 1
Tensor mean_axis(const Tensor& a, int axis);
Tensor mse(const Tensor& a, const Tensor& b);

}  // namespace mogle
