#include "mogle/ops.hpp"

#include <cmath>
#include <unordered_set>

#include "mogle/error.hpp"
#include "mogle/kernels.hpp"

namespace mogle {

namespace {

thread_local Tape* t_active_tape = nullptr;

using ImplPtr = std::shared_ptr<TensorImpl>;

float* grad_buf(const ImplPtr& t) {
    if (t->grad.empty()) t->grad.assign(t->data.size(), 0.0f);
    return t->grad.data();
}

bool any_requires_grad(const std::vector<Tensor>& parents) {
    for (const auto& p : parents) {
        if (p.requires_grad()) return true;
    }
    return false;
}

void record(const char* op, Tensor& out, const std::vector<Tensor>& parents,
            std::function<void()> backward) {
    Tape* tape = t_active_tape;
    if (tape == nullptr || !any_requires_grad(parents)) return;
    out.set_requires_grad(true);
    Tape::Node node;
    node.op = op;
    node.out = out.impl();
    node.parents.reserve(parents.size());
    for (const auto& p : parents) node.parents.push_back(p.impl());
    node.backward = std::move(backward);
    t_active_tape->push(std::move(node));
}

struct Dims2 {
    int m, n;
};

Dims2 dims2(const Tensor& t, const char* op) {
    if (t.rank() == 1) return {1, t.dim(0)};
    if (t.rank() == 2) return {t.dim(0), t.dim(1)};
    fail(op, ": expected rank <= 2, got ", shape_str(t.shape()));
}

// broadcast-compatible output extent, or -1
int bc_extent(int a, int b) {
    if (a == b) return a;
    if (a == 1) return b;
    if (b == 1) return a;
    return -1;
}

}  // namespace

TapeScope::TapeScope(Tape& tape) : prev_(t_active_tape) { t_active_tape = &tape; }
TapeScope::~TapeScope() { t_active_tape = prev_; }
Tape* active_tape() { return t_active_tape; }

void Tape::backward(const Tensor& loss) {
    if (loss.numel() != 1) {
        fail<ContractError>("backward: loss ", shape_str(loss.shape()), " is not scalar");
    }
    if (!loss.requires_grad()) return;  // nothing recorded depends on it
    std::unordered_set<int64_t> reachable;
    reachable.insert(loss.node_id());
    grad_buf(loss.impl())[0] = 1.0f;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (reachable.find(it->out->node_id) == reachable.end()) continue;
        for (const auto& p : it->parents) {
            if (p->requires_grad) reachable.insert(p->node_id);
        }
        it->backward();
    }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
        fail("matmul: incompatible shapes ", shape_str(a.shape()), " x ", shape_str(b.shape()));
    }
    const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
    Tensor out = Tensor::zeros({m, n});
    kernels::gemm(a.data(), b.data(), out.data(), m, k, n, false, false, false);

    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    record("matmul", out, {a, b}, [ai, bi, oi, m, k, n] {
        const float* g = oi->grad.data();
        if (ai->requires_grad) {
            // dA += G * B^T
            kernels::gemm(g, bi->data.data(), grad_buf(ai), m, n, k, false, true, true);
        }
        if (bi->requires_grad) {
            // dB += A^T * G
            kernels::gemm(ai->data.data(), g, grad_buf(bi), k, m, n, true, false, true);
        }
    });
    return out;
}

namespace {

Tensor broadcast_binary(const char* op, const Tensor& a, const Tensor& b, bool is_add) {
    const Dims2 da = dims2(a, op);
    const Dims2 db = dims2(b, op);
    const int m = bc_extent(da.m, db.m);
    const int n = bc_extent(da.n, db.n);
    if (m < 0 || n < 0) {
        fail(op, ": shapes ", shape_str(a.shape()), " and ", shape_str(b.shape()),
             " do not broadcast");
    }
    Shape out_shape = (a.rank() == 1 && b.rank() == 1) ? Shape{n} : Shape{m, n};
    Tensor out = Tensor::zeros(out_shape);

    const bool same = (da.m == db.m && da.n == db.n);
    if (same) {
        if (is_add) {
            kernels::ew_add(a.data(), b.data(), out.data(), out.numel());
        } else {
            kernels::ew_mul(a.data(), b.data(), out.data(), out.numel());
        }
    } else {
        const float* pa = a.data();
        const float* pb = b.data();
        float* po = out.data();
        for (int i = 0; i < m; ++i) {
            const int ia = da.m == 1 ? 0 : i;
            const int ib = db.m == 1 ? 0 : i;
            for (int j = 0; j < n; ++j) {
                const float va = pa[int64_t(ia) * da.n + (da.n == 1 ? 0 : j)];
                const float vb = pb[int64_t(ib) * db.n + (db.n == 1 ? 0 : j)];
                po[int64_t(i) * n + j] = is_add ? va + vb : va * vb;
            }
        }
    }

    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    record(op, out, {a, b}, [ai, bi, oi, da, db, m, n, is_add] {
        const float* g = oi->grad.data();
        auto accumulate = [&](const ImplPtr& dst, const Dims2& dd, const ImplPtr& other,
                              const Dims2& od) {
            float* gd = grad_buf(dst);
            const float* po = other->data.data();
            for (int i = 0; i < m; ++i) {
                const int id = dd.m == 1 ? 0 : i;
                const int io = od.m == 1 ? 0 : i;
                for (int j = 0; j < n; ++j) {
                    const int jd = dd.n == 1 ? 0 : j;
                    const int jo = od.n == 1 ? 0 : j;
                    float gv = g[int64_t(i) * n + j];
                    if (!is_add) gv *= po[int64_t(io) * od.n + jo];
                    gd[int64_t(id) * dd.n + jd] += gv;
                }
            }
        };
        if (ai->requires_grad) accumulate(ai, da, bi, db);
        if (bi->requires_grad) accumulate(bi, db, ai, da);
    });
    return out;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return broadcast_binary("add", a, b, true); }
Tensor mul(const Tensor& a, const Tensor& b) { return broadcast_binary("mul", a, b, false); }

Tensor scale(const Tensor& a, float s) {
    Tensor out = Tensor::zeros(a.shape());
    kernels::scale(a.data(), s, out.data(), a.numel());
    auto ai = a.impl(), oi = out.impl();
    record("scale", out, {a}, [ai, oi, s] {
        if (ai->requires_grad) {
            kernels::axpy(s, oi->grad.data(), grad_buf(ai), int64_t(ai->data.size()));
        }
    });
    return out;
}

Tensor softmax(const Tensor& a, int axis) {
    const Dims2 d = dims2(a, "softmax");
    if (a.rank() == 1 && axis != 0) fail("softmax: axis ", axis, " invalid for rank-1 input");
    if (a.rank() == 2 && axis != 0 && axis != 1) {
        fail("softmax: axis ", axis, " invalid for ", shape_str(a.shape()));
    }
    const bool rows = (a.rank() == 1) || (axis == 1);
    Tensor out = Tensor::zeros(a.shape());
    if (rows) {
        kernels::softmax_rows(a.data(), out.data(), d.m, d.n);
    } else {
        // column softmax; cold path, used by tiny gating heads only
        for (int j = 0; j < d.n; ++j) {
            float mx = a.data()[j];
            for (int i = 1; i < d.m; ++i) mx = std::max(mx, a.data()[int64_t(i) * d.n + j]);
            float sum = 0.0f;
            for (int i = 0; i < d.m; ++i) {
                float e = std::exp(a.data()[int64_t(i) * d.n + j] - mx);
                out.data()[int64_t(i) * d.n + j] = e;
                sum += e;
            }
            for (int i = 0; i < d.m; ++i) out.data()[int64_t(i) * d.n + j] /= sum;
        }
    }
    auto ai = a.impl(), oi = out.impl();
    record("softmax", out, {a}, [ai, oi, d, rows] {
        if (!ai->requires_grad) return;
        const float* y = oi->data.data();
        const float* g = oi->grad.data();
        float* gx = grad_buf(ai);
        if (rows) {
            kernels::softmax_rows_grad(y, g, gx, d.m, d.n);
        } else {
            for (int j = 0; j < d.n; ++j) {
                float dot = 0.0f;
                for (int i = 0; i < d.m; ++i) {
                    dot += y[int64_t(i) * d.n + j] * g[int64_t(i) * d.n + j];
                }
                for (int i = 0; i < d.m; ++i) {
                    const int64_t ix = int64_t(i) * d.n + j;
                    gx[ix] += y[ix] * (g[ix] - dot);
                }
            }
        }
    });
    return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias) {
    const Dims2 d = dims2(x, "layer_norm");
    if (gain.rank() != 1 || bias.rank() != 1 || gain.dim(0) != d.n || bias.dim(0) != d.n) {
        fail("layer_norm: gain ", shape_str(gain.shape()), " bias ", shape_str(bias.shape()),
             " do not match last extent of ", shape_str(x.shape()));
    }
    Tensor out = Tensor::zeros(x.shape());
    auto xhat = std::make_shared<std::vector<float>>(size_t(x.numel()));
    auto invstd = std::make_shared<std::vector<float>>(size_t(d.m));
    kernels::layernorm_rows(x.data(), gain.data(), bias.data(), out.data(), xhat->data(),
                            invstd->data(), d.m, d.n, 1e-5f);
    auto xi = x.impl(), gi = gain.impl(), bi = bias.impl(), oi = out.impl();
    record("layer_norm", out, {x, gain, bias}, [xi, gi, bi, oi, xhat, invstd, d] {
        const float* g = oi->grad.data();
        float* gx = xi->requires_grad ? grad_buf(xi) : nullptr;
        float* ggain = gi->requires_grad ? grad_buf(gi) : nullptr;
        float* gbias = bi->requires_grad ? grad_buf(bi) : nullptr;
        if (gx != nullptr) {
            kernels::layernorm_rows_grad(xhat->data(), invstd->data(), gi->data.data(), g, gx,
                                         ggain, gbias, d.m, d.n);
        } else if (ggain != nullptr || gbias != nullptr) {
            for (int j = 0; j < d.n; ++j) {
                float sg = 0.0f, sb = 0.0f;
                for (int i = 0; i < d.m; ++i) {
                    sg += g[int64_t(i) * d.n + j] * (*xhat)[size_t(i) * d.n + j];
                    sb += g[int64_t(i) * d.n + j];
                }
                if (ggain) ggain[j] += sg;
                if (gbias) gbias[j] += sb;
            }
        }
    });
    return out;
}

Tensor gelu(const Tensor& x) {
    Tensor out = Tensor::zeros(x.shape());
    kernels::gelu(x.data(), out.data(), x.numel());
    auto xi = x.impl(), oi = out.impl();
    record("gelu", out, {x}, [xi, oi] {
        if (!xi->requires_grad) return;
        kernels::gelu_grad(xi->data.data(), oi->grad.data(), grad_buf(xi),
                           int64_t(xi->data.size()));
    });
    return out;
}

Tensor reshape(const Tensor& a, Shape shape) {
    if (shape_numel(shape) != a.numel()) {
        fail("reshape: ", shape_str(a.shape()), " to ", shape_str(shape),
             " changes element count");
    }
    Tensor out = Tensor::from(std::move(shape), a.values());
    auto ai = a.impl(), oi = out.impl();
    record("reshape", out, {a}, [ai, oi] {
        if (!ai->requires_grad) return;
        kernels::axpy(1.0f, oi->grad.data(), grad_buf(ai), int64_t(ai->data.size()));
    });
    return out;
}

Tensor transpose(const Tensor& a) {
    if (a.rank() != 2) fail("transpose: expected rank 2, got ", shape_str(a.shape()));
    const int m = a.dim(0), n = a.dim(1);
    Tensor out = Tensor::zeros({n, m});
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            out.data()[int64_t(j) * m + i] = a.data()[int64_t(i) * n + j];
        }
    }
    auto ai = a.impl(), oi = out.impl();
    record("transpose", out, {a}, [ai, oi, m, n] {
        if (!ai->requires_grad) return;
        float* ga = grad_buf(ai);
        const float* g = oi->grad.data();
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                ga[int64_t(i) * n + j] += g[int64_t(j) * m + i];
            }
        }
    });
    return out;
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
    if (parts.empty()) fail<ContractError>("concat: no parts");
    const int rank = parts[0].rank();
    if (rank != 1 && rank != 2) fail("concat: expected rank <= 2");
    if (rank == 1 && axis != 0) fail("concat: axis ", axis, " invalid for rank-1 parts");
    if (rank == 2 && axis != 0 && axis != 1) fail("concat: axis ", axis, " invalid");

    int joined = 0;
    const int keep_axis = (rank == 1) ? -1 : (1 - axis);
    const int keep = (rank == 1) ? 1 : parts[0].dim(keep_axis);
    for (const auto& p : parts) {
        if (p.rank() != rank || (rank == 2 && p.dim(keep_axis) != keep)) {
            fail("concat: part ", shape_str(p.shape()), " does not match ",
                 shape_str(parts[0].shape()), " along axis ", axis);
        }
        joined += (rank == 1) ? p.dim(0) : p.dim(axis);
    }
    Shape out_shape = (rank == 1) ? Shape{joined}
                                  : (axis == 0 ? Shape{joined, keep} : Shape{keep, joined});
    Tensor out = Tensor::zeros(out_shape);

    const Dims2 od = dims2(out, "concat");
    int offset = 0;  // elements for rank-1, rows for axis 0, cols for axis 1
    for (const auto& p : parts) {
        const Dims2 pd = dims2(p, "concat");
        if (rank == 1) {
            std::copy(p.data(), p.data() + p.numel(), out.data() + offset);
            offset += pd.n;
        } else if (axis == 0) {
            std::copy(p.data(), p.data() + p.numel(), out.data() + int64_t(offset) * od.n);
            offset += pd.m;
        } else {
            for (int i = 0; i < pd.m; ++i) {
                std::copy(p.data() + int64_t(i) * pd.n, p.data() + int64_t(i + 1) * pd.n,
                          out.data() + int64_t(i) * od.n + offset);
            }
            offset += pd.n;
        }
    }

    std::vector<ImplPtr> pis;
    pis.reserve(parts.size());
    for (const auto& p : parts) pis.push_back(p.impl());
    auto oi = out.impl();
    record("concat", out, parts, [pis, oi, od, axis, rank] {
        const float* g = oi->grad.data();
        int off = 0;
        for (const auto& pi : pis) {
            const int pm = (pi->shape.size() == 1) ? 1 : pi->shape[0];
            const int pn = (pi->shape.size() == 1) ? pi->shape[0] : pi->shape[1];
            if (rank == 1 || axis == 0) {
                if (pi->requires_grad) {
                    float* gp = grad_buf(pi);
                    const int64_t count = int64_t(pm) * pn;
                    const float* src = g + int64_t(off) * (rank == 1 ? 1 : od.n);
                    for (int64_t t = 0; t < count; ++t) gp[t] += src[t];
                }
                off += (rank == 1) ? pn : pm;
            } else {
                if (pi->requires_grad) {
                    float* gp = grad_buf(pi);
                    for (int i = 0; i < pm; ++i) {
                        for (int j = 0; j < pn; ++j) {
                            gp[int64_t(i) * pn + j] += g[int64_t(i) * od.n + off + j];
                        }
                    }
                }
                off += pn;
            }
        }
    });
    return out;
}

Tensor slice(const Tensor& a, int axis, int start, int len) {
    const int rank = a.rank();
    if (rank != 1 && rank != 2) fail("slice: expected rank <= 2");
    if (rank == 1 && axis != 0) fail("slice: axis ", axis, " invalid for rank-1 input");
    if (rank == 2 && axis != 0 && axis != 1) fail("slice: axis ", axis, " invalid");
    const int extent = a.dim(rank == 1 ? 0 : axis);
    if (start < 0 || len <= 0 || start + len > extent) {
        fail("slice: range [", start, ",", start + len, ") outside extent ", extent, " of ",
             shape_str(a.shape()));
    }
    const Dims2 d = dims2(a, "slice");
    Shape out_shape = (rank == 1) ? Shape{len}
                                  : (axis == 0 ? Shape{len, d.n} : Shape{d.m, len});
    Tensor out = Tensor::zeros(out_shape);
    if (rank == 1 || axis == 0) {
        std::copy(a.data() + int64_t(start) * d.n, a.data() + int64_t(start + len) * d.n,
                  out.data());
    } else {
        for (int i = 0; i < d.m; ++i) {
            std::copy(a.data() + int64_t(i) * d.n + start,
                      a.data() + int64_t(i) * d.n + start + len, out.data() + int64_t(i) * len);
        }
    }
    auto ai = a.impl(), oi = out.impl();
    record("slice", out, {a}, [ai, oi, d, axis, rank, start, len] {
        if (!ai->requires_grad) return;
        float* ga = grad_buf(ai);
        const float* g = oi->grad.data();
        if (rank == 1 || axis == 0) {
            const int64_t count = int64_t(len) * d.n;
            for (int64_t t = 0; t < count; ++t) ga[int64_t(start) * d.n + t] += g[t];
        } else {
            for (int i = 0; i < d.m; ++i) {
                for (int j = 0; j < len; ++j) {
                    ga[int64_t(i) * d.n + start + j] += g[int64_t(i) * len + j];
                }
            }
        }
    });
    return out;
}

Tensor embedding(const Tensor& table, const std::vector<int>& ids) {
    if (table.rank() != 2) fail("embedding: table must be rank 2, got ", shape_str(table.shape()));
    const int vocab = table.dim(0), width = table.dim(1);
    for (int id : ids) {
        if (id < 0 || id >= vocab) {
            fail<ContractError>("embedding: id ", id, " outside vocabulary of ", vocab);
        }
    }
    Tensor out = Tensor::zeros({int(ids.size()), width});
    for (size_t i = 0; i < ids.size(); ++i) {
        std::copy(table.data() + int64_t(ids[i]) * width,
                  table.data() + int64_t(ids[i] + 1) * width, out.data() + int64_t(i) * width);
    }
    auto ti = table.impl(), oi = out.impl();
    record("embedding", out, {table}, [ti, oi, ids, width] {
        if (!ti->requires_grad) return;
        float* gt = grad_buf(ti);
        const float* g = oi->grad.data();
        for (size_t i = 0; i < ids.size(); ++i) {
            for (int j = 0; j < width; ++j) {
                gt[int64_t(ids[i]) * width + j] += g[int64_t(i) * width + j];
            }
        }
    });
    return out;
}

namespace {

Tensor full_reduce(const char* op, const Tensor& a, bool take_mean) {
    const int64_t n = a.numel();
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) acc += a.data()[i];
    if (take_mean) acc /= double(n);
    Tensor out = Tensor::scalar(float(acc));
    auto ai = a.impl(), oi = out.impl();
    record(op, out, {a}, [ai, oi, n, take_mean] {
        if (!ai->requires_grad) return;
        const float gv = oi->grad[0] * (take_mean ? 1.0f / float(n) : 1.0f);
        float* ga = grad_buf(ai);
        for (int64_t i = 0; i < n; ++i) ga[i] += gv;
    });
    return out;
}

}  // namespace

Tensor sum(const Tensor& a) { return full_reduce("sum", a, false); }
Tensor mean(const Tensor& a) { return full_reduce("mean", a, true); }

Tensor mean_axis(const Tensor& a, int axis) {
    if (a.rank() != 2 || (axis != 0 && axis != 1)) {
        fail("mean_axis: expected rank 2 and axis in {0,1}, got ", shape_str(a.shape()),
             " axis ", axis);
    }
    const int m = a.dim(0), n = a.dim(1);
    Tensor out = (axis == 0) ? Tensor::zeros({1, n}) : Tensor::zeros({m, 1});
    if (axis == 0) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += a.data()[int64_t(i) * n + j];
            out.data()[j] = float(acc / m);
        }
    } else {
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a.data()[int64_t(i) * n + j];
            out.data()[i] = float(acc / n);
        }
    }
    auto ai = a.impl(), oi = out.impl();
    record("mean_axis", out, {a}, [ai, oi, m, n, axis] {
        if (!ai->requires_grad) return;
        float* ga = grad_buf(ai);
        const float* g = oi->grad.data();
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                const float gv = (axis == 0) ? g[j] / float(m) : g[i] / float(n);
                ga[int64_t(i) * n + j] += gv;
            }
        }
    });
    return out;
}

Tensor mse(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        fail("mse: shapes ", shape_str(a.shape()), " and ", shape_str(b.shape()), " differ");
    }
    const int64_t n = a.numel();
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double d = double(a.data()[i]) - double(b.data()[i]);
        acc += d * d;
    }
    Tensor out = Tensor::scalar(float(acc / double(n)));
    auto ai = a.impl(), bi = b.impl(), oi = out.impl();
    record("mse", out, {a, b}, [ai, bi, oi, n] {
        const float gv = oi->grad[0] * 2.0f / float(n);
        float* ga = ai->requires_grad ? grad_buf(ai) : nullptr;
        float* gb = bi->requires_grad ? grad_buf(bi) : nullptr;
        for (int64_t i = 0; i < n; ++i) {
            const float d = ai->data[i] - bi->data[i];
            if (ga) ga[i] += gv * d;
            if (gb) gb[i] -= gv * d;
        }
    });
    return out;
}

}  // namespace mogle
