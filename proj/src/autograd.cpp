#include "lwave/autograd.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lwave::ag {
namespace {

Tape& same_tape(std::initializer_list<Var> vars) {
    Tape* t = nullptr;
    for (const Var& v : vars) {
        if (!v.valid()) throw UnreachableNode("operation on an unbound Var");
        if (t != nullptr && v.tape != t) throw UnreachableNode("operands live on different tapes");
        t = v.tape;
    }
    return *t;
}

void accumulate(Tensor4& dst, const Tensor4& src) {
    for (std::size_t i = 0; i < dst.numel(); ++i) dst.data()[i] += src.data()[i];
}

constexpr double kFaultFactor = 1.01;

} // namespace

// --- Tape -------------------------------------------------------------------

Var Tape::constant(Tensor4 value) {
    nodes_.push_back({std::move(value), Tensor4(), {}, nullptr, false});
    return {this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::parameter(const Tensor4& value) {
    if (auto it = params_.find(&value); it != params_.end()) return {this, it->second};
    nodes_.push_back({value, Tensor4(), {}, nullptr, true});
    const int id = static_cast<int>(nodes_.size() - 1);
    params_.emplace(&value, id);
    return {this, id};
}

Var Tape::bind(const Tensor4& value, bool trainable) {
    return trainable ? parameter(value) : constant(value);
}

Var Tape::push(Tensor4 value, std::vector<int> parents, BackwardFn fn) {
    bool needs = false;
    for (int p : parents) needs = needs || nodes_.at(static_cast<std::size_t>(p)).requires_grad;
    nodes_.push_back({std::move(value), Tensor4(), std::move(parents),
                      needs ? std::move(fn) : nullptr, needs});
    return {this, static_cast<int>(nodes_.size() - 1)};
}

void Tape::check_owned(Var v) const {
    if (v.tape != this || v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
        throw UnreachableNode("Var does not belong to this tape");
    }
}

const Tensor4& Tape::value(Var v) const {
    check_owned(v);
    return nodes_[static_cast<std::size_t>(v.id)].value;
}

Tensor4& Tape::grad_buffer(int id) {
    Node& n = nodes_.at(static_cast<std::size_t>(id));
    if (n.grad.shape() != n.value.shape()) n.grad = Tensor4(n.value.shape());
    return n.grad;
}

void Tape::backward(Var loss) {
    check_owned(loss);
    if (nodes_[static_cast<std::size_t>(loss.id)].value.numel() != 1) {
        throw ShapeError("backward: loss must be a single-element tensor");
    }
    for (Node& n : nodes_) n.grad = Tensor4();
    grad_buffer(loss.id).data()[0] = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.backward && n.grad.numel() != 0) n.backward(*this, i);
    }
}

const Tensor4& Tape::grad(Var v) {
    check_owned(v);
    return grad_buffer(v.id);
}

const Tensor4* Tape::param_grad(const Tensor4& param) {
    auto it = params_.find(&param);
    if (it == params_.end()) return nullptr;
    return &grad_buffer(it->second);
}

// --- operations ---------------------------------------------------------------

Var conv2d(Var x, Var weight, Var bias, int stride, int padding) {
    Tape& t = same_tape({x, weight, bias});
    Tensor4 out = lwave::conv2d(t.value(x), t.value(weight), t.value(bias), stride, padding);
    const int xi = x.id, wi = weight.id, bi = bias.id;
    return t.push(std::move(out), {xi, wi, bi}, [=](Tape& tp, int self) {
        const bool need_x = tp.requires_grad(xi);
        ConvGrads g = conv2d_backward(tp.node_value(xi), tp.node_value(wi), tp.node_grad(self),
                                      stride, padding, need_x);
        if (tp.fault() == Fault::conv_weight_grad) {
            for (double& v : g.weight.data()) v *= kFaultFactor;
        }
        if (need_x) accumulate(tp.grad_buffer(xi), g.input);
        if (tp.requires_grad(wi)) accumulate(tp.grad_buffer(wi), g.weight);
        if (tp.requires_grad(bi)) accumulate(tp.grad_buffer(bi), g.bias);
    });
}

Var conv2d(Tape& t, Var x, const ConvParams& p, bool trainable) {
    return conv2d(x, t.bind(p.weight, trainable), t.bind(p.bias, trainable), p.stride, p.padding);
}

Var conv_transpose2d(Var x, Var weight, Var bias, int stride, int padding) {
    Tape& t = same_tape({x, weight, bias});
    Tensor4 out =
        lwave::conv_transpose2d(t.value(x), t.value(weight), t.value(bias), stride, padding);
    const int xi = x.id, wi = weight.id, bi = bias.id;
    return t.push(std::move(out), {xi, wi, bi}, [=](Tape& tp, int self) {
        const bool need_x = tp.requires_grad(xi);
        ConvGrads g = conv_transpose2d_backward(tp.node_value(xi), tp.node_value(wi),
                                                tp.node_grad(self), stride, padding, need_x);
        if (need_x) accumulate(tp.grad_buffer(xi), g.input);
        if (tp.requires_grad(wi)) accumulate(tp.grad_buffer(wi), g.weight);
        if (tp.requires_grad(bi)) accumulate(tp.grad_buffer(bi), g.bias);
    });
}

Var conv_transpose2d(Tape& t, Var x, const ConvParams& p, bool trainable) {
    return conv_transpose2d(x, t.bind(p.weight, trainable), t.bind(p.bias, trainable), p.stride,
                            p.padding);
}

Var leaky_relu(Var x, double slope) {
    Tape& t = same_tape({x});
    const int xi = x.id;
    for (double v : t.value(x).data()) t.note_kink_distance(std::abs(v));
    return t.push(lwave::leaky_relu(t.value(x), slope), {xi}, [=](Tape& tp, int self) {
        const auto& xv = tp.node_value(xi).data();
        const auto& go = tp.node_grad(self).data();
        auto& gx = tp.grad_buffer(xi).data();
        for (std::size_t i = 0; i < xv.size(); ++i) gx[i] += xv[i] >= 0.0 ? go[i] : slope * go[i];
    });
}

Var sigmoid(Var x) {
    Tape& t = same_tape({x});
    const int xi = x.id;
    return t.push(lwave::sigmoid(t.value(x)), {xi}, [=](Tape& tp, int self) {
        const auto& y = tp.node_value(self).data();
        const auto& go = tp.node_grad(self).data();
        auto& gx = tp.grad_buffer(xi).data();
        for (std::size_t i = 0; i < y.size(); ++i) gx[i] += go[i] * y[i] * (1.0 - y[i]);
    });
}

Var concat_channels(std::span<const Var> xs) {
    if (xs.empty()) throw ShapeError("concat_channels: no inputs");
    Tape& t = *xs[0].tape;
    std::vector<Tensor4> values;
    std::vector<int> ids;
    for (const Var& v : xs) {
        same_tape({xs[0], v});
        values.push_back(t.value(v));
        ids.push_back(v.id);
    }
    Tensor4 out = lwave::concat_channels(values);
    return t.push(std::move(out), ids, [ids](Tape& tp, int self) {
        const Tensor4& go = tp.node_grad(self);
        std::size_t offset = 0;
        for (int id : ids) {
            const std::size_t c = tp.node_value(id).shape().c;
            if (tp.requires_grad(id)) {
                accumulate(tp.grad_buffer(id), lwave::slice_channels(go, offset, c));
            }
            offset += c;
        }
    });
}

Var slice_channels(Var x, std::size_t begin, std::size_t count) {
    Tape& t = same_tape({x});
    const int xi = x.id;
    return t.push(lwave::slice_channels(t.value(x), begin, count), {xi},
                  [=](Tape& tp, int self) {
                      const Tensor4& go = tp.node_grad(self);
                      Tensor4& gx = tp.grad_buffer(xi);
                      const auto& s = go.shape();
                      for (std::size_t n = 0; n < s.n; ++n) {
                          const double* src = go.plane(n, 0).data();
                          double* dst = gx.plane(n, begin).data();
                          for (std::size_t i = 0; i < count * s.plane(); ++i) dst[i] += src[i];
                      }
                  });
}

Var dwt2d(Var x, const wavelet::FilterPair& filters) {
    Tape& t = same_tape({x});
    const Tensor4& xv = t.value(x);
    const auto& s = xv.shape();
    if (s.h % 2 != 0 || s.w % 2 != 0) {
        throw ShapeError("dwt2d: spatial dims " + s.str() + " must be even");
    }
    const std::size_t h2 = s.h / 2, w2 = s.w / 2;
    Tensor4 out({s.n, 4 * s.c, h2, w2});
    for (std::size_t n = 0; n < s.n; ++n) {
        for (std::size_t c = 0; c < s.c; ++c) {
            const auto plane = xv.plane(n, c);
            Matrix img(s.h, s.w, std::vector<double>(plane.begin(), plane.end()));
            const wavelet::SubbandSet b = wavelet::dwt2d(img, filters);
            const Matrix* blocks[4] = {&b.ll, &b.lh, &b.hl, &b.hh};
            for (std::size_t k = 0; k < 4; ++k) {
                std::copy(blocks[k]->data().begin(), blocks[k]->data().end(),
                          out.plane(n, k * s.c + c).begin());
            }
        }
    }
    const int xi = x.id;
    // The analysis operator is orthogonal, so its adjoint is the synthesis.
    return t.push(std::move(out), {xi}, [xi, filters](Tape& tp, int self) {
        const Tensor4& go = tp.node_grad(self);
        Tensor4& gx = tp.grad_buffer(xi);
        const auto& gs = gx.shape();
        const std::size_t h2 = gs.h / 2, w2 = gs.w / 2;
        auto band = [&](std::size_t n, std::size_t k, std::size_t c) {
            const auto p = go.plane(n, k * gs.c + c);
            return Matrix(h2, w2, std::vector<double>(p.begin(), p.end()));
        };
        for (std::size_t n = 0; n < gs.n; ++n) {
            for (std::size_t c = 0; c < gs.c; ++c) {
                const Matrix back = wavelet::idwt2d(
                    {band(n, 0, c), band(n, 1, c), band(n, 2, c), band(n, 3, c)}, filters);
                auto dst = gx.plane(n, c);
                for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += back.data()[i];
            }
        }
    });
}

Var add(Var a, Var b) {
    Tape& t = same_tape({a, b});
    const Tensor4& av = t.value(a);
    const Tensor4& bv = t.value(b);
    if (av.shape() != bv.shape()) throw ShapeError("add: shape mismatch");
    Tensor4 out = av;
    accumulate(out, bv);
    const int ai = a.id, bi = b.id;
    return t.push(std::move(out), {ai, bi}, [=](Tape& tp, int self) {
        if (tp.requires_grad(ai)) accumulate(tp.grad_buffer(ai), tp.node_grad(self));
        if (tp.requires_grad(bi)) accumulate(tp.grad_buffer(bi), tp.node_grad(self));
    });
}

Var scale(Var x, double factor) {
    Tape& t = same_tape({x});
    Tensor4 out = t.value(x);
    for (double& v : out.data()) v *= factor;
    const int xi = x.id;
    return t.push(std::move(out), {xi}, [=](Tape& tp, int self) {
        const auto& go = tp.node_grad(self).data();
        auto& gx = tp.grad_buffer(xi).data();
        for (std::size_t i = 0; i < go.size(); ++i) gx[i] += factor * go[i];
    });
}

Var weighted_sum(Var x, const Tensor4& weights) {
    Tape& t = same_tape({x});
    const double s = dot(t.value(x), weights);
    const int xi = x.id;
    return t.push(Tensor4({1, 1, 1, 1}, s), {xi}, [=](Tape& tp, int self) {
        const double go = tp.node_grad(self).data()[0];
        auto& gx = tp.grad_buffer(xi).data();
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += go * weights.data()[i];
    });
}

Var l1_loss(Var a, Var b) {
    Tape& t = same_tape({a, b});
    const double v = lwave::l1_loss(t.value(a), t.value(b));
    const int ai = a.id, bi = b.id;
    return t.push(Tensor4({1, 1, 1, 1}, v), {ai, bi}, [=](Tape& tp, int self) {
        const auto& av = tp.node_value(ai).data();
        const auto& bv = tp.node_value(bi).data();
        const double k = tp.node_grad(self).data()[0] / static_cast<double>(av.size());
        const bool ga = tp.requires_grad(ai), gb = tp.requires_grad(bi);
        for (std::size_t i = 0; i < av.size(); ++i) {
            const double d = av[i] - bv[i];
            const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            if (ga) tp.grad_buffer(ai).data()[i] += k * sgn;
            if (gb) tp.grad_buffer(bi).data()[i] -= k * sgn;
        }
    });
}

Var mse_loss(Var a, Var b) {
    Tape& t = same_tape({a, b});
    const double v = lwave::mse_loss(t.value(a), t.value(b));
    const int ai = a.id, bi = b.id;
    return t.push(Tensor4({1, 1, 1, 1}, v), {ai, bi}, [=](Tape& tp, int self) {
        const auto& av = tp.node_value(ai).data();
        const auto& bv = tp.node_value(bi).data();
        const double k = 2.0 * tp.node_grad(self).data()[0] / static_cast<double>(av.size());
        const bool ga = tp.requires_grad(ai), gb = tp.requires_grad(bi);
        for (std::size_t i = 0; i < av.size(); ++i) {
            const double d = av[i] - bv[i];
            if (ga) tp.grad_buffer(ai).data()[i] += k * d;
            if (gb) tp.grad_buffer(bi).data()[i] -= k * d;
        }
    });
}

Var bce_with_logits(Var logits, Var targets) {
    Tape& t = same_tape({logits, targets});
    const double v = lwave::bce_with_logits(t.value(logits), t.value(targets));
    const int li = logits.id, ti = targets.id;
    return t.push(Tensor4({1, 1, 1, 1}, v), {li, ti}, [=](Tape& tp, int self) {
        const auto& z = tp.node_value(li).data();
        const auto& y = tp.node_value(ti).data();
        const double k = tp.node_grad(self).data()[0] / static_cast<double>(z.size());
        const Tensor4 p = lwave::sigmoid(tp.node_value(li));
        const bool gl = tp.requires_grad(li), gt = tp.requires_grad(ti);
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (gl) tp.grad_buffer(li).data()[i] += k * (p.data()[i] - y[i]);
            if (gt) tp.grad_buffer(ti).data()[i] -= k * z[i];
        }
    });
}

} // namespace lwave::ag
