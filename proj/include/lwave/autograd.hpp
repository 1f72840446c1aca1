#pragma once

// Tape-based reverse-mode differentiation over Tensor4 values.
//
// Nodes are appended in creation order, which is a topological order of the
// graph. backward() walks that order in reverse, so gradient accumulation is
// fixed and repeated runs are bitwise identical.

#include "lwave/ops.hpp"
#include "lwave/tensor.hpp"
#include "lwave/wavelet.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace lwave::ag {

class Tape;

/// Handle to a node on a tape.
struct Var {
    Tape* tape = nullptr;
    int id = -1;

    bool valid() const noexcept { return tape != nullptr && id >= 0; }
};

/// Deliberate backward corruption used to prove the gradient checker can fail.
enum class Fault { none, conv_weight_grad };

class Tape {
public:
    using BackwardFn = std::function<void(Tape&, int self)>;

    explicit Tape(Fault fault = Fault::none) : fault_(fault) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Leaf without gradient.
    Var constant(Tensor4 value);
    /// Leaf tracked for gradients. Registering the same tensor twice returns
    /// the same node, so shared weights accumulate into one gradient.
    Var parameter(const Tensor4& value);
    /// parameter() when trainable, constant() otherwise.
    Var bind(const Tensor4& value, bool trainable);

    Var push(Tensor4 value, std::vector<int> parents, BackwardFn fn);

    const Tensor4& value(Var v) const;
    bool requires_grad(int id) const { return nodes_.at(static_cast<std::size_t>(id)).requires_grad; }

    /// Runs reverse accumulation from a single-element node. Gradients from a
    /// previous call are discarded first.
    void backward(Var loss);

    /// Gradient of the last backward() target w.r.t. v (zeros if unreached).
    const Tensor4& grad(Var v);
    /// Gradient for a tensor registered through parameter(), or nullptr.
    const Tensor4* param_grad(const Tensor4& param);

    /// Accumulation buffer used by backward functions.
    Tensor4& grad_buffer(int id);
    const Tensor4& node_value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Tensor4& node_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }

    Fault fault() const noexcept { return fault_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Smallest |input| seen by any leaky_relu on this tape (+inf if none).
    /// A finite-difference probe closer than this to a kink is unreliable.
    double kink_distance() const noexcept { return kink_distance_; }
    void note_kink_distance(double d) noexcept { kink_distance_ = std::min(kink_distance_, d); }

private:
    struct Node {
        Tensor4 value;
        Tensor4 grad;
        std::vector<int> parents;
        BackwardFn backward;
        bool requires_grad = false;
    };

    void check_owned(Var v) const;

    std::vector<Node> nodes_;
    std::unordered_map<const Tensor4*, int> params_;
    Fault fault_;
    double kink_distance_ = std::numeric_limits<double>::infinity();
};

Var conv2d(Var x, Var weight, Var bias, int stride, int padding);
Var conv2d(Tape& t, Var x, const ConvParams& p, bool trainable = true);
Var conv_transpose2d(Var x, Var weight, Var bias, int stride, int padding);
Var conv_transpose2d(Tape& t, Var x, const ConvParams& p, bool trainable = true);

Var leaky_relu(Var x, double slope);
Var sigmoid(Var x);
Var concat_channels(std::span<const Var> xs);
Var slice_channels(Var x, std::size_t begin, std::size_t count);

/// Channel-wise single-level 2D DWT. Output is (N, 4C, H/2, W/2) laid out as
/// the LL block of C channels, then LH, HL and HH blocks.
Var dwt2d(Var x, const wavelet::FilterPair& filters);

Var add(Var a, Var b);
Var scale(Var x, double factor);
/// Scalar sum(x * weights); weights are treated as constants.
Var weighted_sum(Var x, const Tensor4& weights);

Var l1_loss(Var a, Var b);
Var mse_loss(Var a, Var b);
Var bce_with_logits(Var logits, Var targets);

} // namespace lwave::ag
