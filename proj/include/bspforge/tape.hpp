#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bspforge/tensor.hpp"

namespace bspforge::ad {

enum class OpKind : std::uint8_t {
  kLeaf,
  kMatmul,
  kAdd,
  kSub,
  kMul,
  kRelu,
  kClip01,
  kSigmoid,
  kSquare,
  kAbs,
  kReduceSum,
  kReduceMin,
  kReduceMax,
  kMean,
  kGather,
};

const char* op_name(OpKind k);

struct NodeId {
  std::int32_t v = -1;
  bool valid() const { return v >= 0; }
};

// Fixed index map applied as out[i] = src[index[i]], with index -1 producing 0.
// Used to lower convolutions (im2col), bias tiling and column selection onto
// matmul and elementwise ops.
struct GatherPlan {
  std::vector<std::int64_t> index;
  std::vector<std::int64_t> out_shape;
};

// Reverse-mode tape. Operations evaluate eagerly on record; backward() walks
// the recorded list in exact reverse order. Single-threaded per tape; heavy
// kernels may parallelize internally with deterministic results.
class Tape {
 public:
  // Leaves. input() is a constant, param() participates in backward().
  NodeId input(Tensor t);
  NodeId param(Tensor t);

  NodeId matmul(NodeId a, NodeId b);
  // Elementwise; operands must have matching shapes, or one side must be a
  // one-element tensor (scalar broadcast). No other broadcasting exists.
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId relu(NodeId a);
  NodeId clip01(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId square(NodeId a);
  NodeId abs(NodeId a);
  // Reductions over one axis of a rank-1 or rank-2 tensor; rank-1 reduces to
  // a scalar. Sums accumulate in double.
  NodeId reduce_sum(NodeId a, int axis);
  NodeId reduce_min(NodeId a, int axis);
  NodeId reduce_max(NodeId a, int axis);
  NodeId mean(NodeId a);  // all elements -> scalar
  NodeId gather(NodeId a, std::shared_ptr<const GatherPlan> plan);

  const Tensor& value(NodeId id) const;
  bool requires_grad(NodeId id) const;

  // Reverse pass from a scalar loss. Clears previous gradients.
  void backward(NodeId loss);
  const Tensor& grad(NodeId id) const;

  // Re-evaluates the recorded graph in double precision with one leaf
  // coordinate shifted by delta; returns the value of `out`. This is the
  // independent arithmetic path used by finite-difference checking.
  std::vector<double> eval_f64(NodeId out, NodeId leaf, std::int64_t coord, double delta) const;

  std::size_t node_count() const { return nodes_.size(); }
  void set_check_finite(bool on) { check_finite_ = on; }

 private:
  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::int32_t a = -1;
    std::int32_t b = -1;
    int axis = -1;
    bool needs_grad = false;
    Tensor value;
    Tensor grad;
    bool grad_live = false;
    std::shared_ptr<const GatherPlan> plan;
  };

  NodeId record(Node n);
  NodeId elementwise_binary(OpKind kind, NodeId a, NodeId b);
  NodeId unary(OpKind kind, NodeId a);
  NodeId reduce(OpKind kind, NodeId a, int axis);
  Tensor& grad_buffer(std::int32_t id);
  const Node& node(NodeId id) const;

  std::vector<Node> nodes_;
  bool check_finite_ = false;
};

}  // namespace bspforge::ad
