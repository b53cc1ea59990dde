#include "bspforge/tape.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "bspforge/errors.hpp"

namespace bspforge::ad {

namespace {

template <typename S>
using MatRM = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename S>
void matmul_kernel(const S* a, std::int64_t m, std::int64_t k, const S* b, std::int64_t n, S* out) {
  Eigen::Map<const MatRM<S>> A(a, m, k);
  Eigen::Map<const MatRM<S>> B(b, k, n);
  Eigen::Map<MatRM<S>> C(out, m, n);
  C.noalias() = A * B;
}

// dA += dC * B^T ; dB += A^T * dC
template <typename S>
void matmul_backward_a(const S* dc, std::int64_t m, std::int64_t n, const S* b, std::int64_t k, S* da) {
  Eigen::Map<const MatRM<S>> dC(dc, m, n);
  Eigen::Map<const MatRM<S>> B(b, k, n);
  Eigen::Map<MatRM<S>> dA(da, m, k);
  dA.noalias() += dC * B.transpose();
}

template <typename S>
void matmul_backward_b(const S* dc, std::int64_t m, std::int64_t n, const S* a, std::int64_t k, S* db) {
  Eigen::Map<const MatRM<S>> dC(dc, m, n);
  Eigen::Map<const MatRM<S>> A(a, m, k);
  Eigen::Map<MatRM<S>> dB(db, k, n);
  dB.noalias() += A.transpose() * dC;
}

enum class Broadcast { kNone, kLeftScalar, kRightScalar };

Broadcast broadcast_mode(const Tensor& a, const Tensor& b, OpKind kind) {
  if (a.same_shape(b)) return Broadcast::kNone;
  if (a.is_scalar()) return Broadcast::kLeftScalar;
  if (b.is_scalar()) return Broadcast::kRightScalar;
  throw ConfigError(std::string(op_name(kind)) + ": incompatible shapes " + a.shape_str() + " and " +
                    b.shape_str());
}

template <typename S, typename F>
void ew_binary(const S* a, const S* b, S* out, std::int64_t n, Broadcast bc, F op) {
  switch (bc) {
    case Broadcast::kNone:
#pragma omp parallel for schedule(static) if (n > 1 << 15)
      for (std::int64_t i = 0; i < n; ++i) out[i] = op(a[i], b[i]);
      break;
    case Broadcast::kLeftScalar: {
      const S s = a[0];
#pragma omp parallel for schedule(static) if (n > 1 << 15)
      for (std::int64_t i = 0; i < n; ++i) out[i] = op(s, b[i]);
      break;
    }
    case Broadcast::kRightScalar: {
      const S s = b[0];
#pragma omp parallel for schedule(static) if (n > 1 << 15)
      for (std::int64_t i = 0; i < n; ++i) out[i] = op(a[i], s);
      break;
    }
  }
}

// Rank-1 tensors reduce over their single axis to a scalar; a rank-2 tensor
// with `axis` 0 reduces rows away (output = cols), axis 1 the other way.
void reduce_dims(const Tensor& t, int axis, std::int64_t& groups, std::int64_t& extent,
                 std::int64_t& group_stride, std::int64_t& element_stride,
                 std::vector<std::int64_t>& out_shape) {
  if (t.rank() == 1) {
    if (axis != 0) throw ConfigError("reduce: axis " + std::to_string(axis) + " out of range for rank-1 tensor");
    groups = 1;
    extent = t.size();
    group_stride = 0;
    element_stride = 1;
    out_shape = {1};
    return;
  }
  if (t.rank() != 2) throw ConfigError("reduce: expected rank-1 or rank-2 tensor, got " + t.shape_str());
  const std::int64_t r = t.shape()[0], c = t.shape()[1];
  if (axis == 0) {
    groups = c;
    extent = r;
    group_stride = 1;
    element_stride = c;
    out_shape = {c};
  } else if (axis == 1) {
    groups = r;
    extent = c;
    group_stride = c;
    element_stride = 1;
    out_shape = {r};
  } else {
    throw ConfigError("reduce: axis " + std::to_string(axis) + " out of range for rank-2 tensor");
  }
  if (extent == 0) throw ConfigError("reduce: cannot reduce over an empty axis");
}

template <typename S>
S sigmoid_of(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

}  // namespace

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kRelu: return "relu";
    case OpKind::kClip01: return "clip01";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSquare: return "square";
    case OpKind::kAbs: return "abs";
    case OpKind::kReduceSum: return "reduce-sum-axis";
    case OpKind::kReduceMin: return "reduce-min-axis";
    case OpKind::kReduceMax: return "reduce-max-axis";
    case OpKind::kMean: return "mean";
    case OpKind::kGather: return "gather";
  }
  return "?";
}

const Tape::Node& Tape::node(NodeId id) const {
  if (!id.valid() || static_cast<std::size_t>(id.v) >= nodes_.size()) {
    throw ConfigError("tape: invalid node id");
  }
  return nodes_[static_cast<std::size_t>(id.v)];
}

NodeId Tape::record(Node n) {
  if (check_finite_ && !n.value.all_finite()) {
    throw NumericalError(std::string("tape: non-finite values in output of ") + op_name(n.kind));
  }
  nodes_.push_back(std::move(n));
  return NodeId{static_cast<std::int32_t>(nodes_.size() - 1)};
}

NodeId Tape::input(Tensor t) {
  Node n;
  n.kind = OpKind::kLeaf;
  n.needs_grad = false;
  n.value = std::move(t);
  return record(std::move(n));
}

NodeId Tape::param(Tensor t) {
  Node n;
  n.kind = OpKind::kLeaf;
  n.needs_grad = true;
  n.value = std::move(t);
  return record(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.value.rank() != 2 || nb.value.rank() != 2 || na.value.cols() != nb.value.rows()) {
    throw ConfigError("matmul: incompatible shapes " + na.value.shape_str() + " and " + nb.value.shape_str());
  }
  Node n;
  n.kind = OpKind::kMatmul;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = Tensor({na.value.rows(), nb.value.cols()});
  matmul_kernel<float>(na.value.data(), na.value.rows(), na.value.cols(), nb.value.data(),
                       nb.value.cols(), n.value.data());
  return record(std::move(n));
}

NodeId Tape::elementwise_binary(OpKind kind, NodeId a, NodeId b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  const Broadcast bc = broadcast_mode(na.value, nb.value, kind);
  Node n;
  n.kind = kind;
  n.a = a.v;
  n.b = b.v;
  n.needs_grad = na.needs_grad || nb.needs_grad;
  n.value = Tensor(bc == Broadcast::kLeftScalar ? nb.value.shape() : na.value.shape());
  const std::int64_t cnt = n.value.size();
  switch (kind) {
    case OpKind::kAdd:
      ew_binary<float>(na.value.data(), nb.value.data(), n.value.data(), cnt, bc,
                       [](float x, float y) { return x + y; });
      break;
    case OpKind::kSub:
      ew_binary<float>(na.value.data(), nb.value.data(), n.value.data(), cnt, bc,
                       [](float x, float y) { return x - y; });
      break;
    case OpKind::kMul:
      ew_binary<float>(na.value.data(), nb.value.data(), n.value.data(), cnt, bc,
                       [](float x, float y) { return x * y; });
      break;
    default:
      throw ConfigError("not a binary op");
  }
  return record(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) { return elementwise_binary(OpKind::kAdd, a, b); }
NodeId Tape::sub(NodeId a, NodeId b) { return elementwise_binary(OpKind::kSub, a, b); }
NodeId Tape::mul(NodeId a, NodeId b) { return elementwise_binary(OpKind::kMul, a, b); }

NodeId Tape::unary(OpKind kind, NodeId a) {
  const Node& na = node(a);
  Node n;
  n.kind = kind;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.value = Tensor(na.value.shape());
  const float* x = na.value.data();
  float* y = n.value.data();
  const std::int64_t cnt = n.value.size();
#pragma omp parallel for schedule(static) if (cnt > 1 << 15)
  for (std::int64_t i = 0; i < cnt; ++i) {
    switch (kind) {
      case OpKind::kRelu: y[i] = x[i] > 0.0f ? x[i] : 0.0f; break;
      case OpKind::kClip01: y[i] = std::min(1.0f, std::max(0.0f, x[i])); break;
      case OpKind::kSigmoid: y[i] = sigmoid_of(x[i]); break;
      case OpKind::kSquare: y[i] = x[i] * x[i]; break;
      case OpKind::kAbs: y[i] = std::fabs(x[i]); break;
      default: break;
    }
  }
  return record(std::move(n));
}

NodeId Tape::relu(NodeId a) { return unary(OpKind::kRelu, a); }
NodeId Tape::clip01(NodeId a) { return unary(OpKind::kClip01, a); }
NodeId Tape::sigmoid(NodeId a) { return unary(OpKind::kSigmoid, a); }
NodeId Tape::square(NodeId a) { return unary(OpKind::kSquare, a); }
NodeId Tape::abs(NodeId a) { return unary(OpKind::kAbs, a); }

NodeId Tape::reduce(OpKind kind, NodeId a, int axis) {
  const Node& na = node(a);
  std::int64_t groups, extent, gs, es;
  std::vector<std::int64_t> out_shape;
  reduce_dims(na.value, axis, groups, extent, gs, es, out_shape);
  Node n;
  n.kind = kind;
  n.a = a.v;
  n.axis = axis;
  n.needs_grad = na.needs_grad;
  n.value = Tensor(out_shape);
  const float* x = na.value.data();
  float* y = n.value.data();
#pragma omp parallel for schedule(static) if (groups > 256)
  for (std::int64_t g = 0; g < groups; ++g) {
    const float* base = x + g * gs;
    if (kind == OpKind::kReduceSum) {
      double acc = 0.0;  // 64-bit accumulation, fixed order
      for (std::int64_t i = 0; i < extent; ++i) acc += base[i * es];
      y[g] = static_cast<float>(acc);
    } else {
      float best = base[0];
      for (std::int64_t i = 1; i < extent; ++i) {
        const float v = base[i * es];
        if (kind == OpKind::kReduceMin ? v < best : v > best) best = v;
      }
      y[g] = best;
    }
  }
  return record(std::move(n));
}

NodeId Tape::reduce_sum(NodeId a, int axis) { return reduce(OpKind::kReduceSum, a, axis); }
NodeId Tape::reduce_min(NodeId a, int axis) { return reduce(OpKind::kReduceMin, a, axis); }
NodeId Tape::reduce_max(NodeId a, int axis) { return reduce(OpKind::kReduceMax, a, axis); }

NodeId Tape::mean(NodeId a) {
  const Node& na = node(a);
  if (na.value.size() == 0) throw ConfigError("mean: empty tensor");
  Node n;
  n.kind = OpKind::kMean;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  double acc = 0.0;
  for (float v : na.value.values()) acc += v;
  n.value = Tensor::scalar(static_cast<float>(acc / static_cast<double>(na.value.size())));
  return record(std::move(n));
}

NodeId Tape::gather(NodeId a, std::shared_ptr<const GatherPlan> plan) {
  const Node& na = node(a);
  Node n;
  n.kind = OpKind::kGather;
  n.a = a.v;
  n.needs_grad = na.needs_grad;
  n.plan = std::move(plan);
  n.value = Tensor(n.plan->out_shape);
  if (static_cast<std::int64_t>(n.plan->index.size()) != n.value.size()) {
    throw ConfigError("gather: plan index count does not match output shape");
  }
  const float* x = na.value.data();
  float* y = n.value.data();
  const std::int64_t cnt = n.value.size();
  const std::int64_t src_n = na.value.size();
  const std::int64_t* idx = n.plan->index.data();
#pragma omp parallel for schedule(static) if (cnt > 1 << 15)
  for (std::int64_t i = 0; i < cnt; ++i) {
    const std::int64_t j = idx[i];
    if (j < -1 || j >= src_n) throw ConfigError("gather: index out of range");
    y[i] = j < 0 ? 0.0f : x[j];
  }
  return record(std::move(n));
}

const Tensor& Tape::value(NodeId id) const { return node(id).value; }

bool Tape::requires_grad(NodeId id) const { return node(id).needs_grad; }

Tensor& Tape::grad_buffer(std::int32_t id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.grad_live) {
    n.grad = Tensor(n.value.shape());
    n.grad_live = true;
  }
  return n.grad;
}

const Tensor& Tape::grad(NodeId id) const {
  const Node& n = node(id);
  if (!n.needs_grad) throw ConfigError("grad: node does not require gradients");
  if (!n.grad_live) {
    static thread_local Tensor zero;
    zero = Tensor(n.value.shape());
    return zero;
  }
  return n.grad;
}

void Tape::backward(NodeId loss) {
  const Node& ln = node(loss);
  if (!ln.value.is_scalar()) {
    throw ConfigError("backward: loss must be scalar, got shape " + ln.value.shape_str());
  }
  for (Node& n : nodes_) n.grad_live = false;
  grad_buffer(loss.v)[0] = 1.0f;

  for (std::int32_t i = loss.v; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.grad_live || !n.needs_grad || n.kind == OpKind::kLeaf) continue;
    const Tensor& g = n.grad;
    Node& na = nodes_[static_cast<std::size_t>(n.a)];
    const bool want_a = na.needs_grad;
    switch (n.kind) {
      case OpKind::kMatmul: {
        Node& nb = nodes_[static_cast<std::size_t>(n.b)];
        const std::int64_t m = na.value.rows(), k = na.value.cols(), cn = nb.value.cols();
        if (want_a) {
          matmul_backward_a<float>(g.data(), m, cn, nb.value.data(), k, grad_buffer(n.a).data());
        }
        if (nb.needs_grad) {
          matmul_backward_b<float>(g.data(), m, cn, na.value.data(), k, grad_buffer(n.b).data());
        }
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub:
      case OpKind::kMul: {
        Node& nb = nodes_[static_cast<std::size_t>(n.b)];
        const std::int64_t cnt = n.value.size();
        const float sign_b = n.kind == OpKind::kSub ? -1.0f : 1.0f;
        auto accumulate = [&](std::int32_t dst, bool scalar_dst, auto term) {
          Tensor& gd = grad_buffer(dst);
          if (scalar_dst) {
            double acc = 0.0;  // 64-bit accumulation for the broadcast reduction
            for (std::int64_t j = 0; j < cnt; ++j) acc += static_cast<double>(term(j));
            gd[0] += static_cast<float>(acc);
          } else {
            float* p = gd.data();
#pragma omp parallel for schedule(static) if (cnt > 1 << 15)
            for (std::int64_t j = 0; j < cnt; ++j) p[j] += term(j);
          }
        };
        const bool a_bcast = na.value.is_scalar() && !n.value.is_scalar();
        const bool b_bcast = nb.value.is_scalar() && !n.value.is_scalar();
        if (want_a) {
          if (n.kind == OpKind::kMul) {
            accumulate(n.a, a_bcast,
                       [&](std::int64_t j) { return g[j] * (b_bcast ? nb.value[0] : nb.value[j]); });
          } else {
            accumulate(n.a, a_bcast, [&](std::int64_t j) { return g[j]; });
          }
        }
        if (nb.needs_grad) {
          if (n.kind == OpKind::kMul) {
            accumulate(n.b, b_bcast,
                       [&](std::int64_t j) { return g[j] * (a_bcast ? na.value[0] : na.value[j]); });
          } else {
            accumulate(n.b, b_bcast, [&](std::int64_t j) { return sign_b * g[j]; });
          }
        }
        break;
      }
      case OpKind::kRelu:
      case OpKind::kClip01:
      case OpKind::kSigmoid:
      case OpKind::kSquare:
      case OpKind::kAbs: {
        if (!want_a) break;
        Tensor& ga = grad_buffer(n.a);
        const float* x = na.value.data();
        const float* y = n.value.data();
        const float* gp = g.data();
        float* out = ga.data();
        const std::int64_t cnt = n.value.size();
        const OpKind k = n.kind;
#pragma omp parallel for schedule(static) if (cnt > 1 << 15)
        for (std::int64_t j = 0; j < cnt; ++j) {
          float d = 0.0f;
          switch (k) {
            // relu subgradient at 0 is 0; clip01 passes on the closed [0,1].
            case OpKind::kRelu: d = x[j] > 0.0f ? 1.0f : 0.0f; break;
            case OpKind::kClip01: d = (x[j] >= 0.0f && x[j] <= 1.0f) ? 1.0f : 0.0f; break;
            case OpKind::kSigmoid: d = y[j] * (1.0f - y[j]); break;
            case OpKind::kSquare: d = 2.0f * x[j]; break;
            case OpKind::kAbs: d = x[j] > 0.0f ? 1.0f : (x[j] < 0.0f ? -1.0f : 0.0f); break;
            default: break;
          }
          out[j] += gp[j] * d;
        }
        break;
      }
      case OpKind::kReduceSum:
      case OpKind::kReduceMin:
      case OpKind::kReduceMax: {
        if (!want_a) break;
        std::int64_t groups, extent, gs, es;
        std::vector<std::int64_t> out_shape;
        reduce_dims(na.value, n.axis, groups, extent, gs, es, out_shape);
        Tensor& ga = grad_buffer(n.a);
        const float* x = na.value.data();
        float* out = ga.data();
        const float* gp = g.data();
        const OpKind k = n.kind;
#pragma omp parallel for schedule(static) if (groups > 256)
        for (std::int64_t gix = 0; gix < groups; ++gix) {
          const float* base = x + gix * gs;
          float* obase = out + gix * gs;
          if (k == OpKind::kReduceSum) {
            for (std::int64_t i2 = 0; i2 < extent; ++i2) obase[i2 * es] += gp[gix];
          } else {
            // gradient routed to the first extremal element only
            std::int64_t arg = 0;
            float best = base[0];
            for (std::int64_t i2 = 1; i2 < extent; ++i2) {
              const float v = base[i2 * es];
              if (k == OpKind::kReduceMin ? v < best : v > best) {
                best = v;
                arg = i2;
              }
            }
            obase[arg * es] += gp[gix];
          }
        }
        break;
      }
      case OpKind::kMean: {
        if (!want_a) break;
        Tensor& ga = grad_buffer(n.a);
        const float scale = g[0] / static_cast<float>(na.value.size());
        float* out = ga.data();
        const std::int64_t cnt = na.value.size();
#pragma omp parallel for schedule(static) if (cnt > 1 << 15)
        for (std::int64_t j = 0; j < cnt; ++j) out[j] += scale;
        break;
      }
      case OpKind::kGather: {
        if (!want_a) break;
        Tensor& ga = grad_buffer(n.a);
        const std::int64_t* idx = n.plan->index.data();
        const float* gp = g.data();
        float* out = ga.data();
        const std::int64_t cnt = n.value.size();
        for (std::int64_t j = 0; j < cnt; ++j) {
          if (idx[j] >= 0) out[idx[j]] += gp[j];
        }
        break;
      }
      case OpKind::kLeaf:
        break;
    }
  }
}

std::vector<double> Tape::eval_f64(NodeId out, NodeId leaf, std::int64_t coord, double delta) const {
  node(out);
  const Node& lf = node(leaf);
  if (lf.kind != OpKind::kLeaf) throw ConfigError("eval_f64: perturbation target must be a leaf");
  if (coord < 0 || coord >= lf.value.size()) throw ConfigError("eval_f64: coordinate out of range");

  std::vector<std::vector<double>> vals(static_cast<std::size_t>(out.v) + 1);
  for (std::int32_t i = 0; i <= out.v; ++i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    std::vector<double>& y = vals[static_cast<std::size_t>(i)];
    y.resize(static_cast<std::size_t>(n.value.size()));
    switch (n.kind) {
      case OpKind::kLeaf: {
        for (std::int64_t j = 0; j < n.value.size(); ++j) y[static_cast<std::size_t>(j)] = n.value[j];
        if (i == leaf.v) y[static_cast<std::size_t>(coord)] += delta;
        break;
      }
      case OpKind::kMatmul: {
        const Node& na = nodes_[static_cast<std::size_t>(n.a)];
        const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
        matmul_kernel<double>(vals[static_cast<std::size_t>(n.a)].data(), na.value.rows(),
                              na.value.cols(), vals[static_cast<std::size_t>(n.b)].data(),
                              nb.value.cols(), y.data());
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub:
      case OpKind::kMul: {
        const Node& na = nodes_[static_cast<std::size_t>(n.a)];
        const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
        const Broadcast bc = broadcast_mode(na.value, nb.value, n.kind);
        const auto& av = vals[static_cast<std::size_t>(n.a)];
        const auto& bv = vals[static_cast<std::size_t>(n.b)];
        const std::int64_t cnt = n.value.size();
        if (n.kind == OpKind::kAdd) {
          ew_binary<double>(av.data(), bv.data(), y.data(), cnt, bc, [](double p, double q) { return p + q; });
        } else if (n.kind == OpKind::kSub) {
          ew_binary<double>(av.data(), bv.data(), y.data(), cnt, bc, [](double p, double q) { return p - q; });
        } else {
          ew_binary<double>(av.data(), bv.data(), y.data(), cnt, bc, [](double p, double q) { return p * q; });
        }
        break;
      }
      case OpKind::kRelu:
      case OpKind::kClip01:
      case OpKind::kSigmoid:
      case OpKind::kSquare:
      case OpKind::kAbs: {
        const auto& av = vals[static_cast<std::size_t>(n.a)];
        for (std::size_t j = 0; j < y.size(); ++j) {
          const double x = av[j];
          switch (n.kind) {
            case OpKind::kRelu: y[j] = x > 0 ? x : 0; break;
            case OpKind::kClip01: y[j] = std::min(1.0, std::max(0.0, x)); break;
            case OpKind::kSigmoid: y[j] = sigmoid_of(x); break;
            case OpKind::kSquare: y[j] = x * x; break;
            case OpKind::kAbs: y[j] = std::fabs(x); break;
            default: break;
          }
        }
        break;
      }
      case OpKind::kReduceSum:
      case OpKind::kReduceMin:
      case OpKind::kReduceMax: {
        const Node& na = nodes_[static_cast<std::size_t>(n.a)];
        std::int64_t groups, extent, gs, es;
        std::vector<std::int64_t> out_shape;
        reduce_dims(na.value, n.axis, groups, extent, gs, es, out_shape);
        const auto& av = vals[static_cast<std::size_t>(n.a)];
        for (std::int64_t g = 0; g < groups; ++g) {
          const double* base = av.data() + g * gs;
          if (n.kind == OpKind::kReduceSum) {
            double acc = 0.0;
            for (std::int64_t i2 = 0; i2 < extent; ++i2) acc += base[i2 * es];
            y[static_cast<std::size_t>(g)] = acc;
          } else {
            double best = base[0];
            for (std::int64_t i2 = 1; i2 < extent; ++i2) {
              const double v = base[i2 * es];
              if (n.kind == OpKind::kReduceMin ? v < best : v > best) best = v;
            }
            y[static_cast<std::size_t>(g)] = best;
          }
        }
        break;
      }
      case OpKind::kMean: {
        const auto& av = vals[static_cast<std::size_t>(n.a)];
        double acc = 0.0;
        for (double v : av) acc += v;
        y[0] = acc / static_cast<double>(av.size());
        break;
      }
      case OpKind::kGather: {
        const auto& av = vals[static_cast<std::size_t>(n.a)];
        const std::int64_t* idx = n.plan->index.data();
        for (std::size_t j = 0; j < y.size(); ++j) {
          y[j] = idx[j] < 0 ? 0.0 : av[static_cast<std::size_t>(idx[j])];
        }
        break;
      }
    }
  }
  return vals[static_cast<std::size_t>(out.v)];
}

}  // namespace bspforge::ad
