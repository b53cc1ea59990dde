#include "bspforge/grad_check.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "bspforge/errors.hpp"

namespace bspforge::ad {

std::string GradCheckReport::describe() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " max_rel_err=" << max_rel_err;
  if (worst_param >= 0) {
    os << " at param " << worst_param << " coord " << worst_coord << " analytic=" << analytic
       << " numeric=" << numeric;
  }
  return os.str();
}

GradCheckReport grad_check(const TapeBuilder& f, const std::vector<Tensor>& params, double h,
                           double tol) {
  if (h <= 0) throw ConfigError("grad_check: step h must be positive");

  auto build = [&](Tape& tape, std::vector<NodeId>& leaves) {
    leaves.clear();
    for (const Tensor& p : params) leaves.push_back(tape.param(p));
    NodeId loss = f(tape, leaves);
    if (!tape.value(loss).is_scalar()) {
      throw ConfigError("grad_check: builder must produce a scalar loss");
    }
    return loss;
  };

  Tape tape;
  std::vector<NodeId> leaves;
  const NodeId loss = build(tape, leaves);

  {
    Tape tape2;
    std::vector<NodeId> leaves2;
    const NodeId loss2 = build(tape2, leaves2);
    bool same = tape.node_count() == tape2.node_count();
    if (same) {
      for (std::size_t i = 0; same && i < tape.node_count(); ++i) {
        const NodeId id{static_cast<std::int32_t>(i)};
        const Tensor& a = tape.value(id);
        const Tensor& b = tape2.value(id);
        same = a.same_shape(b) &&
               std::memcmp(a.data(), b.data(), sizeof(float) * static_cast<std::size_t>(a.size())) == 0;
      }
    }
    if (!same || std::memcmp(&tape.value(loss)[0], &tape2.value(loss2)[0], sizeof(float)) != 0) {
      throw Error("grad_check: two forward passes differ; builder is non-deterministic");
    }
  }

  tape.backward(loss);

  GradCheckReport report;
  report.pass = true;
  for (std::size_t p = 0; p < leaves.size(); ++p) {
    const Tensor& g = tape.grad(leaves[p]);
    for (std::int64_t c = 0; c < g.size(); ++c) {
      const double fp = tape.eval_f64(loss, leaves[p], c, +h)[0];
      const double fm = tape.eval_f64(loss, leaves[p], c, -h)[0];
      const double numeric = (fp - fm) / (2.0 * h);
      const double analytic = g[c];
      const double rel =
          std::fabs(analytic - numeric) / std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = static_cast<int>(p);
        report.worst_coord = c;
        report.analytic = analytic;
        report.numeric = numeric;
      }
    }
  }
  report.pass = report.max_rel_err <= tol;
  return report;
}

}  // namespace bspforge::ad
