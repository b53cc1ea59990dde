#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bspforge/tape.hpp"
#include "bspforge/tensor.hpp"

namespace bspforge::ad {

struct GradCheckReport {
  bool pass = false;
  double max_rel_err = 0.0;
  int worst_param = -1;
  std::int64_t worst_coord = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  std::string describe() const;
};

// Builds a scalar loss from parameter nodes already registered on the tape.
using TapeBuilder = std::function<NodeId(Tape&, const std::vector<NodeId>&)>;

// Compares backward() gradients against central finite differences computed
// by a double-precision replay of the recorded graph. The builder must be
// deterministic; two forward passes that differ raise an error.
GradCheckReport grad_check(const TapeBuilder& f, const std::vector<Tensor>& params, double h,
                           double tol);

}  // namespace bspforge::ad
