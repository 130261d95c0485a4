#pragma once

#include <cstddef>
#include <functional>

#include "bohm/types.hpp"

namespace bohm {

struct QuadratureResult {
  double value = 0.0;
  /// |I(n) - I(n/2)| between the last two refinement levels.
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  std::size_t initial_panels = 4;
  /// Refinement stops with QuadratureError once a level would exceed this many evaluations.
  std::size_t max_evaluations = std::size_t{1} << 26;
};

/// Tensor-product composite Gauss-Legendre over the non-degenerate axes of the
/// window; panels per axis double until successive levels agree.
QuadratureResult integrate_box(const std::function<double(const Configuration&)>& f,
                               const Window& window, std::size_t dim, double t = 0.0,
                               const QuadratureOptions& options = {});

}  // namespace bohm
