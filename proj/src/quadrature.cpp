#include "bohm/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace bohm {

namespace {

constexpr unsigned kOrder = 10;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

const Rule& gauss_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kOrder>;
    Rule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
      if (x[i] != 0.0) {
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
      }
    }
    return r;
  }();
  return rule;
}

struct Axis {
  std::size_t coord;
  std::vector<double> points;
  std::vector<double> weights;
};

Axis composite_axis(std::size_t coord, const Interval& iv, std::size_t panels) {
  const auto& rule = gauss_rule();
  Axis axis{coord, {}, {}};
  const double h = iv.width() / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = iv.lo + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      axis.points.push_back(mid + 0.5 * h * rule.nodes[i]);
      axis.weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return axis;
}

double tensor_sum(const std::function<double(const Configuration&)>& f, const std::vector<Axis>& axes,
                  Configuration c) {
  if (axes.empty()) return f(c);
  const std::size_t outer = axes.size() - 1;
  const Axis& inner = axes.back();
  std::vector<std::size_t> idx(outer, 0);
  double total = 0.0;
  while (true) {
    double outer_weight = 1.0;
    for (std::size_t a = 0; a < outer; ++a) {
      c.q[axes[a].coord] = axes[a].points[idx[a]];
      outer_weight *= axes[a].weights[idx[a]];
    }
    double partial = 0.0;
    for (std::size_t i = 0; i < inner.points.size(); ++i) {
      c.q[inner.coord] = inner.points[i];
      partial += inner.weights[i] * f(c);
    }
    total += outer_weight * partial;

    bool done = true;
    for (std::size_t a = outer; a-- > 0;) {
      if (++idx[a] < axes[a].points.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) return total;
  }
}

}  // namespace

QuadratureResult integrate_box(const std::function<double(const Configuration&)>& f,
                               const Window& window, std::size_t dim, double t,
                               const QuadratureOptions& options) {
  if (window.bounds.size() != dim) throw ValidationError("integrate_box: window/dimension mismatch");
  Configuration base{t, {}, dim};
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& b = window.bounds[i];
    if (b.hi < b.lo) throw ValidationError("integrate_box: interval with hi < lo");
    if (b.hi == b.lo) {
      base.q[i] = b.lo;
    } else {
      active.push_back(i);
    }
  }
  if (active.empty()) return {f(base), 0.0, 1, 0};

  const std::size_t per_panel = gauss_rule().nodes.size();
  auto level_cost = [&](std::size_t panels) {
    std::size_t cost = 1;
    for (std::size_t i = 0; i < active.size(); ++i) cost *= panels * per_panel;
    return cost;
  };
  auto evaluate = [&](std::size_t panels) {
    std::vector<Axis> axes;
    for (std::size_t i : active) axes.push_back(composite_axis(i, window.bounds[i], panels));
    return tensor_sum(f, axes, base);
  };

  std::size_t panels = std::max<std::size_t>(1, options.initial_panels);
  std::size_t evaluations = level_cost(panels);
  double previous = evaluate(panels);
  while (true) {
    const std::size_t next = 2 * panels;
    const std::size_t cost = level_cost(next);
    if (evaluations + cost > options.max_evaluations) {
      throw QuadratureError("quadrature did not converge within the evaluation budget");
    }
    const double current = evaluate(next);
    evaluations += cost;
    panels = next;
    const double diff = std::abs(current - previous);
    if (diff <= std::max(options.rel_tol * std::abs(current), options.abs_tol)) {
      return {current, diff, evaluations, panels};
    }
    previous = current;
  }
}

}  // namespace bohm
