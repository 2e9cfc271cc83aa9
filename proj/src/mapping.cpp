#include "terranav/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "terranav/terrain.hpp"

namespace terranav {

void TraversabilityParams::validate() const {
  if (w_slope < 0.0 || w_flatness < 0.0 || w_step < 0.0)
    throw std::invalid_argument("traversability: weights must be >= 0");
  if (std::abs(w_slope + w_flatness + w_step - 1.0) > 1e-9)
    throw std::invalid_argument("traversability: weights must sum to 1");
  if (!(s_crit > 0.0 && f_crit > 0.0 && zeta_crit > 0.0 && sigma_crit > 0.0))
    throw std::invalid_argument("traversability: critical thresholds must be > 0");
  if (!(tau_crit > 0.0 && tau_crit < 1.0))
    throw std::invalid_argument("traversability: tau_crit must be in (0,1)");
}

int Footprint::cell_radius(double resolution) const {
  return static_cast<int>(std::ceil(half_extent / resolution - 1e-9));
}

void Footprint::validate(double resolution) const {
  if (!(half_extent >= resolution))
    throw std::invalid_argument(
        "footprint: half_extent must be >= grid resolution");
}

std::pair<GridMap, GridMap> rasterize(const SgpElevationModel& model,
                                      const GridSpec& spec) {
  spec.validate();
  GridMap elevation(spec, GridLayer::Elevation);
  GridMap variance(spec, GridLayer::Variance);
  for (int i = 0; i < spec.rows(); ++i)
    for (int j = 0; j < spec.cols(); ++j) {
      const Prediction p = model.predict({spec.cell_x(j), spec.cell_y(i)});
      elevation.at(i, j) = p.mean;
      variance.at(i, j) = p.variance;
    }
  return {std::move(elevation), std::move(variance)};
}

GridMap slope_map(const SgpElevationModel& model, const GridSpec& spec) {
  spec.validate();
  GridMap slope(spec, GridLayer::Slope);
  for (int i = 0; i < spec.rows(); ++i)
    for (int j = 0; j < spec.cols(); ++j) {
      const Vec2 g = model.predict_gradient({spec.cell_x(j), spec.cell_y(i)});
      slope.at(i, j) = std::atan(g.norm());
    }
  return slope;
}

namespace {

// Clipped window [lo, hi] around c with radius r, widened inward to span at
// least `min_span` cells.
void window_range(int c, int r, int count, int min_span, int& lo, int& hi) {
  lo = std::max(0, c - r);
  hi = std::min(count - 1, c + r);
  if (hi - lo + 1 < min_span) {
    lo = std::min(lo, count - min_span);
    lo = std::max(0, lo);
    hi = lo + min_span - 1;
  }
}

}  // namespace

GridMap flatness_map(const GridMap& elevation, const Footprint& footprint) {
  const GridSpec& spec = elevation.spec;
  footprint.validate(spec.resolution);
  const int r = footprint.cell_radius(spec.resolution);
  GridMap flat(spec, GridLayer::Flatness);

  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1));
  for (int i = 0; i < spec.rows(); ++i) {
    for (int j = 0; j < spec.cols(); ++j) {
      int i_lo, i_hi, j_lo, j_hi;
      window_range(i, r, spec.rows(), 3, i_lo, i_hi);
      window_range(j, r, spec.cols(), 3, j_lo, j_hi);
      pts.clear();
      for (int wi = i_lo; wi <= i_hi; ++wi)
        for (int wj = j_lo; wj <= j_hi; ++wj)
          pts.emplace_back(spec.cell_x(wj), spec.cell_y(wi),
                           elevation.at(wi, wj));
      double a, b, c;
      if (fit_plane(pts, a, b, c)) {
        // Tilt of the unit normal (-a, -b, 1)/|.|: acos(|n_z|) = atan(|grad|).
        flat.at(i, j) = std::atan(std::sqrt(a * a + b * b));
      } else {
        flat.at(i, j) = 0.0;
      }
    }
  }
  return flat;
}

GridMap step_height_map(const GridMap& elevation, const Footprint& footprint,
                        double robot_z) {
  const GridSpec& spec = elevation.spec;
  footprint.validate(spec.resolution);
  const int r = footprint.cell_radius(spec.resolution);
  GridMap step(spec, GridLayer::Step);
  for (int i = 0; i < spec.rows(); ++i) {
    for (int j = 0; j < spec.cols(); ++j) {
      const int i_lo = std::max(0, i - r), i_hi = std::min(spec.rows() - 1, i + r);
      const int j_lo = std::max(0, j - r), j_hi = std::min(spec.cols() - 1, j + r);
      double max_rise = 0.0;
      for (int wi = i_lo; wi <= i_hi; ++wi)
        for (int wj = j_lo; wj <= j_hi; ++wj)
          max_rise = std::max(max_rise, elevation.at(wi, wj) - robot_z);
      step.at(i, j) = max_rise;
    }
  }
  return step;
}

GridMap combine(const GridMap& slope, const GridMap& flatness,
                const GridMap& step, const TraversabilityParams& params) {
  params.validate();
  if (slope.spec != flatness.spec || slope.spec != step.spec)
    throw std::invalid_argument("combine: grid specs differ");
  const auto clamp01 = [](double v) { return std::max(0.0, std::min(1.0, v)); };
  GridMap tau(slope.spec, GridLayer::Traversability);
  for (int i = 0; i < slope.spec.rows(); ++i)
    for (int j = 0; j < slope.spec.cols(); ++j)
      tau.at(i, j) = params.w_slope * clamp01(slope.at(i, j) / params.s_crit) +
                     params.w_flatness * clamp01(flatness.at(i, j) / params.f_crit) +
                     params.w_step * clamp01(step.at(i, j) / params.zeta_crit);
  return tau;
}

GridMap apply_mask(const GridMap& traversability, const GridMap& variance,
                   double sigma_crit) {
  if (traversability.spec != variance.spec)
    throw std::invalid_argument("apply_mask: grid specs differ");
  GridMap out = traversability;
  out.layer = GridLayer::Traversability;
  for (int i = 0; i < out.spec.rows(); ++i)
    for (int j = 0; j < out.spec.cols(); ++j)
      if (variance.at(i, j) > sigma_crit) out.at(i, j) = 1.0;
  return out;
}

}  // namespace terranav
