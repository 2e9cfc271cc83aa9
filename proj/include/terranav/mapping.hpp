#pragma once

#include <limits>
#include <utility>

#include "terranav/grid.hpp"
#include "terranav/sgp.hpp"

namespace terranav {

struct TraversabilityParams {
  double w_slope = 0.4;      // omega_1
  double w_flatness = 0.3;   // omega_2
  double w_step = 0.3;       // omega_3
  double s_crit = 0.45;      // rad
  double f_crit = 0.45;      // rad
  double zeta_crit = 0.15;   // m
  double sigma_crit = 0.3;   // m^2; +inf disables the mask
  double tau_crit = 0.6;

  void validate() const;
};

struct Footprint {
  double half_extent = 0.4;  // m; square side is 2*half_extent

  // Cell window radius for a given grid resolution.
  int cell_radius(double resolution) const;
  void validate(double resolution) const;
};

// Queries the model at every cell center of the robot-centered grid.
// Returns the elevation (posterior mean) and variance layers.
std::pair<GridMap, GridMap> rasterize(const SgpElevationModel& model,
                                      const GridSpec& spec);

// Inclination angle of the predicted surface: atan(|grad mu|) per cell.
GridMap slope_map(const SgpElevationModel& model, const GridSpec& spec);

// Tilt angle acos(|n_z|) of the least-squares plane over the footprint
// window around each cell. Border windows are clipped, never below 3x3.
GridMap flatness_map(const GridMap& elevation, const Footprint& footprint);

// Window max of (elevation - robot_z), floored at 0.
GridMap step_height_map(const GridMap& elevation, const Footprint& footprint,
                        double robot_z);

// Weighted combination of the threshold-normalized layers; each ratio is
// clamped to [0,1] before weighting, so the result stays in [0,1].
GridMap combine(const GridMap& slope, const GridMap& flatness,
                const GridMap& step, const TraversabilityParams& params);

// Cells with variance strictly above sigma_crit are forced to 1.
GridMap apply_mask(const GridMap& traversability, const GridMap& variance,
                   double sigma_crit);

}  // namespace terranav
