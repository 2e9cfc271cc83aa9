#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "terranav/geometry.hpp"

namespace terranav {

// Squared-exponential (RBF) kernel.
struct RbfKernel {
  double signal_variance = 1.0;  // sigma_se^2 [m^2]
  double length_scale = 0.5;     // l_se [m]

  void validate() const;
};

double kernel_eval(const RbfKernel& k, const Vec2& p, const Vec2& q);

struct TrainingSet {
  std::vector<Vec2> inputs;
  std::vector<double> targets;

  std::size_t size() const { return inputs.size(); }
  void validate() const;
};

enum class InducingStrategy { GridStride, UniformRandom };

// Deterministic inducing-input selection.
//   GridStride: bucket the inputs into a ceil(sqrt(m))^2 grid over the data
//     bounding box, take the point nearest each nonempty bucket center
//     (row-major bucket order, ties by lowest index) until m are chosen;
//     any shortfall is filled by seeded sampling without replacement.
//   UniformRandom: seeded sampling without replacement.
// m == n returns the inputs unchanged (order preserving).
std::vector<Vec2> select_inducing(const TrainingSet& data, std::size_t m,
                                  InducingStrategy strategy,
                                  std::uint64_t seed = 0);

struct Prediction {
  double mean = 0.0;      // m
  double variance = 0.0;  // m^2, >= 0
};

// Subset-of-data sparse GP: an exact GP posterior over the inducing inputs.
// Immutable after fit(); predict/predict_gradient are const and thread-safe.
class SgpElevationModel {
 public:
  // Precomputes chol(K_mm + noise*I) and the weight vector over the inducing
  // subset. Targets are centered on the mean of *all* targets (prior mean).
  // Escalating jitter (1e-10, x10, up to 1e-4) is added if the factorization
  // fails; throws NumericalError carrying the final jitter past that.
  static SgpElevationModel fit(const TrainingSet& data, const RbfKernel& kernel,
                               double noise_variance,
                               const std::vector<Vec2>& inducing);

  Prediction predict(const Vec2& query) const;

  // Gradient of the predictive mean: sum_i w_i * k(q, x_i) * (x_i - q) / l^2.
  Vec2 predict_gradient(const Vec2& query) const;

  const RbfKernel& kernel() const { return kernel_; }
  double noise_variance() const { return noise_variance_; }
  double prior_mean() const { return prior_mean_; }
  const std::vector<Vec2>& inducing_inputs() const { return inducing_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& cov_factor() const { return chol_lower_; }

 private:
  RbfKernel kernel_;
  double noise_variance_ = 0.0;
  double prior_mean_ = 0.0;
  std::vector<Vec2> inducing_;
  Eigen::VectorXd weights_;      // (K_mm + noise I)^-1 (z_m - prior_mean)
  Eigen::MatrixXd chol_lower_;   // L with L L^T = K_mm + noise I (+ jitter)
};

}  // namespace terranav
