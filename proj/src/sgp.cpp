#include "terranav/sgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "terranav/errors.hpp"
#include "terranav/rng.hpp"

namespace terranav {

void RbfKernel::validate() const {
  if (!(signal_variance > 0.0))
    throw std::invalid_argument("kernel: signal_variance must be > 0");
  if (!(length_scale > 0.0))
    throw std::invalid_argument("kernel: length_scale must be > 0");
}

void TrainingSet::validate() const {
  if (inputs.size() != targets.size())
    throw std::invalid_argument("training set: inputs/targets size mismatch");
  if (inputs.empty())
    throw std::invalid_argument("training set: needs at least one point");
}

double kernel_eval(const RbfKernel& k, const Vec2& p, const Vec2& q) {
  const double d2 = (p - q).squaredNorm();
  return k.signal_variance *
         std::exp(-d2 / (2.0 * k.length_scale * k.length_scale));
}

namespace {

// Partial Fisher-Yates over the index list; first m entries are the sample.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool,
                                                    std::size_t m,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < m && i + 1 < pool.size(); ++i) {
    const std::size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace

std::vector<Vec2> select_inducing(const TrainingSet& data, std::size_t m,
                                  InducingStrategy strategy,
                                  std::uint64_t seed) {
  data.validate();
  const std::size_t n = data.size();
  if (m < 1 || m > n)
    throw std::invalid_argument("select_inducing: need 1 <= m <= n");
  if (m == n) return data.inputs;

  if (strategy == InducingStrategy::UniformRandom) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    const auto chosen = sample_without_replacement(std::move(pool), m, seed);
    std::vector<Vec2> out;
    out.reserve(m);
    for (const auto i : chosen) out.push_back(data.inputs[i]);
    return out;
  }

  // GridStride.
  double min_x = data.inputs[0].x(), max_x = min_x;
  double min_y = data.inputs[0].y(), max_y = min_y;
  for (const auto& p : data.inputs) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  const std::size_t g =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  const double bw_x = (max_x - min_x) / static_cast<double>(g);
  const double bw_y = (max_y - min_y) / static_cast<double>(g);

  const auto bucket_of = [&](const Vec2& p) -> std::size_t {
    std::size_t bx = 0, by = 0;
    if (bw_x > 0.0)
      bx = std::min(g - 1, static_cast<std::size_t>((p.x() - min_x) / bw_x));
    if (bw_y > 0.0)
      by = std::min(g - 1, static_cast<std::size_t>((p.y() - min_y) / bw_y));
    return by * g + bx;
  };

  // Nearest-to-center representative per bucket, ties by lowest index.
  std::vector<std::ptrdiff_t> rep(g * g, -1);
  std::vector<double> rep_d2(g * g, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = bucket_of(data.inputs[i]);
    const Vec2 center(min_x + (static_cast<double>(b % g) + 0.5) * bw_x,
                      min_y + (static_cast<double>(b / g) + 0.5) * bw_y);
    const double d2 = (data.inputs[i] - center).squaredNorm();
    if (d2 < rep_d2[b]) {
      rep_d2[b] = d2;
      rep[b] = static_cast<std::ptrdiff_t>(i);
    }
  }

  std::vector<char> taken(n, 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(m);
  for (std::size_t b = 0; b < g * g && chosen.size() < m; ++b) {
    if (rep[b] >= 0) {
      chosen.push_back(static_cast<std::size_t>(rep[b]));
      taken[static_cast<std::size_t>(rep[b])] = 1;
    }
  }
  if (chosen.size() < m) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) pool.push_back(i);
    const auto fill = sample_without_replacement(std::move(pool),
                                                 m - chosen.size(), seed);
    chosen.insert(chosen.end(), fill.begin(), fill.end());
  }

  std::vector<Vec2> out;
  out.reserve(m);
  for (const auto i : chosen) out.push_back(data.inputs[i]);
  return out;
}

SgpElevationModel SgpElevationModel::fit(const TrainingSet& data,
                                         const RbfKernel& kernel,
                                         double noise_variance,
                                         const std::vector<Vec2>& inducing) {
  data.validate();
  kernel.validate();
  if (!(noise_variance > 0.0))
    throw std::invalid_argument("fit: noise_variance must be > 0");
  if (inducing.empty())
    throw std::invalid_argument("fit: inducing set must be nonempty");

  const std::size_t m = inducing.size();
  const std::size_t n = data.size();

  // Subset-of-data: each inducing input takes the target of its nearest
  // training input (exact copies when chosen by select_inducing).
  Eigen::VectorXd z(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double d2 = (data.inputs[j] - inducing[i]).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    z(i) = data.targets[best];
  }

  SgpElevationModel model;
  model.kernel_ = kernel;
  model.noise_variance_ = noise_variance;
  model.inducing_ = inducing;
  model.prior_mean_ =
      std::accumulate(data.targets.begin(), data.targets.end(), 0.0) /
      static_cast<double>(n);

  Eigen::MatrixXd gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = kernel_eval(kernel, inducing[i], inducing[j]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  gram.diagonal().array() += noise_variance;

  double jitter = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  while (llt.info() != Eigen::Success) {
    jitter = (jitter == 0.0) ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-4)
      throw NumericalError("fit: kernel matrix not positive definite", jitter);
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
  }
  model.chol_lower_ = llt.matrixL();

  const Eigen::VectorXd centered = z.array() - model.prior_mean_;
  model.weights_ = llt.solve(centered);
  return model;
}

Prediction SgpElevationModel::predict(const Vec2& query) const {
  const std::size_t m = inducing_.size();
  Eigen::VectorXd k_star(m);
  for (std::size_t i = 0; i < m; ++i)
    k_star(i) = kernel_eval(kernel_, query, inducing_[i]);

  Prediction out;
  out.mean = prior_mean_ + k_star.dot(weights_);

  const Eigen::VectorXd v =
      chol_lower_.triangularView<Eigen::Lower>().solve(k_star);
  // Round-off can push the subtraction slightly negative; clamp before the
  // noise floor is added back.
  const double reduced = std::max(0.0, kernel_.signal_variance - v.squaredNorm());
  out.variance = reduced + noise_variance_;
  return out;
}

Vec2 SgpElevationModel::predict_gradient(const Vec2& query) const {
  const double inv_l2 = 1.0 / (kernel_.length_scale * kernel_.length_scale);
  Vec2 grad = Vec2::Zero();
  for (std::size_t i = 0; i < inducing_.size(); ++i) {
    const double k = kernel_eval(kernel_, query, inducing_[i]);
    grad += weights_(static_cast<Eigen::Index>(i)) * k * (inducing_[i] - query) *
            inv_l2;
  }
  return grad;
}

}  // namespace terranav
