#include "mastlab/randkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mastlab/error.hpp"

namespace mastlab {

namespace {

// One draw of the polar method: returns the pair (x, y) of independent
// standard normals.
std::pair<double, double> polar_pair(Rng& rng) {
  for (;;) {
    double u = 2.0 * rng.uniform() - 1.0;
    double v = 2.0 * rng.uniform() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      double f = std::sqrt(-2.0 * std::log(s) / s);
      return {u * f, v * f};
    }
  }
}

// Marsaglia-Tsang for shape >= 1, returns log of the variate.
double log_gamma_mt(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

double log_sum_exp(std::span<const double> xs) {
  const double top = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc);
}

}  // namespace

double standard_normal(Rng& rng) { return polar_pair(rng).first; }

double NormalStream::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  auto [x, y] = polar_pair(rng_);
  spare_ = y;
  has_spare_ = true;
  return x;
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be positive and finite, got " +
                      std::to_string(shape));
  }
  if (shape >= 1.0) return log_gamma_mt(shape, rng);
  const double boosted = log_gamma_mt(shape + 1.0, rng);
  return boosted + std::log(rng.uniform_open()) / shape;
}

double gamma_variate(double shape, Rng& rng) {
  return std::exp(log_gamma_variate(shape, rng));
}

double beta_variate(double a, double b, Rng& rng) {
  const double la = log_gamma_variate(a, rng);
  const double lb = log_gamma_variate(b, rng);
  // a / (a + b) in log space: 1 / (1 + exp(lb - la)).
  return 1.0 / (1.0 + std::exp(lb - la));
}

DirichletVector::DirichletVector(std::vector<double> weights,
                                 std::vector<double> params)
    : weights_(std::move(weights)), params_(std::move(params)) {
  if (weights_.empty() || weights_.size() != params_.size()) {
    throw DomainError("DirichletVector: weights and params must be non-empty "
                      "and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(params_[i] > 0.0)) {
      throw DomainError("DirichletVector: parameters must be positive");
    }
    if (!(weights_[i] > 0.0)) {
      throw DomainError("DirichletVector: weights must be positive");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("DirichletVector: weights must sum to 1");
  }
}

DirichletVector sample_dirichlet(std::span<const double> params, Rng& rng) {
  if (params.empty()) throw DomainError("sample_dirichlet: empty parameters");
  for (double a : params) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("sample_dirichlet: parameters must be positive");
    }
  }
  std::vector<double> logs(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    logs[i] = log_gamma_variate(params[i], rng);
  }
  const double lse = log_sum_exp(logs);
  std::vector<double> w(params.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    // A weight below the smallest normal double has probability far below
    // anything observable; clamp so the positivity invariant stays exact.
    w[i] = std::max(std::exp(logs[i] - lse),
                    std::numeric_limits<double>::min());
  }
  return DirichletVector(std::move(w),
                         std::vector<double>(params.begin(), params.end()));
}

std::array<double, 3> sample_dirichlet_half3(Rng& rng) {
  std::array<double, 3> logs{};
  for (auto& l : logs) l = log_gamma_variate(0.5, rng);
  const double lse = log_sum_exp(logs);
  std::array<double, 3> w{};
  for (std::size_t i = 0; i < 3; ++i) {
    w[i] = std::max(std::exp(logs[i] - lse),
                    std::numeric_limits<double>::min());
  }
  return w;
}

Aggregation aggregate(const DirichletVector& w, std::size_t split) {
  const std::size_t d = w.size();
  if (split < 1 || split + 1 > d) {
    throw DomainError("aggregate: split index must lie in [1, d-1]");
  }
  auto ws = w.weights();
  auto ps = w.params();
  const double head = std::accumulate(ws.begin(), ws.begin() + split, 0.0);
  const double tail = std::accumulate(ws.begin() + split, ws.end(), 0.0);
  std::vector<double> hw(ws.begin(), ws.begin() + split);
  std::vector<double> tw(ws.begin() + split, ws.end());
  for (double& x : hw) x /= head;
  for (double& x : tw) x /= tail;
  return Aggregation{
      head,
      DirichletVector(std::move(hw), {ps.begin(), ps.begin() + split}),
      DirichletVector(std::move(tw), {ps.begin() + split, ps.end()})};
}

std::size_t size_biased_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double x : weights) {
    if (x < 0.0) throw DomainError("size_biased_index: negative weight");
    total += x;
  }
  if (!(total > 0.0)) throw DomainError("size_biased_index: zero total");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace mastlab
