#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mastlab/rng.hpp"

namespace mastlab {

// Standard normal variate (Marsaglia polar method, spare discarded).
double standard_normal(Rng& rng);

// Normal variates with the polar method's spare value cached. Use this in
// hot loops; it holds a reference to the stream it draws from.
class NormalStream {
 public:
  explicit NormalStream(Rng& rng) : rng_(rng) {}
  double operator()();

 private:
  Rng& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// log of a Gamma(shape, 1) variate. Marsaglia-Tsang squeeze/rejection for
// shape >= 1; shape < 1 uses Gamma(shape + 1) * U^(1/shape), kept in log
// space so tiny shapes cannot underflow to zero.
double log_gamma_variate(double shape, Rng& rng);
double gamma_variate(double shape, Rng& rng);
double beta_variate(double a, double b, Rng& rng);

// A point of the simplex drawn from Dir(params), together with its
// parameters. Weights are strictly positive and sum to 1 within 1e-12.
class DirichletVector {
 public:
  DirichletVector(std::vector<double> weights, std::vector<double> params);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> params() const noexcept { return params_; }

 private:
  std::vector<double> weights_;
  std::vector<double> params_;
};

// Normalized independent Gamma(a_i) variates. Throws DomainError on an empty
// or non-positive parameter list.
DirichletVector sample_dirichlet(std::span<const double> params, Rng& rng);

// Dir(1/2, 1/2, 1/2), the split law of the recursive decomposition. Same
// algorithm as sample_dirichlet without the allocations.
std::array<double, 3> sample_dirichlet_half3(Rng& rng);

// Aggregation of the first `split` coordinates: W_1 + ... + W_split and the
// two renormalized blocks. 1 <= split <= d - 1.
struct Aggregation {
  double head_sum;
  DirichletVector head;
  DirichletVector tail;
};
Aggregation aggregate(const DirichletVector& w, std::size_t split);

// Index i drawn with probability weights[i] (0-based). Weights need not be
// strictly positive but must be non-negative with positive sum.
std::size_t size_biased_index(std::span<const double> weights, Rng& rng);
inline std::size_t size_biased_index(const DirichletVector& w, Rng& rng) {
  return size_biased_index(w.weights(), rng);
}

}  // namespace mastlab
