#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mastlab {

// Welford accumulator.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const;  // unbiased; 0 for fewer than two samples
  double stddev() const;
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// sup_x |F_n(x) - cdf(x)|. `samples` need not be sorted.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

// sup_x |F_n(x) - G_m(x)| between two empirical distributions.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

// Pearson statistic sum (O - E)^2 / E for equiprobable cells.
double chi_square_uniform(std::span<const std::size_t> counts);

// Empirical quantile with linear interpolation (type 7).
double quantile(std::vector<double> values, double q);

struct LinearFit {
  double slope;
  double intercept;
};
// Ordinary least squares y = slope * x + intercept.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace mastlab
