#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mastlab/cascade.hpp"
#include "mastlab/rng.hpp"

namespace mastlab {

// Mass-level image of a homeomorphism: |Ψ(R[i])| for every word i, given as
// a second cascade read at the same words as the source.
class Correspondence {
 public:
  Correspondence(std::shared_ptr<const CascadeView> source,
                 std::shared_ptr<const CascadeView> image);

  const CascadeView& source() const noexcept { return *source_; }
  const CascadeView& image() const noexcept { return *image_; }
  // Deepest word both sides define; nullopt when both are unbounded.
  std::optional<std::size_t> max_depth() const;

 private:
  std::shared_ptr<const CascadeView> source_;
  std::shared_ptr<const CascadeView> image_;
};

Correspondence identity_correspondence(std::shared_ptr<const CascadeView> c);

// Image splits equal the source splits except where every source ratio is
// >= alpha: there the largest ratio moves down by `shift` and the other two
// absorb it in proportion to their size. This is the cheapest way, in
// sum sqrt(p q), to create a deviation of size `shift`.
class PerturbedCascade final : public CascadeView {
 public:
  PerturbedCascade(std::shared_ptr<const CascadeView> source, double shift,
                   double alpha);
  std::optional<std::size_t> max_depth() const override {
    return source_->max_depth();
  }
  double root_mass() const override { return source_->root_mass(); }
  Split ratios(const TernaryWord& parent) const override;

 private:
  std::shared_ptr<const CascadeView> source_;
  double shift_;
  double alpha_;
};

Split perturb_split(const Split& p, double shift, double alpha);

// Flags of the split of R[i_j] (the region at depth j on the path) into
// its three children, j = 0..k-1.
struct ScaleFlags {
  bool good = false;    // j odd, i_j = i_{j+1} = 3, min source ratio >= alpha
  bool weak = false;    // min source ratio >= alpha, max deviation >= delta
  bool strict = false;  // good and max deviation > delta
  double deviation = 0; // max_a |p_a - q_a|
};

std::vector<ScaleFlags> detect_mismatches(const Correspondence& corr,
                                          const TernaryWord& path,
                                          double alpha, double delta);

struct AuditReport {
  std::vector<ScaleFlags> scales;     // j = 0..k-1
  std::vector<double> martingale;     // M_0..M_k
  std::vector<double> log_increments; // Z_1..Z_k
  std::vector<double> penalized;      // Z̃_j = Z_j + mu 1{weak at j-1}
};

AuditReport martingale_path(const Correspondence& corr, const TernaryWord& path,
                            double alpha, double delta, double mu);

// e^{mu/2} sum_i sqrt(p_i q_i): E[exp((Z + mu)/2)] for Z = log(q_I / p_I)
// and P(I = i) = p_i.
double mismatch_kernel(const Split& p, const Split& q, double mu);

// Sum over depth-k words of sqrt(|R[i]| |Ψ(R[i])|). k <= 14.
double sqrt_product_sum(const Correspondence& corr, std::size_t k);
// All depths 0..k in one traversal.
std::vector<double> sqrt_product_sums(const Correspondence& corr, std::size_t k);

// Largest mu with e^{mu/2}(1 - delta^2/8) <= 1.
double admissible_mu(double delta);

struct ChernoffResult {
  double mean = 0;            // of exp(sum_j Z̃_j / 2)
  double standard_error = 0;
  std::size_t paths = 0;
  std::size_t weak_scales = 0;  // total over all paths
  bool in_regime = true;        // mu <= admissible_mu(delta)
};

// `paths` size-biased descents of depth k through the source; path p draws
// from rng.substream(p).
ChernoffResult chernoff_supermartingale_check(const Correspondence& corr,
                                              std::size_t paths, std::size_t k,
                                              double mu, double delta,
                                              double alpha, const Rng& rng);

// C(m,s) 2^{s-2} s / s!, and its natural log. 1 <= s <= m.
double exchangeable_tail_bound(int m, int s);
double log_exchangeable_tail_bound(int m, int s);

// Empirical P(MAST(S_m, S'_m) >= s) for s = 0..m over independent uniform
// pairs (or S' = S when `identical`). Replicate r draws from rng.substream(r).
std::vector<double> exchangeable_tail_experiment(int m, std::size_t replicates,
                                                 const Rng& rng,
                                                 bool identical = false);

// Frequency of #(S ∩ S') >= 8 (n^eps ∨ m m2 / n) for independent uniform
// subsets of sizes m and m2, against the bound 2 exp(-2 n^eps / 3). A
// non-negative `threshold_override` replaces the threshold.
struct TailEstimate {
  double frequency = 0;
  double standard_error = 0;
  double bound = 0;
  std::size_t replicates = 0;
};

double intersection_threshold(std::size_t n, std::size_t m, std::size_t m2,
                              double epsilon);
TailEstimate intersection_tail_experiment(std::size_t n, std::size_t m,
                                          std::size_t m2, double epsilon,
                                          std::size_t replicates, const Rng& rng,
                                          double threshold_override = -1.0);

// Per tree pair, checks MAST(R, R') <= coefficient (n^eps ∨ sqrt(#R #R'/n))
// over `pairs_per_tree` random region pairs (the whole-tree pair always
// included). coefficient defaults to 4e sqrt 2.
struct RegionBoundResult {
  double violating_fraction = 0;
  std::size_t trees = 0;
  std::size_t checked_pairs = 0;
  std::size_t max_mast = 0;
};

double refined_sqrt_coefficient();
RegionBoundResult refined_sqrt_bound_experiment(int n, double epsilon,
                                                std::size_t replicates,
                                                std::size_t pairs_per_tree,
                                                const Rng& rng,
                                                bool identical_trees = false,
                                                double coefficient = -1.0);

}  // namespace mastlab
