#include "mastlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mastlab/cladogram.hpp"
#include "mastlab/error.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/randkit.hpp"
#include "mastlab/stats.hpp"

namespace mastlab {

// ---------------------------------------------------------------- correspondences

Correspondence::Correspondence(std::shared_ptr<const CascadeView> source,
                               std::shared_ptr<const CascadeView> image)
    : source_(std::move(source)), image_(std::move(image)) {
  if (!source_ || !image_) throw DomainError("Correspondence: null cascade");
  if (!(image_->root_mass() <= 1.0 + 1e-12) || !(image_->root_mass() > 0.0)) {
    throw DomainError("Correspondence: image root mass must lie in (0, 1]");
  }
}

std::optional<std::size_t> Correspondence::max_depth() const {
  const auto a = source_->max_depth(), b = image_->max_depth();
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

Correspondence identity_correspondence(std::shared_ptr<const CascadeView> c) {
  return Correspondence(c, c);
}

Split perturb_split(const Split& p, double shift, double alpha) {
  if (std::min({p[0], p[1], p[2]}) < alpha) return p;
  const auto top = static_cast<std::size_t>(
      std::max_element(p.begin(), p.end()) - p.begin());
  const double rest = 1.0 - p[top];
  Split q = p;
  for (std::size_t a = 0; a < 3; ++a) {
    q[a] = a == top ? p[a] - shift : p[a] + shift * (p[a] / rest);
  }
  return q;
}

PerturbedCascade::PerturbedCascade(std::shared_ptr<const CascadeView> source,
                                   double shift, double alpha)
    : source_(std::move(source)), shift_(shift), alpha_(alpha) {
  if (!source_) throw DomainError("PerturbedCascade: null source");
  // The largest ratio is at least 1/3, so it stays positive.
  if (!(shift > 0.0) || !(shift < 1.0 / 3.0)) {
    throw DomainError("PerturbedCascade: shift must lie in (0, 1/3)");
  }
  if (!(alpha > 0.0)) throw DomainError("PerturbedCascade: alpha must be positive");
}

Split PerturbedCascade::ratios(const TernaryWord& parent) const {
  return perturb_split(source_->ratios(parent), shift_, alpha_);
}

// ---------------------------------------------------------------- audits

namespace {

void check_depth(const Correspondence& corr, const TernaryWord& path) {
  if (auto d = corr.max_depth(); d && path.depth() > *d) {
    throw DomainError("audit: path deeper than the correspondence");
  }
}

ScaleFlags flags_at(const Split& p, const Split& q, const TernaryWord& path,
                    std::size_t j, double alpha, double delta) {
  ScaleFlags f;
  const bool floor = std::min({p[0], p[1], p[2]}) >= alpha;
  for (std::size_t a = 0; a < 3; ++a) {
    f.deviation = std::max(f.deviation, std::abs(p[a] - q[a]));
  }
  f.good = floor && j % 2 == 1 && j < path.depth() && path[j - 1] == 3 &&
           path[j] == 3;
  f.weak = floor && f.deviation >= delta;
  f.strict = f.good && f.deviation > delta;
  return f;
}

}  // namespace

std::vector<ScaleFlags> detect_mismatches(const Correspondence& corr,
                                          const TernaryWord& path,
                                          double alpha, double delta) {
  check_depth(corr, path);
  std::vector<ScaleFlags> out;
  out.reserve(path.depth());
  TernaryWord w;
  for (std::size_t j = 0; j < path.depth(); ++j) {
    out.push_back(flags_at(corr.source().ratios(w), corr.image().ratios(w),
                           path, j, alpha, delta));
    w.push_back(path[j]);
  }
  return out;
}

AuditReport martingale_path(const Correspondence& corr, const TernaryWord& path,
                            double alpha, double delta, double mu) {
  check_depth(corr, path);
  AuditReport r;
  const std::size_t k = path.depth();
  r.scales.reserve(k);
  r.martingale.reserve(k + 1);
  r.log_increments.reserve(k);
  r.penalized.reserve(k);
  double log_m = std::log(corr.image().root_mass()) -
                 std::log(corr.source().root_mass());
  r.martingale.push_back(std::exp(log_m));
  TernaryWord w;
  for (std::size_t j = 0; j < k; ++j) {
    const Split p = corr.source().ratios(w);
    const Split q = corr.image().ratios(w);
    const auto flags = flags_at(p, q, path, j, alpha, delta);
    const auto a = static_cast<std::size_t>(path[j] - 1);
    if (!(p[a] > 0.0) || !(q[a] > 0.0)) {
      throw DomainError("martingale_path: zero mass on the path");
    }
    const double z = std::log(q[a]) - std::log(p[a]);
    log_m += z;
    r.scales.push_back(flags);
    r.log_increments.push_back(z);
    r.penalized.push_back(z + (flags.weak ? mu : 0.0));
    r.martingale.push_back(std::exp(log_m));
    w.push_back(path[j]);
  }
  return r;
}

double mismatch_kernel(const Split& p, const Split& q, double mu) {
  double sp = 0.0, sq = 0.0, acc = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(p[a] > 0.0)) throw DomainError("mismatch_kernel: p must be positive");
    if (!(q[a] >= 0.0)) throw DomainError("mismatch_kernel: q must be non-negative");
    sp += p[a];
    sq += q[a];
    acc += std::sqrt(p[a] * q[a]);
  }
  if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12) {
    throw DomainError("mismatch_kernel: points must lie on the simplex");
  }
  if (!(mu >= 0.0)) throw DomainError("mismatch_kernel: mu must be >= 0");
  return std::exp(mu / 2.0) * acc;
}

std::vector<double> sqrt_product_sums(const Correspondence& corr, std::size_t k) {
  if (k > MassCascade::kMaxDepth) {
    throw DomainError("sqrt_product_sum: depth exceeds " +
                      std::to_string(MassCascade::kMaxDepth));
  }
  if (auto d = corr.max_depth(); d && k > *d) {
    throw DomainError("sqrt_product_sum: deeper than the correspondence");
  }
  std::vector<double> sums(k + 1, 0.0);
  struct Frame {
    TernaryWord word;
    double source;
    double image;
  };
  std::vector<Frame> stack{{TernaryWord(), corr.source().root_mass(),
                            corr.image().root_mass()}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    sums[f.word.depth()] += std::sqrt(f.source * f.image);
    if (f.word.depth() == k) continue;
    const Split p = corr.source().ratios(f.word);
    const Split q = corr.image().ratios(f.word);
    for (int a = 3; a >= 1; --a) {
      const auto i = static_cast<std::size_t>(a - 1);
      stack.push_back({f.word.child(a), f.source * p[i], f.image * q[i]});
    }
  }
  return sums;
}

double sqrt_product_sum(const Correspondence& corr, std::size_t k) {
  return sqrt_product_sums(corr, k).back();
}

double admissible_mu(double delta) {
  return -2.0 * std::log1p(-delta * delta / 8.0);
}

ChernoffResult chernoff_supermartingale_check(const Correspondence& corr,
                                              std::size_t paths, std::size_t k,
                                              double mu, double delta,
                                              double alpha, const Rng& rng) {
  ChernoffResult out;
  out.in_regime = mu <= admissible_mu(delta);
  RunningStats stats;
  for (std::size_t i = 0; i < paths; ++i) {
    Rng sub = rng.substream(i);
    const auto path = sample_size_biased_path(corr.source(), k, sub);
    const auto rep = martingale_path(corr, path, alpha, delta, mu);
    double s = 0.0;
    for (double z : rep.penalized) s += z;
    for (const auto& f : rep.scales) out.weak_scales += f.weak;
    stats.add(std::exp(s / 2.0));
  }
  out.paths = paths;
  out.mean = stats.mean();
  out.standard_error = stats.standard_error();
  return out;
}

// ---------------------------------------------------------------- bounds

double log_exchangeable_tail_bound(int m, int s) {
  if (s < 1 || s > m) throw DomainError("exchangeable_tail_bound: need 1 <= s <= m");
  const double md = m, sd = s;
  return std::lgamma(md + 1) - std::lgamma(sd + 1) - std::lgamma(md - sd + 1) +
         (sd - 2) * std::numbers::ln2 + std::log(sd) - std::lgamma(sd + 1);
}

double exchangeable_tail_bound(int m, int s) {
  return std::exp(log_exchangeable_tail_bound(m, s));
}

std::vector<double> exchangeable_tail_experiment(int m, std::size_t replicates,
                                                 const Rng& rng, bool identical) {
  if (m < 2) throw DomainError("exchangeable_tail_experiment: m must be >= 2");
  std::vector<std::size_t> at_least(static_cast<std::size_t>(m) + 1, 0);
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng sub = rng.substream(r);
    const Cladogram a = sample_uniform(m, sub);
    const std::size_t size =
        identical ? static_cast<std::size_t>(m) : mast(a, sample_uniform(m, sub)).size;
    for (std::size_t s = 0; s <= size; ++s) ++at_least[s];
  }
  std::vector<double> freq(at_least.size());
  for (std::size_t s = 0; s < freq.size(); ++s) {
    freq[s] = replicates ? static_cast<double>(at_least[s]) / replicates : 0.0;
  }
  return freq;
}

double intersection_threshold(std::size_t n, std::size_t m, std::size_t m2,
                              double epsilon) {
  const double nd = static_cast<double>(n);
  return 8.0 * std::max(std::pow(nd, epsilon),
                        static_cast<double>(m) * static_cast<double>(m2) / nd);
}

TailEstimate intersection_tail_experiment(std::size_t n, std::size_t m,
                                          std::size_t m2, double epsilon,
                                          std::size_t replicates, const Rng& rng,
                                          double threshold_override) {
  if (m > n || m2 > n) throw DomainError("intersection_tail_experiment: m, m2 <= n");
  const double threshold = threshold_override >= 0.0
                               ? threshold_override
                               : intersection_threshold(n, m, m2, epsilon);
  std::vector<std::uint32_t> perm(n), stamp(n, 0);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng sub = rng.substream(r);
    const auto tag = static_cast<std::uint32_t>(r + 1);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(perm[i], perm[i + sub.below(n - i)]);
      stamp[perm[i]] = tag;
    }
    std::iota(perm.begin(), perm.end(), 0u);
    std::size_t common = 0;
    for (std::size_t i = 0; i < m2; ++i) {
      std::swap(perm[i], perm[i + sub.below(n - i)]);
      common += stamp[perm[i]] == tag;
    }
    hits += static_cast<double>(common) >= threshold;
  }
  TailEstimate t;
  t.replicates = replicates;
  t.frequency = replicates ? static_cast<double>(hits) / replicates : 0.0;
  t.standard_error =
      replicates ? std::sqrt(t.frequency * (1 - t.frequency) / replicates) : 0.0;
  t.bound = 2.0 * std::exp(-2.0 * std::pow(static_cast<double>(n), epsilon) / 3.0);
  return t;
}

double refined_sqrt_coefficient() { return 4.0 * std::numbers::e * std::numbers::sqrt2; }

namespace {

Region random_region(const Cladogram& t, Rng& rng) {
  std::vector<NodeId> inner;
  for (NodeId v = 0; v < static_cast<NodeId>(t.node_count()); ++v) {
    if (t.degree(v) == 3) inner.push_back(v);
  }
  std::vector<NodeId> boundary;
  const auto want = std::min<std::size_t>(rng.below(3), inner.size());
  while (boundary.size() < want) {
    const NodeId v = inner[rng.below(inner.size())];
    if (std::find(boundary.begin(), boundary.end(), v) == boundary.end()) {
      boundary.push_back(v);
    }
  }
  auto parts = regions_around(t, boundary);
  return std::move(parts[rng.below(parts.size())]);
}

}  // namespace

RegionBoundResult refined_sqrt_bound_experiment(int n, double epsilon,
                                                std::size_t replicates,
                                                std::size_t pairs_per_tree,
                                                const Rng& rng,
                                                bool identical_trees,
                                                double coefficient) {
  if (n < 3 || n > 512) {
    throw DomainError("refined_sqrt_bound_experiment: n must lie in [3, 512]");
  }
  const double coef = coefficient > 0.0 ? coefficient : refined_sqrt_coefficient();
  const double nd = n;
  const double floor = std::pow(nd, epsilon);
  RegionBoundResult out;
  std::size_t violating = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng sub = rng.substream(r);
    const Cladogram a = sample_uniform(n, sub);
    const Cladogram b = identical_trees ? a : sample_uniform(n, sub);
    bool bad = false;
    for (std::size_t q = 0; q < pairs_per_tree; ++q) {
      const Region ra = q == 0 ? whole_region(a) : random_region(a, sub);
      const Region rb = q == 0 ? whole_region(b) : random_region(b, sub);
      const auto size = mast_regions(ra, rb).size;
      const double bound =
          coef * std::max(floor, std::sqrt(static_cast<double>(ra.size()) *
                                           static_cast<double>(rb.size()) / nd));
      out.max_mast = std::max(out.max_mast, size);
      bad |= static_cast<double>(size) > bound;
      ++out.checked_pairs;
    }
    violating += bad;
  }
  out.trees = replicates;
  out.violating_fraction =
      replicates ? static_cast<double>(violating) / replicates : 0.0;
  return out;
}

}  // namespace mastlab
