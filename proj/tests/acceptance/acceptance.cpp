// One line per acceptance criterion: "[PASS|FAIL] <n> <title>: <detail>".
// Exit status is the number of failing criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "mastlab/audit.hpp"
#include "mastlab/cascade.hpp"
#include "mastlab/cladogram.hpp"
#include "mastlab/constants.hpp"
#include "mastlab/excursion.hpp"
#include "mastlab/experiment.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/randkit.hpp"
#include "mastlab/rng.hpp"
#include "mastlab/stats.hpp"

using namespace mastlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome dp_matches_bruteforce() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0, wrong = 0;
  const auto b5 = enumerate_cladograms(5);
  for (const auto& a : b5) {
    for (const auto& b : b5) {
      ++pairs;
      wrong += mast(a, b).size != mast_bruteforce(a, b).size;
    }
  }
  const std::size_t exhaustive = pairs;
  Rng rng(0xC1);
  for (int i = 0; i < 1000; ++i) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const auto a = sample_uniform(n, rng);
    const auto b = sample_uniform(n, rng);
    const auto dp = mast(a, b);
    ++pairs;
    wrong += dp.size != mast_bruteforce(a, b).size ||
             !is_agreement_set(a, b, dp.witness);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {exhaustive == 225 && wrong == 0 && secs < 60.0,
          fmt("%zu exhaustive + %zu random pairs, %zu discrepancies, %.2f s",
              exhaustive, pairs - exhaustive, wrong, secs)};
}

// ---------------------------------------------------------------- 2

Outcome counting() {
  const std::array<long, 5> expected{1, 3, 15, 105, 945};
  bool ok = true;
  std::string detail;
  for (int n = 3; n <= 7; ++n) {
    const auto enumerated = enumerate_cladograms(n).size();
    const auto counted = count_cladograms(n);
    ok = ok && counted == enumerated &&
         counted == expected[static_cast<std::size_t>(n - 3)];
    detail += fmt("n=%d: %zu ", n, enumerated);
  }
  return {ok, detail + "(count_cladograms agrees)"};
}

// ---------------------------------------------------------------- 3

Outcome uniformity() {
  std::map<std::string, std::size_t> index;
  for (const auto& t : enumerate_cladograms(5)) {
    index.emplace(canonical_form(t), index.size());
  }
  std::vector<std::size_t> counts(index.size(), 0);
  Rng rng(0xC3);
  for (int i = 0; i < 15000; ++i) {
    ++counts[index.at(canonical_form(sample_uniform(5, rng)))];
  }
  const double stat = chi_square_uniform(counts);
  const double p = chi_square_sf(stat, static_cast<double>(counts.size() - 1));
  return {index.size() == 15 && p >= 0.001,
          fmt("chi2 = %.2f on %zu dof, p = %.4f", stat, counts.size() - 1, p)};
}

// ---------------------------------------------------------------- 4

Outcome decomposition_laws() {
  Rng rng(0xC4);
  const int n = 100000;
  std::array<std::size_t, 3> letters{0, 0, 0};
  RunningStats picked;
  std::vector<double> ratio;
  ratio.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto rec = zoom_trace(1, rng).records[0];
    ++letters[static_cast<std::size_t>(rec.letter - 1)];
    picked.add(rec.w[static_cast<std::size_t>(rec.letter - 1)]);
    ratio.push_back(rec.w[1] / (rec.w[1] + rec.w[2]));
  }
  double worst = 0;
  for (auto c : letters) worst = std::max(worst, std::abs(c / double(n) - 1.0 / 3.0));
  const double ks = ks_distance(ratio, [](double x) {
    return 2.0 / std::numbers::pi * std::asin(std::sqrt(std::clamp(x, 0.0, 1.0)));
  });
  const double mean_err = std::abs(picked.mean() - 0.6);
  return {worst <= 0.005 && mean_err <= 0.01 && ks < 0.01,
          fmt("max |P(I=i) - 1/3| = %.4f, E[W_I] = %.4f, arcsine KS = %.4f", worst,
              picked.mean(), ks)};
}

// ---------------------------------------------------------------- 5

Outcome sqrt_product_law() {
  constexpr std::size_t depth = 10, pairs = 1000;
  std::vector<RunningStats> sums(depth + 1);
  double identity_drift = 0;
  Rng rng(0xC5);
  for (std::size_t i = 0; i < pairs; ++i) {
    auto a = std::make_shared<MassCascade>(build_cascade(depth, rng));
    auto b = std::make_shared<MassCascade>(build_cascade(depth, rng));
    const auto s = sqrt_product_sums(Correspondence(a, b), depth);
    for (std::size_t k = 1; k <= depth; ++k) sums[k].add(s[k]);
    if (i < 20) {
      for (double v : sqrt_product_sums(identity_correspondence(a), depth)) {
        identity_drift = std::max(identity_drift, std::abs(v - 1.0));
      }
    }
  }
  double worst = 0;
  for (std::size_t k = 1; k <= depth; ++k) {
    const double law = std::pow(0.75, static_cast<double>(k));
    worst = std::max(worst, std::abs(sums[k].mean() / law - 1.0));
  }
  return {worst < 0.05 && identity_drift < 1e-12,
          fmt("max relative error vs (3/4)^k over k=1..10 = %.4f; identity drift %.1e",
              worst, identity_drift)};
}

// ---------------------------------------------------------------- 6

Outcome supermartingale() {
  constexpr double delta = 0.1, alpha = 0.05;
  constexpr std::size_t k = 50, paths = 10000;
  const double mu = delta * delta / 10.0;
  const Rng base(0xC6);
  auto src = std::make_shared<HashedCascade>(derive_seed(base.seed(), 1));
  auto other = std::make_shared<HashedCascade>(derive_seed(base.seed(), 2));
  auto near = std::make_shared<PerturbedCascade>(src, delta * (1 + 1e-6), alpha);

  const auto indep = chernoff_supermartingale_check(Correspondence(src, other), paths,
                                                    k, mu, delta, alpha, base.substream(1));
  const auto pert = chernoff_supermartingale_check(Correspondence(src, near), paths, k,
                                                   mu, delta, alpha, base.substream(2));
  // Ten times the largest admissible penalty.
  const double mu_bad = 10.0 * admissible_mu(delta);
  const auto ctrl = chernoff_supermartingale_check(Correspondence(src, near), paths, k,
                                                   mu_bad, delta, alpha, base.substream(2));
  const bool ok = indep.mean <= 1 + 3 * indep.standard_error &&
                  pert.mean <= 1 + 3 * pert.standard_error && pert.weak_scales > 0 &&
                  ctrl.mean - 3 * ctrl.standard_error > 1.0;
  return {ok, fmt("independent %.3g (se %.2g), perturbed %.4f (se %.2g, %zu weak scales); "
                  "control mu=%.4g gives %.4f (se %.2g)",
                  indep.mean, indep.standard_error, pert.mean, pert.standard_error,
                  pert.weak_scales, mu_bad, ctrl.mean, ctrl.standard_error)};
}

// ---------------------------------------------------------------- 7

Split uniform_simplex(Rng& rng) {
  const double a = -std::log(rng.uniform_open()), b = -std::log(rng.uniform_open()),
               c = -std::log(rng.uniform_open());
  const double s = a + b + c;
  return {a / s, b / s, c / s};
}

Outcome kernel_bound() {
  std::size_t checked = 0, violations = 0;
  double tightest = -1e300;
  Rng rng(0xC7);
  for (double delta : {0.05, 0.1, 0.3}) {
    for (double alpha : {0.01, 0.05}) {
      const double mu = delta * delta / 10.0;
      const double bound = std::exp(mu / 2) * (1 - delta * delta / 8);
      for (int i = 0; i < 100000;) {
        Split p = uniform_simplex(rng);
        if (*std::min_element(p.begin(), p.end()) < alpha) continue;
        Split q;
        if (i % 2 == 0) {
          // Random image split.
          q = uniform_simplex(rng);
        } else {
          // Image split on the deviation boundary in a random direction.
          const auto a = rng.below(3), b = (a + 1 + rng.below(2)) % 3;
          q = p;
          const double step = delta * (1 + 1e-9);
          if (q[b] < step) continue;
          q[a] += step;
          q[b] -= step;
        }
        double dev = 0;
        for (std::size_t j = 0; j < 3; ++j) dev = std::max(dev, std::abs(p[j] - q[j]));
        if (dev < delta) continue;
        const double kv = mismatch_kernel(p, q, mu);
        tightest = std::max(tightest, kv - bound);
        violations += kv > bound;
        ++checked;
        ++i;
      }
    }
  }
  return {violations == 0 && checked == 600000,
          fmt("%zu pairs, %zu violations, max(kernel - bound) = %.3g", checked,
              violations, tightest)};
}

// ---------------------------------------------------------------- 8

Outcome constants_ledger() {
  const auto l = evaluate_constants();
  std::size_t failed = 0;
  for (const auto& c : l.checks) failed += !c.pass;
  const double reference = std::log10(1.89e-166);
  const bool thr = std::abs(l.log10_delta_threshold - reference) < 0.01;
  const std::string em = format_log10(l.log10_eps_mast);
  const std::string eh = format_log10(l.log10_eps_holder);
  return {failed == 0 && thr && em == "10^-338" && eh == "10^-338",
          fmt("%zu/%zu inequalities hold; delta threshold log10 = %.4f (reference %.4f); "
              "eps = %s, %s",
              l.checks.size() - failed, l.checks.size(), l.log10_delta_threshold, reference,
              em.c_str(), eh.c_str())};
}

// ---------------------------------------------------------------- 9

Outcome coupling() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t samples = 2000, grid = 1u << 14;
  std::vector<double> glued(samples), single(samples);
  Rng rng(0xC9);
  for (std::size_t i = 0; i < samples; ++i) {
    glued[i] = glue_coupling(5, rng, grid).distances[0][1];
  }
  for (std::size_t i = 0; i < samples; ++i) {
    const auto e = sample_excursion(grid, rng);
    single[i] = e.distance(sample_point(e, rng), sample_point(e, rng));
  }
  const double ks = ks_distance(glued, single);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // Asymptotic two-sample p-value: Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
  const double lambda = ks * std::sqrt(samples / 2.0);
  double q = 0;
  for (int j = 1; j <= 100; ++j) {
    q += 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  }
  return {ks < 0.03 && secs < 600.0,
          fmt("Kolmogorov distance %.4f at %zu samples each (same-law p = %.3f), %.1f s",
              ks, samples, std::clamp(q, 0.0, 1.0), secs)};
}

// ---------------------------------------------------------------- 10

Outcome bounds_suite() {
  std::string detail;
  bool ok = true;

  // Exchangeable tail, m = 20, every s.
  {
    constexpr int m = 20;
    constexpr std::size_t reps = 10000;
    const auto freq = exchangeable_tail_experiment(m, reps, Rng(0xCA1));
    const auto ctrl = exchangeable_tail_experiment(m, reps, Rng(0xCA2), true);
    int bad = 0, ctrl_bad = 0, informative = 0;
    for (int s = 1; s <= m; ++s) {
      const double bound = exchangeable_tail_bound(m, s);
      const auto si = static_cast<std::size_t>(s);
      const double se = std::sqrt(freq[si] * (1 - freq[si]) / reps);
      bad += freq[si] > bound + 3 * se;
      ctrl_bad += ctrl[si] > bound;
      informative += bound < 1.0;
    }
    ok = ok && bad == 0 && ctrl_bad > 0;
    detail += fmt("tail: %d/%d s exceed (%d informative), control exceeds at %d s; ", bad,
                  m, informative, ctrl_bad);
  }
  // Intersection tail, n = 1e4, m = m' = 1e3, eps = 0.3.
  {
    constexpr std::size_t n = 10000, m = 1000, reps = 10000;
    const auto t = intersection_tail_experiment(n, m, m, 0.3, reps, Rng(0xCB1));
    const double bare = double(m) * double(m) / double(n);
    const auto c = intersection_tail_experiment(n, m, m, 0.3, reps, Rng(0xCB2), bare);
    const bool pass = t.frequency <= t.bound + 3 * t.standard_error;
    const bool ctrl_fail = c.frequency > c.bound + 3 * c.standard_error;
    ok = ok && pass && ctrl_fail;
    detail += fmt("intersection: freq %.4g vs bound %.3g, control (threshold %.0f) %.4g; ",
                  t.frequency, t.bound, bare, c.frequency);
  }
  // Region bound, n = 128, 200 trees.
  {
    const auto r = refined_sqrt_bound_experiment(128, 0.3, 200, 50, Rng(0xCC1));
    const auto c = refined_sqrt_bound_experiment(128, 0.3, 200, 50, Rng(0xCC2), true, 1.0);
    ok = ok && r.violating_fraction <= 0.05 && c.violating_fraction > 0.05;
    detail += fmt("region: %.3f of %zu trees violate (max MAST %zu), control %.3f",
                  r.violating_fraction, r.trees, r.max_mast, c.violating_fraction);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 11

Outcome scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::mast_scaling;
  cfg.grid = {64, 128, 256, 512, 1024};
  cfg.replicates = 200;
  cfg.seed = 0xCD;
  cfg.bootstrap = 200;
  const auto r = run_mast_scaling(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& f = *r.fit;
  return {f.beta >= 0.35 && f.beta <= 0.55 && secs < 1800.0,
          fmt("beta_hat = %.4f, bootstrap band [%.4f, %.4f], %.1f s", f.beta, f.band_low,
              f.band_high, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", dp_matches_bruteforce},
      {"counting", counting},
      {"uniformity", uniformity},
      {"decomposition laws", decomposition_laws},
      {"sqrt-product functional", sqrt_product_law},
      {"supermartingale", supermartingale},
      {"kernel bound", kernel_bound},
      {"constants ledger", constants_ledger},
      {"coupling", coupling},
      {"bounds suite", bounds_suite},
      {"scaling experiment", scaling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
