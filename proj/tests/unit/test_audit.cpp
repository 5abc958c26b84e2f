#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "mastlab/audit.hpp"
#include "mastlab/error.hpp"
#include "mastlab/randkit.hpp"
#include "mastlab/stats.hpp"

using namespace mastlab;

namespace {

std::shared_ptr<const CascadeView> built(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  return std::make_shared<MassCascade>(build_cascade(k, rng));
}

// Fixed splits, the same at every word.
class ConstantCascade final : public CascadeView {
 public:
  explicit ConstantCascade(Split s) : s_(s) {}
  std::optional<std::size_t> max_depth() const override { return std::nullopt; }
  double root_mass() const override { return 1.0; }
  Split ratios(const TernaryWord&) const override { return s_; }

 private:
  Split s_;
};

}  // namespace

TEST_CASE("identity correspondence has no mismatches") {
  auto c = built(6, 1);
  auto id = identity_correspondence(c);
  Rng rng(2);
  auto path = sample_size_biased_path(*c, 6, rng);
  for (const auto& f : detect_mismatches(id, path, 0.01, 1e-9)) {
    CHECK(!f.weak);
    CHECK(!f.strict);
  }
  auto rep = martingale_path(id, path, 0.01, 0.05, 0.3);
  for (double m : rep.martingale) CHECK(m == doctest::Approx(1.0));
  for (double z : rep.log_increments) CHECK(z == 0.0);
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(sqrt_product_sum(id, k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weak mismatch example") {
  auto src = std::make_shared<ConstantCascade>(Split{1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto img = std::make_shared<ConstantCascade>(
      Split{1.0 / 3 + 0.2, 1.0 / 3 - 0.1, 1.0 / 3 - 0.1});
  Correspondence corr(src, img);
  auto flags = detect_mismatches(corr, TernaryWord::parse("1333"), 0.1, 0.15);
  for (const auto& f : flags) {
    CHECK(f.weak);
    CHECK(f.deviation == doctest::Approx(0.2));
  }
  // Good only at odd j with letters j and j+1 equal to 3.
  CHECK(!flags[0].good);
  CHECK(!flags[1].good);
  CHECK(!flags[2].good);
  CHECK(flags[3].good);  // i_3 = i_4 = 3
  auto f2 = detect_mismatches(corr, TernaryWord::parse("3333"), 0.1, 0.15);
  CHECK(f2[1].good);
  CHECK(f2[1].strict);
  CHECK(!f2[2].good);
}

TEST_CASE("strict implies weak on random audits") {
  Rng rng(3);
  auto a = built(8, 4), b = built(8, 5);
  Correspondence corr(a, b);
  for (int i = 0; i < 200; ++i) {
    auto path = sample_size_biased_path(*a, 8, rng);
    for (const auto& f : detect_mismatches(corr, path, 0.05, 0.05)) {
      if (f.strict) CHECK(f.weak);
      if (f.strict) CHECK(f.good);
    }
  }
}

TEST_CASE("martingale increments and penalty") {
  auto a = built(5, 6), b = built(5, 7);
  Correspondence corr(a, b);
  Rng rng(8);
  auto path = sample_size_biased_path(*a, 5, rng);
  const double mu = 0.01;
  auto rep = martingale_path(corr, path, 0.05, 0.05, mu);
  REQUIRE(rep.martingale.size() == 6);
  for (std::size_t j = 1; j <= 5; ++j) {
    CHECK(rep.log_increments[j - 1] ==
          doctest::Approx(std::log(rep.martingale[j]) - std::log(rep.martingale[j - 1])));
    CHECK(rep.martingale[j] ==
          doctest::Approx(b->mass(path.prefix(j)) / a->mass(path.prefix(j))));
    const double expect = rep.log_increments[j - 1] + (rep.scales[j - 1].weak ? mu : 0.0);
    CHECK(rep.penalized[j - 1] == expect);
  }
}

TEST_CASE("martingale property needs the size-biased descent") {
  // One step from M_0 = 1: E[M_1] = sum_a p_a q_a / p_a = 1 under size
  // biasing; under uniform letters it is sum_a q_a / (3 p_a).
  HashedCascade src(100), img(200);
  auto s = std::make_shared<HashedCascade>(src);
  auto i = std::make_shared<HashedCascade>(img);
  Correspondence corr(s, i);
  RunningStats biased, uniform;
  Rng rng(9);
  for (int r = 0; r < 100000; ++r) {
    // Fresh words at depth 3 give independent splits at the last step.
    TernaryWord w;
    for (int d = 0; d < 3; ++d) w.push_back(1 + static_cast<int>(rng.below(3)));
    const Split p = s->ratios(w), q = i->ratios(w);
    const auto a = size_biased_index(p, rng);
    biased.add(q[a] / p[a]);
    const auto u = rng.below(3);
    uniform.add(std::min(q[u] / p[u], 1e6));
    (void)corr;
  }
  CHECK(std::abs(biased.mean() - 1.0) < 3 * biased.standard_error() + 1e-3);
  CHECK(uniform.mean() > 1.0 + 3 * uniform.standard_error());
}

TEST_CASE("kernel arithmetic") {
  Split p{0.5, 0.3, 0.2}, q{0.2, 0.5, 0.3};
  CHECK(mismatch_kernel(p, p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double expect = std::sqrt(0.10) + std::sqrt(0.15) + std::sqrt(0.06);
  CHECK(mismatch_kernel(p, q, 0.0) == doctest::Approx(expect));
  CHECK(mismatch_kernel(p, q, 0.0) <= 1 - 0.3 * 0.3 / 8);
  CHECK(mismatch_kernel(p, q, 0.2) == doctest::Approx(std::exp(0.1) * expect));
  CHECK_THROWS_AS(mismatch_kernel({0.0, 0.5, 0.5}, q, 0.0), DomainError);
  CHECK_THROWS_AS(mismatch_kernel({0.5, 0.5, 0.5}, q, 0.0), DomainError);
}

TEST_CASE("kernel never exceeds one without penalty") {
  Rng rng(10);
  for (int i = 0; i < 100000; ++i) {
    auto p = sample_dirichlet_half3(rng), q = sample_dirichlet_half3(rng);
    const double k = mismatch_kernel(p, q, 0.0);
    REQUIRE(k <= 1.0 + 1e-12);
  }
}

TEST_CASE("sqrt product sums are non-increasing") {
  auto a = built(9, 11), b = built(9, 12);
  Correspondence corr(a, b);
  auto s = sqrt_product_sums(corr, 9);
  CHECK(s[0] == doctest::Approx(1.0));
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] <= s[k - 1] + 1e-12);
  CHECK(sqrt_product_sum(corr, 4) == doctest::Approx(s[4]));
  CHECK_THROWS_AS(sqrt_product_sum(corr, 10), DomainError);
}

TEST_CASE("perturbed splits") {
  Split p{0.5, 0.3, 0.2};
  auto q = perturb_split(p, 0.1, 0.05);
  CHECK(q[0] + q[1] + q[2] == doctest::Approx(1.0));
  CHECK(q[0] == doctest::Approx(0.4));
  CHECK(q[1] == doctest::Approx(0.36));
  CHECK(q[2] == doctest::Approx(0.24));
  Split thin{0.01, 0.49, 0.5};
  CHECK(perturb_split(thin, 0.1, 0.05) == thin);
  CHECK_THROWS_AS(PerturbedCascade(built(2, 1), 0.4, 0.05), DomainError);
}

TEST_CASE("chernoff check on the identity") {
  auto c = std::make_shared<HashedCascade>(5);
  auto res = chernoff_supermartingale_check(identity_correspondence(c), 200, 20,
                                            0.5, 0.1, 0.05, Rng(1));
  CHECK(res.mean == doctest::Approx(1.0));
  CHECK(res.weak_scales == 0);
  CHECK(!res.in_regime);
  CHECK(admissible_mu(0.1) == doctest::Approx(-2 * std::log(1 - 0.01 / 8)));
}

TEST_CASE("exchangeable tail bound") {
  CHECK(exchangeable_tail_bound(1, 1) == doctest::Approx(0.5));
  // C(5,3) 2 3 / 3! = 10.
  CHECK(exchangeable_tail_bound(5, 3) == doctest::Approx(10.0));
  for (int s = 13; s < 20; ++s) {
    CHECK(exchangeable_tail_bound(20, s + 1) <= exchangeable_tail_bound(20, s));
  }
  CHECK_THROWS_AS(exchangeable_tail_bound(3, 4), DomainError);
  CHECK_THROWS_AS(exchangeable_tail_bound(3, 0), DomainError);
}

TEST_CASE("intersection tails") {
  Rng rng(1);
  auto zero = intersection_tail_experiment(100, 0, 50, 0.3, 100, rng);
  CHECK(zero.frequency == 0.0);
  auto full = intersection_tail_experiment(100, 100, 100, 0.3, 50, rng);
  CHECK(full.frequency == 0.0);
  // Exact mean m m2 / n of the hypergeometric overlap, through the override.
  auto half = intersection_tail_experiment(1000, 100, 100, 0.3, 4000, rng, 10.0);
  CHECK(half.frequency > 0.4);
  CHECK(half.frequency < 0.65);
  CHECK(intersection_threshold(10000, 1000, 1000, 0.3) == doctest::Approx(800.0));
  CHECK_THROWS_AS(intersection_tail_experiment(10, 11, 1, 0.3, 1, rng), DomainError);
}

TEST_CASE("refined sqrt bound smoke") {
  auto r = refined_sqrt_bound_experiment(32, 0.2, 10, 10, Rng(3));
  CHECK(r.checked_pairs == 100);
  CHECK(r.violating_fraction == 0.0);
  auto same = refined_sqrt_bound_experiment(32, 0.2, 5, 3, Rng(3), true, 1.0);
  CHECK(same.max_mast == 32);
  CHECK(same.violating_fraction == 1.0);
  CHECK_THROWS_AS(refined_sqrt_bound_experiment(600, 0.2, 1, 1, Rng(1)), DomainError);
}
