#include <doctest.h>

#include <cmath>

#include "mastlab/constants.hpp"

using namespace mastlab;

TEST_CASE("ledger passes and reproduces the headline values") {
  auto l = compute_constants();
  CHECK(l.all_pass());
  // 3.75 e^{-2.75}
  CHECK(3.75 * std::exp(-2.75) == doctest::Approx(0.2397).epsilon(1e-3));
  CHECK(l.log10_delta_threshold == doctest::Approx(-165.72).epsilon(0.01 / 165.72));
  CHECK(std::abs(l.log10_delta_threshold - std::log10(1.89e-166 / 1e-166) + 166) < 0.01);
  CHECK(format_log10(l.log10_eps_mast) == "10^-338");
  CHECK(format_log10(l.log10_eps_holder) == "10^-338");
  CHECK(format_log10(l.log10_mu) == "10^-333");
  CHECK(l.theta == doctest::Approx(1.0 / 15));
  CHECK(l.log10_eta == doctest::Approx(-333 - std::log10(160.0)));
  CHECK(l.gamma == doctest::Approx((0.997 / 9 - 0.1) * (0.997 / 9 - 0.1)));
}

TEST_CASE("independent re-derivation of K and the delta threshold") {
  // (6^{-41}/2) e^{-9.5} 10^{-15} 2^{-380}, term by term.
  const double lg = -41 * std::log10(6.0) - std::log10(2.0) - 9.5 / std::log(10.0) -
                    15.0 - 380 * std::log10(2.0);
  CHECK(evaluate_constants().log10_delta_threshold == doctest::Approx(lg).epsilon(1e-12));
  CHECK(format_log10(lg).rfind("1.89e-166", 0) == 0);
}

TEST_CASE("format") {
  CHECK(format_log10(-2.0) == "10^-2");
  CHECK(format_log10(std::log10(2.5e-7)) == "2.50e-7");
}
