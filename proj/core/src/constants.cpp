#include "mastlab/constants.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "mastlab/error.hpp"

namespace mastlab {

namespace {

const double kLog10E = std::log10(std::numbers::e);
const double kLog10Two = std::log10(2.0);
const double kLog10Six = std::log10(6.0);

void check(ConstantsLedger& l, std::string name, std::string statement,
           double lhs, double rhs, bool strict) {
  const bool pass = strict ? lhs < rhs : lhs <= rhs;
  l.checks.push_back({std::move(name), std::move(statement), lhs, rhs, strict, pass});
}

}  // namespace

bool ConstantsLedger::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

ConstantsLedger evaluate_constants() {
  ConstantsLedger l{};

  // Lower tail of region masses: with lambda = 1/2 - 1/C and
  // E[W^-lambda] = 1/(1 - 2 lambda), the Chernoff factor is (C/2) e^{1-C/2}.
  l.C = 7.5;
  check(l, "C", "C > 2", std::log10(2.0), std::log10(l.C), true);
  const double lambda_up = 0.5 - 1.0 / l.C;
  const double chernoff_up = std::exp(-lambda_up * l.C) / (1.0 - 2.0 * lambda_up);
  check(l, "C", "(C/2) e^{1-C/2} <= 1/4",
        std::log10(l.C / 2.0) + (1.0 - l.C / 2.0) * kLog10E, std::log10(0.25), false);
  check(l, "C", "e^{-lambda C} / (1 - 2 lambda) <= 1/4 at lambda = 1/2 - 1/C",
        std::log10(chernoff_up), std::log10(0.25), false);

  // Upper tail: E[W^lambda] = 1/(1 + 2 lambda) for W ~ Beta(1/2, 1).
  l.lambda_c = 2.5;
  const double moment = 1.0 / (1.0 + 2.0 * l.lambda_c);
  l.c = std::log(0.25 / moment) / l.lambda_c;
  check(l, "c", "E[W^lambda] < 1/5", std::log10(moment), std::log10(0.2), true);
  check(l, "c", "e^{lambda c} E[W^lambda] <= 1/4",
        l.lambda_c * l.c * kLog10E + std::log10(moment), std::log10(0.25), false);
  check(l, "c", "0 < c < C", std::log10(l.c), std::log10(l.C), true);

  l.alpha = 1e-6;
  const double floor = 1.0 - 3.0 * std::sqrt(l.alpha);
  check(l, "alpha", "1 - 3 sqrt(alpha) >= 0.997", std::log10(0.997),
        std::log10(floor), false);
  l.p = 0.997 / 9.0;
  check(l, "p", "p = 0.997/9 <= (1 - 3 sqrt(alpha))/9", std::log10(l.p),
        std::log10(floor / 9.0), false);
  l.beta = 1.0 / 20.0;
  check(l, "beta", "beta < p/2", std::log10(l.beta), std::log10(l.p / 2.0), true);
  l.gamma = (l.p - 2.0 * l.beta) * (l.p - 2.0 * l.beta);
  check(l, "gamma", "gamma = (p - 2 beta)^2 > 0",
        -std::numeric_limits<double>::infinity(), std::log10(l.gamma), true);

  l.log10_K = std::log10(6.0 / l.alpha) + (l.C + 2.0) * kLog10E +
              ((2.0 * l.C + 4.0) / l.beta) * kLog10Two;
  l.log10_delta_threshold = -(2.0 / l.beta) * kLog10Six +
                            1.5 * std::log10(l.alpha) - kLog10Two - l.log10_K;
  l.log10_delta = -166.0;
  check(l, "delta", "delta < 6^{-2/beta} alpha^{3/2} / (2K)", l.log10_delta,
        l.log10_delta_threshold, true);
  // The form the proof uses: 6 (2 delta K / alpha^{3/2})^{beta/2} < 1.
  check(l, "delta", "6 (2 delta K / alpha^{3/2})^{beta/2} < 1",
        kLog10Six + (l.beta / 2.0) * (kLog10Two + l.log10_delta + l.log10_K -
                                      1.5 * std::log10(l.alpha)),
        0.0, true);

  // mu = delta^2/10. Since -log(1 - x) >= x, the admissible bound
  // -2 log(1 - delta^2/8) is at least delta^2/4.
  l.log10_mu = 2.0 * l.log10_delta - 1.0;
  check(l, "mu", "mu <= delta^2/4 <= -2 log(1 - delta^2/8)", l.log10_mu,
        2.0 * l.log10_delta - std::log10(4.0), false);
  l.log10_eta = l.log10_mu + std::log10(l.beta / 8.0);
  check(l, "eta", "eta = mu beta / 8 > 10^-336", -336.0, l.log10_eta, true);

  l.log10_xi = -336.0;
  check(l, "xi", "xi < eta", l.log10_xi, l.log10_eta, true);
  check(l, "xi", "xi < gamma", l.log10_xi, std::log10(l.gamma), true);

  l.log10_rho = std::log10(4.0) - 337.0;
  const double log10_min_eta_xi = std::min(l.log10_eta, l.log10_xi);
  check(l, "rho", "rho < min(eta, xi)/2", l.log10_rho,
        log10_min_eta_xi - kLog10Two, true);

  l.theta = 1.0 / (2.0 * l.C);
  check(l, "theta", "theta = 1/(2C) <= 1/(4 log 3)", std::log10(l.theta),
        -std::log10(4.0 * std::log(3.0)), false);

  l.log10_eps_mast = -338.0;
  check(l, "eps_mast", "eps_mast < rho theta / 2", l.log10_eps_mast,
        l.log10_rho + std::log10(l.theta) - kLog10Two, true);
  l.log10_eps_holder = -338.0;
  check(l, "eps_holder", "eps_holder < eta / (2C)", l.log10_eps_holder,
        l.log10_eta - std::log10(2.0 * l.C), true);
  return l;
}

ConstantsLedger compute_constants() {
  auto l = evaluate_constants();
  for (const auto& c : l.checks) {
    if (!c.pass) throw InvariantError("constants ledger: " + c.name + ": " + c.statement);
  }
  return l;
}

std::string format_log10(double v) {
  const double e = std::floor(v);
  const double mant = std::pow(10.0, v - e);
  char buf[48];
  if (std::abs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "10^%d", static_cast<int>(std::round(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%.2fe%d", mant, static_cast<int>(e));
  }
  return buf;
}

}  // namespace mastlab
