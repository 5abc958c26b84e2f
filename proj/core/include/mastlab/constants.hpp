#pragma once

#include <string>
#include <vector>

namespace mastlab {

// One verified inequality lhs <op> rhs, both sides in log10.
struct ConstantCheck {
  std::string name;
  std::string statement;
  double lhs_log10;
  double rhs_log10;
  bool strict;  // "<" when true, "<=" otherwise
  bool pass;
};

// Every value that underflows a double is stored as log10 only.
struct ConstantsLedger {
  double C;
  double c;
  double lambda_c;  // Chernoff exponent used to certify c
  double alpha;
  double p;
  double beta;
  double gamma;
  double theta;
  double log10_K;
  double log10_delta_threshold;
  double log10_delta;
  double log10_mu;
  double log10_eta;
  double log10_xi;
  double log10_rho;
  double log10_eps_mast;
  double log10_eps_holder;
  std::vector<ConstantCheck> checks;

  bool all_pass() const;
};

// Evaluates the chain and records every check without throwing.
ConstantsLedger evaluate_constants();
// Same, but throws InvariantError naming the first failing check.
ConstantsLedger compute_constants();

// "10^-338" for exact powers of ten, otherwise "1.89e-166".
std::string format_log10(double log10_value);

}  // namespace mastlab
