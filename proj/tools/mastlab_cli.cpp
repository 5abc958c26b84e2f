#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mastlab/audit.hpp"
#include "mastlab/cascade.hpp"
#include "mastlab/cladogram.hpp"
#include "mastlab/constants.hpp"
#include "mastlab/error.hpp"
#include "mastlab/excursion.hpp"
#include "mastlab/experiment.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/newick.hpp"
#include "mastlab/rng.hpp"

namespace {

using namespace mastlab;
using json = nlohmann::json;

enum class Exit { ok = 0, invariant = 1, budget = 2 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --out when given, otherwise stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw DomainError("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json flags_json(const ScaleFlags& f) {
  return {{"good", f.good}, {"weak", f.weak}, {"strict", f.strict},
          {"deviation", f.deviation}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mastlab: maximum agreement subtrees of random cladograms"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "jsonl";
  std::string config_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out_path, "output file (default stdout)");
  };

  // sample
  auto* sample = app.add_subcommand("sample", "uniform cladograms as Newick, one per line");
  int sample_n = 8;
  std::size_t sample_count = 1;
  sample->add_option("-n,--leaves", sample_n, "number of leaves")->check(CLI::Range(1, 1 << 20));
  sample->add_option("--count", sample_count, "number of trees");
  common(sample);

  // mast
  auto* mast_cmd = app.add_subcommand("mast", "MAST of two Newick trees as JSON");
  std::string tree_a, tree_b;
  mast_cmd->add_option("--tree-a", tree_a, "Newick file")->required();
  mast_cmd->add_option("--tree-b", tree_b, "Newick file")->required();
  mast_cmd->add_option("--out", out_path, "output file (default stdout)");

  // cascade
  auto* cascade_cmd = app.add_subcommand("cascade", "mass cascade dump as JSONL");
  std::size_t cascade_k = 4;
  cascade_cmd->add_option("-k,--depth", cascade_k, "depth")->check(CLI::Range(0, 14));
  common(cascade_cmd);

  // couple
  auto* couple_cmd = app.add_subcommand("couple", "glued Brownian tree distances as CSV");
  int couple_n = 5;
  std::size_t couple_grid = 1u << 14;
  couple_cmd->add_option("-n,--leaves", couple_n, "number of leaves")->check(CLI::Range(3, 64));
  couple_cmd->add_option("--grid", couple_grid, "excursion grid per piece (power of two)");
  common(couple_cmd);

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "audit report along one size-biased path as JSON");
  std::size_t audit_k = 10;
  double audit_alpha = 0.05, audit_delta = 0.1, audit_shift = 0.0;
  std::optional<double> audit_mu;
  audit_cmd->add_option("-k,--depth", audit_k, "path depth");
  audit_cmd->add_option("--alpha", audit_alpha, "good-scale ratio floor");
  audit_cmd->add_option("--delta", audit_delta, "mismatch threshold");
  audit_cmd->add_option("--mu", audit_mu, "penalty (default delta^2/10)");
  audit_cmd->add_option("--shift", audit_shift,
                        "image perturbation of the largest ratio (0 = identity)");
  common(audit_cmd);

  // constants
  auto* constants_cmd = app.add_subcommand("constants", "constant chain with pass/fail per inequality");
  constants_cmd->add_option("--out", out_path, "output file (default stdout)");
  constants_cmd->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a configured experiment");
  std::optional<std::uint64_t> exp_seed;
  exp_cmd->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--seed", exp_seed, "override the config seed");
  exp_cmd->add_option("--out", out_path, "output file (default: config output, else stdout)");
  exp_cmd->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      Rng rng(seed);
      Sink sink(out_path);
      for (std::size_t i = 0; i < sample_count; ++i) {
        sink.out() << to_newick(sample_uniform(sample_n, rng)) << '\n';
      }
    } else if (*mast_cmd) {
      const auto a = parse_newick(read_file(tree_a));
      const auto b = parse_newick(read_file(tree_b));
      const auto r = mast(a, b);
      Sink sink(out_path);
      sink.out() << json{{"size", r.size}, {"witness", r.witness}}.dump() << '\n';
    } else if (*cascade_cmd) {
      Rng rng(seed);
      Sink sink(out_path);
      write_cascade_jsonl(build_cascade(cascade_k, rng), sink.out());
    } else if (*couple_cmd) {
      Rng rng(seed);
      const auto g = glue_coupling(couple_n, rng, couple_grid);
      Sink sink(out_path);
      write_distance_csv(g.distances, sink.out());
    } else if (*audit_cmd) {
      const double mu = audit_mu.value_or(audit_delta * audit_delta / 10.0);
      auto source = std::make_shared<HashedCascade>(derive_seed(seed, 0));
      std::shared_ptr<const CascadeView> image = source;
      if (audit_shift > 0.0) {
        image = std::make_shared<PerturbedCascade>(source, audit_shift, audit_alpha);
      }
      const Correspondence corr(source, image);
      Rng rng(derive_seed(seed, 1));
      const auto path = sample_size_biased_path(*source, audit_k, rng);
      const auto rep = martingale_path(corr, path, audit_alpha, audit_delta, mu);
      json scales = json::array();
      for (const auto& f : rep.scales) scales.push_back(flags_json(f));
      const json j{{"seed", seed},
                   {"path", path.str()},
                   {"alpha", audit_alpha},
                   {"delta", audit_delta},
                   {"mu", mu},
                   {"shift", audit_shift},
                   {"scales", scales},
                   {"martingale", rep.martingale},
                   {"log_increments", rep.log_increments},
                   {"penalized", rep.penalized}};
      Sink sink(out_path);
      sink.out() << j.dump(2) << '\n';
    } else if (*constants_cmd) {
      const auto ledger = evaluate_constants();
      Sink sink(out_path);
      auto& os = sink.out();
      if (format == "json") {
        json checks = json::array();
        for (const auto& c : ledger.checks) {
          checks.push_back({{"name", c.name}, {"statement", c.statement},
                            {"lhs_log10", c.lhs_log10}, {"rhs_log10", c.rhs_log10},
                            {"strict", c.strict}, {"pass", c.pass}});
        }
        os << json{{"C", ledger.C}, {"c", ledger.c}, {"alpha", ledger.alpha},
                   {"p", ledger.p}, {"beta", ledger.beta}, {"gamma", ledger.gamma},
                   {"theta", ledger.theta}, {"log10_K", ledger.log10_K},
                   {"log10_delta_threshold", ledger.log10_delta_threshold},
                   {"delta", format_log10(ledger.log10_delta)},
                   {"mu", format_log10(ledger.log10_mu)},
                   {"eta", format_log10(ledger.log10_eta)},
                   {"xi", format_log10(ledger.log10_xi)},
                   {"rho", format_log10(ledger.log10_rho)},
                   {"eps_mast", format_log10(ledger.log10_eps_mast)},
                   {"eps_holder", format_log10(ledger.log10_eps_holder)},
                   {"checks", checks}, {"all_pass", ledger.all_pass()}}
                  .dump(2)
           << '\n';
      } else {
        for (const auto& c : ledger.checks) {
          os << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": " << c.statement
             << "  [" << c.lhs_log10 << (c.strict ? " < " : " <= ") << c.rhs_log10
             << " in log10]\n";
        }
        os << "delta threshold = " << format_log10(ledger.log10_delta_threshold) << '\n'
           << "eps (MAST)      = " << format_log10(ledger.log10_eps_mast) << '\n'
           << "eps (Holder)    = " << format_log10(ledger.log10_eps_holder) << '\n';
      }
      if (!ledger.all_pass()) return static_cast<int>(Exit::invariant);
    } else if (*exp_cmd) {
      auto cfg = load_config(config_path);
      if (exp_seed) cfg.seed = *exp_seed;
      const std::string target = out_path.empty() ? cfg.output : out_path;
      const auto result = run_experiment(cfg);
      Sink sink(target);
      if (format == "csv") {
        write_csv(result, sink.out());
      } else {
        write_jsonl(result, sink.out());
      }
      if (result.fit) {
        std::cerr << "beta_hat = " << result.fit->beta << "  band [" << result.fit->band_low
                  << ", " << result.fit->band_high << "]\n";
      }
    }
  } catch (const BudgetError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return static_cast<int>(Exit::budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(Exit::invariant);
  }
  return static_cast<int>(Exit::ok);
}
