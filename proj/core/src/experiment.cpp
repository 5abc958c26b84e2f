#include "mastlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mastlab/audit.hpp"
#include "mastlab/cascade.hpp"
#include "mastlab/cladogram.hpp"
#include "mastlab/error.hpp"
#include "mastlab/excursion.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/parallel.hpp"
#include "mastlab/randkit.hpp"
#include "mastlab/rng.hpp"
#include "mastlab/stats.hpp"

namespace mastlab {

using json = nlohmann::json;

// ---------------------------------------------------------------- config

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::mast_scaling: return "mast-scaling";
    case ExperimentKind::cascade_stats: return "cascade-stats";
    case ExperimentKind::coupling_check: return "coupling-check";
    case ExperimentKind::audit_suite: return "audit-suite";
    case ExperimentKind::bounds_suite: return "bounds-suite";
  }
  return "?";
}

ExperimentKind parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::mast_scaling, ExperimentKind::cascade_stats,
                 ExperimentKind::coupling_check, ExperimentKind::audit_suite,
                 ExperimentKind::bounds_suite}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (schema != kConfigSchema) {
    throw DomainError("config: unsupported schema " + std::to_string(schema));
  }
  if (replicates < 1) throw DomainError("config: replicates must be >= 1");
  if (grid.empty()) throw DomainError("config: grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw DomainError("config: grid must be strictly increasing");
    }
  }
  auto range = [&](int lo, int hi, const char* what) {
    if (grid.front() < lo || grid.back() > hi) {
      throw DomainError(std::string("config: ") + what + " grid must lie in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };
  switch (kind) {
    case ExperimentKind::mast_scaling: range(4, 1 << 20, "mast-scaling"); break;
    case ExperimentKind::cascade_stats: range(1, 14, "cascade-stats"); break;
    case ExperimentKind::coupling_check: range(3, 64, "coupling-check"); break;
    case ExperimentKind::audit_suite: range(1, 12, "audit-suite"); break;
    case ExperimentKind::bounds_suite: range(3, 512, "bounds-suite"); break;
  }
  if (!(epsilon > 0.0)) throw DomainError("config: epsilon must be positive");
  if (!(alpha > 0.0 && alpha < 1.0 / 3.0)) {
    throw DomainError("config: alpha must lie in (0, 1/3)");
  }
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    throw DomainError("config: delta must lie in (0, 1/3)");
  }
  if (subset_m > subset_n || subset_m2 > subset_n) {
    throw DomainError("config: subset sizes must not exceed subset_n");
  }
  if (tail_m < 2 || tail_m > 200) throw DomainError("config: tail_m must lie in [2, 200]");
  if (pairs_per_tree < 1) throw DomainError("config: pairs_per_tree must be >= 1");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config: top level must be an object");
  ExperimentConfig c;
  static const char* known[] = {
      "schema", "experiment", "grid", "replicates", "seed", "epsilon",
      "alpha", "delta", "threads", "grid_size", "bootstrap", "budget_cells",
      "output", "tail_m", "subset_n", "subset_m", "subset_m2", "pairs_per_tree"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw DomainError("config: unknown field '" + key + "'");
    }
  }
  if (!j.contains("schema")) throw DomainError("config: missing 'schema'");
  if (!j.contains("experiment")) throw DomainError("config: missing 'experiment'");
  try {
    c.schema = j.at("schema").get<int>();
    c.kind = parse_kind(j.at("experiment").get<std::string>());
    if (j.contains("grid")) c.grid = j["grid"].get<std::vector<int>>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
    if (j.contains("grid_size")) c.grid_size = j["grid_size"].get<std::size_t>();
    if (j.contains("bootstrap")) c.bootstrap = j["bootstrap"].get<std::size_t>();
    if (j.contains("budget_cells")) c.budget_cells = j["budget_cells"].get<double>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("tail_m")) c.tail_m = j["tail_m"].get<int>();
    if (j.contains("subset_n")) c.subset_n = j["subset_n"].get<std::size_t>();
    if (j.contains("subset_m")) c.subset_m = j["subset_m"].get<std::size_t>();
    if (j.contains("subset_m2")) c.subset_m2 = j["subset_m2"].get<std::size_t>();
    if (j.contains("pairs_per_tree")) c.pairs_per_tree = j["pairs_per_tree"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------- helpers

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxScalingLeaves = 2048;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rng replicate_rng(const ExperimentConfig& cfg, std::size_t grid_index,
                  std::size_t replicate) {
  return Rng(derive_seed(derive_seed(cfg.seed, grid_index), replicate));
}

struct RowMaker {
  const ExperimentConfig& cfg;
  std::size_t substream;
  double wall;
  std::map<std::string, double> params;

  ExperimentRow operator()(std::string stat, double value, double se,
                           std::size_t reps,
                           std::map<std::string, double> extra = {}) const {
    ExperimentRow r;
    r.experiment = std::string(to_string(cfg.kind));
    r.params = params;
    for (auto& [k, v] : extra) r.params[k] = v;
    r.statistic = std::move(stat);
    r.value = value;
    r.standard_error = se;
    r.replicates = reps;
    r.wall_seconds = wall;
    r.seed = cfg.seed;
    r.substream = substream;
    return r;
  }
};

RunningStats summarize(const std::vector<double>& v) {
  RunningStats s;
  for (double x : v) s.add(x);
  return s;
}

}  // namespace

// ---------------------------------------------------------------- experiments

double mast_scaling_cost(const ExperimentConfig& cfg) {
  double cost = 0.0;
  for (int n : cfg.grid) {
    cost += static_cast<double>(cfg.replicates) *
            mast_cost_estimate(static_cast<std::size_t>(n));
  }
  return cost;
}

ExperimentResult run_mast_scaling(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::mast_scaling) {
    throw DomainError("run_mast_scaling: wrong experiment kind");
  }
  cfg.validate();
  const double cost = mast_scaling_cost(cfg);
  if (cfg.grid.back() > kMaxScalingLeaves) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mast-scaling: n = %d exceeds the solver limit of %d leaves "
                  "(estimated %.3g DP cells)",
                  cfg.grid.back(), kMaxScalingLeaves, cost);
    throw BudgetError(buf, cost);
  }
  if (cfg.budget_cells && cost > *cfg.budget_cells) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mast-scaling: estimated %.3g DP cells exceeds the budget of %.3g",
                  cost, *cfg.budget_cells);
    throw BudgetError(buf, cost);
  }
  ExperimentResult out;
  std::vector<std::vector<double>> sizes(cfg.grid.size());
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const int n = cfg.grid[g];
    const auto t0 = Clock::now();
    auto& v = sizes[g];
    v.assign(cfg.replicates, 0.0);
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
      Rng rng = replicate_rng(cfg, g, r);
      const Cladogram a = sample_uniform(n, rng);
      const Cladogram b = sample_uniform(n, rng);
      v[r] = static_cast<double>(mast(a, b).size);
    });
    const auto s = summarize(v);
    const double root = std::sqrt(static_cast<double>(n));
    const double cap = 2.0 * std::numbers::e * root;
    const auto over = static_cast<double>(
        std::count_if(v.begin(), v.end(), [&](double x) { return x > cap; }));
    RowMaker row{cfg, g, seconds_since(t0), {{"n", static_cast<double>(n)}}};
    out.rows.push_back(row("mast_mean", s.mean(), s.standard_error(), v.size()));
    out.rows.push_back(row("mast_q05", quantile(v, 0.05), 0, v.size()));
    out.rows.push_back(row("mast_median", quantile(v, 0.5), 0, v.size()));
    out.rows.push_back(row("mast_q95", quantile(v, 0.95), 0, v.size()));
    out.rows.push_back(row("mast_mean_over_sqrt_n", s.mean() / root,
                           s.standard_error() / root, v.size()));
    out.rows.push_back(row("fraction_above_2e_sqrt_n", over / v.size(), 0, v.size()));
  }
  if (cfg.grid.size() >= 2) {
    const auto t0 = Clock::now();
    std::vector<double> x, y;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      x.push_back(std::log(static_cast<double>(cfg.grid[g])));
      y.push_back(std::log(summarize(sizes[g]).mean()));
    }
    const auto fit = ols(x, y);
    std::vector<double> slopes;
    Rng boot(derive_seed(cfg.seed, 0xB0075712ULL));
    for (std::size_t b = 0; b < cfg.bootstrap; ++b) {
      std::vector<double> yb;
      for (const auto& v : sizes) {
        double sum = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) sum += v[boot.below(v.size())];
        yb.push_back(std::log(sum / static_cast<double>(v.size())));
      }
      slopes.push_back(ols(x, yb).slope);
    }
    ScalingFit f{fit.slope, fit.intercept, fit.slope, fit.slope};
    double se = 0.0;
    if (!slopes.empty()) {
      f.band_low = quantile(slopes, 0.025);
      f.band_high = quantile(slopes, 0.975);
      se = summarize(slopes).stddev();
    }
    out.fit = f;
    RowMaker row{cfg, cfg.grid.size(), seconds_since(t0), {}};
    out.rows.push_back(row("beta_hat", f.beta, se, cfg.replicates,
                           {{"band_low", f.band_low},
                            {"band_high", f.band_high},
                            {"intercept", f.intercept},
                            {"bootstrap", static_cast<double>(cfg.bootstrap)}}));
  }
  return out;
}

ExperimentResult run_cascade_stats(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::cascade_stats) {
    throw DomainError("run_cascade_stats: wrong experiment kind");
  }
  cfg.validate();
  ExperimentResult out;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const auto k = static_cast<std::size_t>(cfg.grid[g]);
    const auto t0 = Clock::now();
    std::vector<double> drift(cfg.replicates), lo(cfg.replicates),
        hi(cfg.replicates), good(cfg.replicates), picked(cfg.replicates);
    const std::size_t odd_scales = k / 2;  // odd j in [1, k-1]
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
      Rng rng = replicate_rng(cfg, g, r);
      const auto c = build_cascade(k, rng);
      double sum = 0.0;
      for (double m : c.level(k)) sum += m;
      drift[r] = std::abs(sum - 1.0);
      const auto env = brw_envelope(c);
      lo[r] = env.back().first;
      hi[r] = env.back().second;
      const auto trace = zoom_trace(k, rng);
      good[r] = odd_scales ? static_cast<double>(good_scales(trace, cfg.alpha).size()) /
                                 static_cast<double>(odd_scales)
                           : 0.0;
      double w = 0.0;
      for (const auto& rec : trace.records) w += rec.w[static_cast<std::size_t>(rec.letter - 1)];
      picked[r] = w / static_cast<double>(k);
    });
    RowMaker row{cfg, g, seconds_since(t0),
                 {{"k", static_cast<double>(k)}, {"alpha", cfg.alpha}}};
    const auto n = cfg.replicates;
    out.rows.push_back(row("leaf_mass_drift_max", *std::max_element(drift.begin(), drift.end()), 0, n));
    auto s = summarize(lo);
    out.rows.push_back(row("min_log_mass", s.mean(), s.standard_error(), n));
    s = summarize(hi);
    out.rows.push_back(row("max_log_mass", s.mean(), s.standard_error(), n));
    if (odd_scales) {
      s = summarize(good);
      out.rows.push_back(row("good_fraction_per_odd_scale", s.mean(), s.standard_error(), n));
    }
    s = summarize(picked);
    out.rows.push_back(row("w_picked_mean", s.mean(), s.standard_error(), n));
  }
  return out;
}

ExperimentResult run_coupling_check(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::coupling_check) {
    throw DomainError("run_coupling_check: wrong experiment kind");
  }
  cfg.validate();
  ExperimentResult out;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const int n = cfg.grid[g];
    const auto t0 = Clock::now();
    std::vector<double> glued(cfg.replicates), single(cfg.replicates);
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
      Rng rng = replicate_rng(cfg, g, r);
      const auto c = couple(n, rng, cfg.grid_size);
      glued[r] = c.leaf_distance(1, 2);
      const auto e = sample_excursion(cfg.grid_size, rng);
      single[r] = e.distance(sample_point(e, rng), sample_point(e, rng));
    });
    RowMaker row{cfg, g, seconds_since(t0),
                 {{"n", static_cast<double>(n)},
                  {"grid_size", static_cast<double>(cfg.grid_size)}}};
    const auto a = summarize(glued), b = summarize(single);
    out.rows.push_back(row("glued_distance_mean", a.mean(), a.standard_error(), cfg.replicates));
    out.rows.push_back(row("single_distance_mean", b.mean(), b.standard_error(), cfg.replicates));
    out.rows.push_back(row("kolmogorov_distance", ks_distance(glued, single), 0, cfg.replicates));
  }
  return out;
}

ExperimentResult run_audit_suite(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::audit_suite) {
    throw DomainError("run_audit_suite: wrong experiment kind");
  }
  cfg.validate();
  ExperimentResult out;
  std::vector<double> ks, logs;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const auto k = static_cast<std::size_t>(cfg.grid[g]);
    const auto t0 = Clock::now();
    std::vector<double> sums(cfg.replicates), ident(cfg.replicates);
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
      Rng rng = replicate_rng(cfg, g, r);
      auto a = std::make_shared<MassCascade>(build_cascade(k, rng));
      auto b = std::make_shared<MassCascade>(build_cascade(k, rng));
      sums[r] = sqrt_product_sum(Correspondence(a, b), k);
      ident[r] = std::abs(sqrt_product_sum(identity_correspondence(a), k) - 1.0);
    });
    RowMaker row{cfg, g, seconds_since(t0), {{"k", static_cast<double>(k)}}};
    const auto s = summarize(sums);
    out.rows.push_back(row("sqrt_product_sum_mean", s.mean(), s.standard_error(),
                           cfg.replicates, {{"three_quarters_pow_k", std::pow(0.75, static_cast<double>(k))}}));
    out.rows.push_back(row("identity_sum_drift_max", *std::max_element(ident.begin(), ident.end()),
                           0, cfg.replicates));
    ks.push_back(static_cast<double>(k));
    logs.push_back(std::log(s.mean()));
  }
  const auto t0 = Clock::now();
  if (ks.size() >= 2) {
    const auto fit = ols(ks, logs);
    RowMaker row{cfg, cfg.grid.size(), seconds_since(t0), {}};
    out.rows.push_back(row("decay_ratio", std::exp(fit.slope), 0, cfg.replicates));
  }
  // Supermartingale check on independent unbounded cascades.
  const std::size_t depth = static_cast<std::size_t>(cfg.grid.back());
  const double mu = cfg.delta * cfg.delta / 10.0;
  const Rng base(derive_seed(cfg.seed, cfg.grid.size() + 1));
  auto src = std::make_shared<HashedCascade>(derive_seed(base.seed(), 1));
  auto img = std::make_shared<HashedCascade>(derive_seed(base.seed(), 2));
  const auto chk = chernoff_supermartingale_check(Correspondence(src, img), cfg.replicates,
                                                  depth, mu, cfg.delta, cfg.alpha, base);
  RowMaker row{cfg, cfg.grid.size() + 1, seconds_since(t0),
               {{"k", static_cast<double>(depth)}, {"alpha", cfg.alpha},
                {"delta", cfg.delta}, {"mu", mu}, {"in_regime", chk.in_regime ? 1.0 : 0.0}}};
  out.rows.push_back(row("chernoff_mean", chk.mean, chk.standard_error, chk.paths));
  out.rows.push_back(row("weak_mismatch_frequency",
                         static_cast<double>(chk.weak_scales) /
                             static_cast<double>(chk.paths * depth),
                         0, chk.paths));
  return out;
}

ExperimentResult run_bounds_suite(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::bounds_suite) {
    throw DomainError("run_bounds_suite: wrong experiment kind");
  }
  cfg.validate();
  ExperimentResult out;
  std::size_t sub = 0;
  auto stream = [&] { return Rng(derive_seed(cfg.seed, sub)); };

  // Exchangeable tail: every s, independent pairs and the identical control.
  {
    const auto t0 = Clock::now();
    const auto freq = exchangeable_tail_experiment(cfg.tail_m, cfg.replicates, stream());
    const auto ctrl = exchangeable_tail_experiment(cfg.tail_m, cfg.replicates, stream(), true);
    RowMaker row{cfg, sub, seconds_since(t0), {{"m", static_cast<double>(cfg.tail_m)}}};
    for (int s = 1; s <= cfg.tail_m; ++s) {
      const double bound = exchangeable_tail_bound(cfg.tail_m, s);
      const auto si = static_cast<std::size_t>(s);
      const double se = std::sqrt(freq[si] * (1 - freq[si]) / cfg.replicates);
      out.rows.push_back(row("exchangeable_tail", freq[si], se, cfg.replicates,
                             {{"s", s}, {"bound", bound},
                              {"pass", freq[si] <= bound + 3 * se ? 1.0 : 0.0}}));
      out.rows.push_back(row("exchangeable_tail_negative_control", ctrl[si], 0, cfg.replicates,
                             {{"s", s}, {"bound", bound},
                              {"pass", ctrl[si] <= bound ? 1.0 : 0.0}}));
    }
    ++sub;
  }
  // Intersection tail, and an unscaled threshold m m2 / n as control.
  {
    const auto t0 = Clock::now();
    const auto t = intersection_tail_experiment(cfg.subset_n, cfg.subset_m, cfg.subset_m2,
                                                cfg.epsilon, cfg.replicates, stream());
    const double bare = static_cast<double>(cfg.subset_m) *
                        static_cast<double>(cfg.subset_m2) /
                        static_cast<double>(cfg.subset_n);
    const auto c = intersection_tail_experiment(cfg.subset_n, cfg.subset_m, cfg.subset_m2,
                                                cfg.epsilon, cfg.replicates, stream(), bare);
    RowMaker row{cfg, sub, seconds_since(t0),
                 {{"n", static_cast<double>(cfg.subset_n)},
                  {"m", static_cast<double>(cfg.subset_m)},
                  {"m2", static_cast<double>(cfg.subset_m2)},
                  {"epsilon", cfg.epsilon}}};
    out.rows.push_back(row("intersection_tail", t.frequency, t.standard_error, t.replicates,
                           {{"bound", t.bound},
                            {"threshold", intersection_threshold(cfg.subset_n, cfg.subset_m,
                                                                 cfg.subset_m2, cfg.epsilon)},
                            {"pass", t.frequency <= t.bound + 3 * t.standard_error ? 1.0 : 0.0}}));
    out.rows.push_back(row("intersection_tail_negative_control", c.frequency, c.standard_error,
                           c.replicates,
                           {{"bound", c.bound}, {"threshold", bare},
                            {"pass", c.frequency <= c.bound + 3 * c.standard_error ? 1.0 : 0.0}}));
    ++sub;
  }
  // Region bound on every grid n; identical trees at coefficient 1 as control.
  for (int n : cfg.grid) {
    const auto t0 = Clock::now();
    const auto r = refined_sqrt_bound_experiment(n, cfg.epsilon, cfg.replicates,
                                                 cfg.pairs_per_tree, stream());
    const auto c = refined_sqrt_bound_experiment(n, cfg.epsilon, cfg.replicates,
                                                 cfg.pairs_per_tree, stream(), true, 1.0);
    RowMaker row{cfg, sub, seconds_since(t0),
                 {{"n", static_cast<double>(n)}, {"epsilon", cfg.epsilon},
                  {"pairs_per_tree", static_cast<double>(cfg.pairs_per_tree)}}};
    out.rows.push_back(row("region_bound_violating_fraction", r.violating_fraction, 0, r.trees,
                           {{"coefficient", refined_sqrt_coefficient()},
                            {"max_mast", static_cast<double>(r.max_mast)},
                            {"pass", r.violating_fraction <= 0.05 ? 1.0 : 0.0}}));
    out.rows.push_back(row("region_bound_negative_control", c.violating_fraction, 0, c.trees,
                           {{"coefficient", 1.0},
                            {"max_mast", static_cast<double>(c.max_mast)},
                            {"pass", c.violating_fraction <= 0.05 ? 1.0 : 0.0}}));
    ++sub;
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::mast_scaling: return run_mast_scaling(cfg);
    case ExperimentKind::cascade_stats: return run_cascade_stats(cfg);
    case ExperimentKind::coupling_check: return run_coupling_check(cfg);
    case ExperimentKind::audit_suite: return run_audit_suite(cfg);
    case ExperimentKind::bounds_suite: return run_bounds_suite(cfg);
  }
  throw DomainError("run_experiment: unknown kind");
}

// ---------------------------------------------------------------- output

namespace {

json row_json(const ExperimentRow& r) {
  json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params;
  j["statistic"] = r.statistic;
  j["value"] = r.value;
  j["standard_error"] = r.standard_error;
  j["replicates"] = r.replicates;
  j["wall_seconds"] = r.wall_seconds;
  j["seed"] = r.seed;
  j["substream"] = r.substream;
  return j;
}

}  // namespace

void write_jsonl(const ExperimentResult& r, std::ostream& out) {
  for (const auto& row : r.rows) out << row_json(row).dump() << '\n';
}

void write_csv(const ExperimentResult& r, std::ostream& out) {
  out << "experiment,statistic,value,standard_error,replicates,wall_seconds,seed,"
         "substream,params\n";
  char buf[64];
  for (const auto& row : r.rows) {
    std::string params;
    for (const auto& [k, v] : row.params) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!params.empty()) params += ';';
      params += k + '=' + buf;
    }
    out << row.experiment << ',' << row.statistic << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.value);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.standard_error);
    out << buf << ',' << row.replicates << ',';
    std::snprintf(buf, sizeof buf, "%.6f", row.wall_seconds);
    out << buf << ',' << row.seed << ',' << row.substream << ",\"" << params << "\"\n";
  }
}

}  // namespace mastlab
