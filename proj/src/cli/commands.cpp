#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "tcub/cli.hpp"
#include "tcub/errors.hpp"
#include "tcub/greeks.hpp"
#include "tcub/model_io.hpp"
#include "tcub/presets.hpp"
#include "tcub/reduction_cv.hpp"

namespace tcub {

using nlohmann::json;

namespace {

struct Options {
  std::string config, preset, payoff, out;
  std::string strategy = "grs";
  std::optional<Eigen::Index> iters;
  int q1 = 18, q2 = 24;
  std::optional<int> alpha;
  std::optional<double> A;
  std::optional<int> runs;
  std::uint64_t seed = 0;
  std::vector<int> components{0, 1, 2, 3};
  std::optional<std::uint64_t> samples;
  std::optional<int> threads;
  double scale = 1.0;
  bool parity = false;
  int asset = 0;
  int nodes = 5;
  double h = 0.1;
  bool relative_h = false;
  std::string table;
};

struct Problem {
  std::string source;
  ModelSpec model;
  PayoffSpec payoff;
  double A = 12.0;
  int alpha = 3;
};

Problem resolve(const Options& o) {
  if (!o.config.empty() && !o.preset.empty())
    throw ConfigError("give either --config or --preset, not both");
  Problem p;
  if (!o.config.empty()) {
    std::tie(p.model, p.payoff) = load_model(o.config);
    p.source = o.config;
  } else if (!o.preset.empty()) {
    const Preset& pre = find_preset(o.preset);
    p.model = pre.model;
    p.payoff = pre.payoff;
    p.A = pre.truncation;
    p.alpha = pre.alpha;
    p.source = "preset:" + pre.name;
  } else {
    throw ConfigError("a model is required: --config FILE or --preset NAME");
  }
  if (!o.payoff.empty()) p.payoff.kind = payoff_kind_from_string(o.payoff);
  if (p.payoff.kind == PayoffKind::DigitalBasket && !p.model.barriers)
    throw MissingBarriers("digital payoff requires barriers in the model");
  if (o.A) p.A = *o.A;
  if (o.alpha) p.alpha = *o.alpha;
  if (!(p.A > 0)) throw ConfigError("--A must be positive");
  if (!(o.scale > 0 && o.scale <= 1)) throw ConfigError("--scale must lie in (0, 1]");
  return p;
}

AdaptiveConfig<double> adaptive_config(const Options& o, int d, int alpha) {
  AdaptiveConfig<double> cfg;
  cfg.strategy = o.strategy == "fas" ? Strategy::FAS : Strategy::GRS;
  // FAS already tries every axis per split, so it gets d times fewer splits.
  cfg.iterations = o.iters.value_or(
      cfg.strategy == Strategy::FAS ? default_iterations(1, o.scale) : default_iterations(d, o.scale));
  cfg.q1 = o.q1;
  cfg.q2 = o.q2;
  cfg.alpha = alpha;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

json config_json(const AdaptiveConfig<double>& cfg, double A) {
  return {{"strategy", to_string(cfg.strategy)}, {"iterations", cfg.iterations},
          {"q1", cfg.q1},  {"q2", cfg.q2},
          {"alpha", cfg.alpha}, {"A", A},
          {"seed", cfg.seed}};
}

json rule_json(int d, const AdaptiveConfig<double>& cfg) {
  const auto rules = RulePair<double>::from_cache(d, cfg);
  return {{"M_q1", rules.coarse->size()},
          {"M_q2", rules.fine->size()},
          {"kappa_q1", rules.coarse->condition_number},
          {"kappa_q2", rules.fine->condition_number}};
}

json header(const std::string& command, const Problem& p) {
  return {{"command", command}, {"source", p.source}, {"model", model_to_json(p.model, p.payoff)}};
}

json price_block(const Problem& p, const PayoffSpec& payoff, const AdaptiveConfig<double>& cfg,
                 int runs) {
  if (runs >= 2) {
    const auto st = price_replications(p.model, payoff, p.A, cfg, runs);
    return {{"price", st.mean}, {"mean", st.mean},      {"median", st.median},
            {"std", st.std_dev}, {"per_run", st.per_run}, {"runs", runs},
            {"eval_count", st.eval_count}};
  }
  const auto res = integrate_price(p.model, payoff, p.A, cfg);
  const double disc = p.model.discount();
  return {{"price", disc * res.estimate},
          {"error_indicator", disc * res.total_indicator},
          {"eval_count", res.eval_count},
          {"regions", res.mesh.size()}};
}

json cmd_price(const Options& o) {
  const Problem p = resolve(o);
  const auto cfg = adaptive_config(o, p.model.d, p.alpha);
  const int runs = o.runs.value_or(1);
  if (runs < 1) throw ConfigError("--runs must be >= 1");
  if (runs >= 2 && cfg.strategy != Strategy::GRS)
    throw ConfigError("--runs >= 2 requires --strategy grs");
  json doc = header("price", p);
  doc["config"] = config_json(cfg, p.A);
  doc["rules"] = rule_json(p.model.d, cfg);
  doc["result"] = price_block(p, p.payoff, cfg, runs);
  const bool vanilla =
      p.payoff.kind == PayoffKind::BasketCall || p.payoff.kind == PayoffKind::BasketPut;
  if (p.model.d == 1 && vanilla) doc["closed_form"] = bs_closed_form_1d(p.model, p.payoff);
  if (o.parity) {
    if (!vanilla) throw ConfigError("--parity needs a basket call or put payoff");
    const bool call = p.payoff.kind == PayoffKind::BasketCall;
    const PayoffSpec other{call ? PayoffKind::BasketPut : PayoffKind::BasketCall};
    json ob = price_block(p, other, cfg, runs);
    const double V = call ? doc["result"]["price"].get<double>() : ob["price"].get<double>();
    const double U = call ? ob["price"].get<double>() : doc["result"]["price"].get<double>();
    doc["parity"] = {{"call", V}, {"put", U}, {"residual", parity_residual(V, U, p.model)},
                     {"complement", ob}};
  }
  return doc;
}

json cmd_delta(const Options& o) {
  const Problem p = resolve(o);
  DeltaConfig dc;
  dc.asset_index = o.asset;
  dc.nodes = o.nodes;
  dc.h = o.h;
  dc.relative_window = o.relative_h;
  dc.truncation = p.A;
  dc.pricing = adaptive_config(o, p.model.d, p.alpha);
  dc.validate(p.model.d);
  const auto prices = delta_node_prices(p.model, p.payoff, dc);
  const double hw = dc.half_width(p.model.spots[o.asset]);
  json doc = header("delta", p);
  doc["config"] = config_json(dc.pricing, p.A);
  doc["asset"] = o.asset;
  doc["nodes"] = o.nodes;
  doc["h"] = o.h;
  doc["window"] = o.relative_h ? "relative" : "absolute";
  doc["node_spots"] = tcheb_nodes(p.model.spots[o.asset], hw, o.nodes);
  doc["node_prices"] = prices;
  doc["delta"] = tcheb_interp_derivative(prices, hw);
  const bool vanilla =
      p.payoff.kind == PayoffKind::BasketCall || p.payoff.kind == PayoffKind::BasketPut;
  if (p.model.d == 1 && vanilla) doc["closed_form_delta"] = bs_delta_1d(p.model, p.payoff);
  if (o.samples) {
    const auto fd = delta_mc_fd(p.model, p.payoff, o.asset, *o.samples, o.seed);
    doc["mc_fd"] = {{"delta", fd.value}, {"ci95", fd.ci_half_width}, {"step", fd.step},
                    {"samples", *o.samples}};
  }
  return doc;
}

json cmd_cv(const Options& o) {
  const Problem p = resolve(o);
  const PCAModel pca = build_pca(p.model);
  const std::uint64_t n = o.samples.value_or(100000);
  json doc = header("cv", p);
  doc["samples"] = n;
  doc["seed"] = o.seed;
  doc["eigenvalues"] = std::vector<double>(pca.eigvals.data(), pca.eigvals.data() + pca.dim());
  json rows = json::array();
  for (int l : o.components) {
    if (l < 0 || l > p.model.d)
      throw ConfigError("--components: l=" + std::to_string(l) + " outside [0, d]");
    const auto cfg = adaptive_config(o, std::max(l, 1), p.alpha);
    const auto cv = cv_estimator(pca, p.model, p.payoff, l, n, o.seed, p.A, cfg);
    rows.push_back({{"l", l},
                    {"value", cv.value},
                    {"ci95", cv.ci_half_width},
                    {"control_value", cv.control_value},
                    {"control_evals", cv.control_evals},
                    {"control_iterations", l == 0 ? 0 : cfg.iterations},
                    {"explained_variance", pca.explained_variance(l)},
                    {"variance_ratio", cv.variance_ratio},
                    {"crude_value", cv.crude_value},
                    {"crude_ci95", cv.crude_ci_half_width}});
  }
  doc["estimates"] = rows;
  return doc;
}

void cmd_mesh(const Options& o, std::ostream& out) {
  const Problem p = resolve(o);
  const auto cfg = adaptive_config(o, p.model.d, p.alpha);
  const auto res = integrate_price(p.model, p.payoff, p.A, cfg);
  if (o.out.empty())
    write_mesh_csv(res, out);
  else
    export_mesh(res, o.out);
}

json cmd_table(const Options& o, std::ostream& log) {
  TableOptions t;
  t.scale = o.scale;
  t.seed = o.seed;
  t.runs = o.runs.value_or(10);
  t.iterations = o.iters;
  t.samples = o.samples;
  return run_table(o.table, t, log);
}

void emit(const json& doc, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error("cannot open '" + o.out + "' for writing");
  f << doc.dump(2) << '\n';
  if (!f) throw Error("failed writing '" + o.out + "'");
}

void apply_threads(const Options& o) {
  std::optional<int> n = o.threads;
  if (!n) {
    if (const char* env = std::getenv("CUBATURE_THREADS"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (*end != '\0') throw ConfigError("CUBATURE_THREADS must be an integer");
      n = static_cast<int>(v);
    }
  }
  if (!n) return;
  if (*n < 1) throw ConfigError("thread count must be >= 1");
  omp_set_num_threads(*n);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive Tchebychef cubature for basket option pricing", "tcub"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--config", o.config, "Model JSON file")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "Built-in model (bs1d, t1-k1..t4-k2, ex1..ex20)");
  app.add_option("--payoff", o.payoff, "Override payoff: basket_call, basket_put, digital_basket, put_on_min");
  app.add_option("--strategy", o.strategy, "Splitting strategy")
      ->check(CLI::IsMember({"fas", "grs"}));
  app.add_option("--iters", o.iters, "Number of splits N (default 2000 d scale for GRS, 2000 scale for FAS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--q1", o.q1, "Coarse level q1")->check(CLI::PositiveNumber);
  app.add_option("--q2", o.q2, "Fine level q2 > q1")->check(CLI::PositiveNumber);
  app.add_option("--alpha", o.alpha, "Points per basis function (M = alpha L + 2^d)")
      ->check(CLI::PositiveNumber);
  app.add_option("--A", o.A, "Truncation half-width of [-A, A]^d");
  app.add_option("--runs", o.runs, "GRS replications (price: mean/median/std over runs; table: default 10)");
  app.add_option("--seed", o.seed, "Base seed (run i uses seed + i)");
  app.add_option("--components", o.components, "Retained PCA components for cv, e.g. 0,1,2,3")
      ->delimiter(',');
  app.add_option("--samples", o.samples, "Monte Carlo samples (cv default 100000; delta enables MC finite differences)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Write the result to this file instead of stdout");
  app.add_option("--threads", o.threads, "Worker threads (fallback: CUBATURE_THREADS)");
  app.add_option("--scale", o.scale, "Scale factor in (0, 1] for default iteration and sample counts");
  app.add_flag("--parity", o.parity, "price: also price the complementary call/put and report the parity residual");
  app.add_option("--asset", o.asset, "delta: asset index (0-based)");
  app.add_option("--nodes", o.nodes, "delta: interpolation nodes m");
  app.add_option("--hw", o.h, "delta: half-width h of the spot window (default 0.1)");
  app.add_flag("--relative-hw", o.relative_h, "delta: window x0 (1 +- h) instead of x0 +- h");

  auto* price = app.add_subcommand("price", "Price an option by adaptive cubature")->fallthrough();
  auto* delta = app.add_subcommand("delta", "Delta by Tchebychef interpolation of prices")->fallthrough();
  auto* cv = app.add_subcommand("cv", "PCA control-variate Monte Carlo")->fallthrough();
  auto* mesh = app.add_subcommand("mesh", "Export the final adaptive mesh as CSV")->fallthrough();
  auto* table = app.add_subcommand("table", "Run a benchmark table (t1..t13)")->fallthrough();
  table->add_option("id", o.table, "Table id")->required();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    apply_threads(o);
    if (price->parsed()) emit(cmd_price(o), o, out);
    else if (delta->parsed()) emit(cmd_delta(o), o, out);
    else if (cv->parsed()) emit(cmd_cv(o), o, out);
    else if (mesh->parsed()) cmd_mesh(o, out);
    else if (table->parsed()) emit(cmd_table(o, err), o, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tcub
