#pragma once

// Command-line front end. Every run prints a JSON envelope
//
//   {"schema_version": 1, "command": ..., "config": {...}, "result": {...}}
//
// or, with --format csv, a "# config <json>" line followed by a CSV table.
// The config echo holds every parameter (seed included) needed to rerun.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secretnet/secretnet.hpp"

namespace secretnet::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitValidation = 2;

// Reference thresholds used for the window verdicts.
inline constexpr double kHoneycombThreshold = 0.6527;
inline constexpr double kTriangularThreshold = 0.3473;

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  json params = json::object();
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("malformed probability vector '" + text + "'");
    }
    require(used == item.size(), "malformed probability vector '" + text + "'");
    out.push_back(v);
  }
  require(!out.empty(), "empty probability vector");
  return out;
}

inline std::string table_name(const std::array<int, 4>& t) {
  std::string s;
  for (int b : t) s += static_cast<char>('0' + b);
  return s;
}

inline void emit(const RunConfig& cfg, const json& result, const Table& table, std::ostream& out) {
  json config = cfg.params;
  config["seed"] = cfg.seed;
  config["threads"] = cfg.threads;
  config["format"] = cfg.format;
  std::ostringstream body;
  if (cfg.format == "csv") {
    json echo{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"config", config}};
    body << "# config " << echo.dump() << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) body << (i ? "," : "") << table.header[i];
    body << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << row[i];
      body << '\n';
    }
  } else {
    json doc{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"config", config}, {"result", result}};
    body << doc.dump(2) << '\n';
  }
  if (cfg.out_path.empty()) {
    out << body.str();
  } else {
    std::ofstream file(cfg.out_path);
    require(static_cast<bool>(file), "cannot open output file " + cfg.out_path);
    file << body.str();
  }
}

}  // namespace detail

inline void cmd_convert(const RunConfig& cfg, std::optional<double> p, const std::string& from_text,
                        const std::string& to_text, std::ostream& out) {
  require(p.has_value() != !from_text.empty(), "convert needs exactly one of --p or --from");
  const SecretState from = p ? BiasedLink(*p).state() : SecretState(detail::parse_vector(from_text));
  const SecretState to = to_text.empty() ? SecretState::sbit() : SecretState(detail::parse_vector(to_text));
  const double value = conversion_probability(from, to);
  const bool deterministic = majorizes(to, from);
  const std::vector<double> from_v(from.probs().begin(), from.probs().end());
  const std::vector<double> to_v(to.probs().begin(), to.probs().end());
  json result{{"from", from_v}, {"to", to_v}, {"conversion_probability", value}, {"target_majorizes_source", deterministic}};
  Table table{{"metric", "value"},
              {{"conversion_probability", detail::num(value)}, {"target_majorizes_source", deterministic ? "1" : "0"}}};
  detail::emit(cfg, result, table, out);
}

inline void cmd_chain(const RunConfig& cfg, int n, double p, std::uint64_t simulate_trials, std::ostream& out) {
  const chain::ChainSpec spec(n, p);
  const double exact = chain::exact_success_probability(spec);
  const double bound = chain::success_upper_bound(spec);
  const double naive = chain::naive_success_probability(spec);
  json result{{"exact", exact}, {"upper_bound", bound}, {"naive", naive}};
  Table table{{"metric", "value", "standard_error"},
              {{"exact", detail::num(exact), ""}, {"upper_bound", detail::num(bound), ""}, {"naive", detail::num(naive), ""}}};
  if (simulate_trials > 0) {
    const auto sim = chain::simulate(spec, simulate_trials, cfg.seed, cfg.threads);
    result["simulated"] = {{"frequency", sim.frequency}, {"standard_error", sim.standard_error}, {"trials", sim.trials}};
    table.rows.push_back({"simulated", detail::num(sim.frequency), detail::num(sim.standard_error)});
  }
  detail::emit(cfg, result, table, out);
}

inline void cmd_percolate(const RunConfig& cfg, const std::string& family_name, int size, std::optional<double> p_edge,
                          std::optional<double> p, const std::string& strategy, std::optional<int> multiplicity,
                          std::uint64_t trials, const std::string& export_path, std::ostream& out) {
  using namespace lattice;
  require(p_edge.has_value() != p.has_value(), "percolate needs exactly one of --p-edge or --p");
  const Family family = family_from_string(family_name);
  NetworkGraph g;
  if (p_edge) {
    g = with_open_probability(build_family(family, size), *p_edge);
  } else if (strategy == "naive") {
    const int m = multiplicity.value_or(family == Family::honeycomb ? 2 : 1);
    g = with_naive_strategy(build_family(family, size, m), *p);
  } else if (strategy == "transformed") {
    require(family == Family::honeycomb, "the transformed strategy starts from a honeycomb lattice");
    g = transform_to_triangular(build_family(family, size, 2), *p);
  } else {
    throw ValidationError("unknown strategy '" + strategy + "' (expected naive or transformed)");
  }
  if (!export_path.empty()) {
    std::ofstream file(export_path);
    require(static_cast<bool>(file), "cannot open graph export file " + export_path);
    write_graph_text(file, g);
  }
  std::vector<ClusterStats> per_trial;
  const auto res = crossing_with_clusters(g, trials, cfg.seed, cfg.threads, &per_trial);
  json result{{"node_count", g.node_count()},
              {"edge_count", g.edge_count()},
              {"edge_probability", g.edges().front().open_probability.value()},
              {"crossing_frequency", res.frequency},
              {"standard_error", res.standard_error},
              {"mean_largest_fraction", res.mean_largest_fraction}};
  Table table{{"trial", "spanning", "largest_fraction", "clusters"}, {}};
  for (std::size_t t = 0; t < per_trial.size(); ++t)
    table.rows.push_back({std::to_string(t), per_trial[t].spanning ? "1" : "0",
                          detail::num(per_trial[t].largest_fraction), std::to_string(per_trial[t].sizes.size())});
  detail::emit(cfg, result, table, out);
}

inline void cmd_threshold(const RunConfig& cfg, const std::string& family_name, const std::vector<int>& sizes,
                          std::uint64_t trials, std::ostream& out) {
  using namespace lattice;
  const auto est = estimate_threshold(family_from_string(family_name), sizes, trials, cfg.seed, cfg.threads);
  json sweep = json::array();
  Table table{{"size", "p", "crossing"}, {}};
  for (const auto& pt : est.sweep) {
    sweep.push_back({{"size", pt.size}, {"p", pt.p}, {"crossing", pt.crossing}});
    table.rows.push_back({std::to_string(pt.size), detail::num(pt.p), detail::num(pt.crossing)});
  }
  json crossings = json::array();
  for (const auto& [size, p] : est.size_crossings) crossings.push_back({{"size", size}, {"p", p}});
  json result{{"p_c_hat", est.p_c_hat}, {"half_width", est.half_width}, {"sizes", est.sizes},
              {"trials", est.trials},   {"size_crossings", crossings},   {"sweep", sweep}};
  detail::emit(cfg, result, table, out);
}

inline void cmd_window(const RunConfig& cfg, double p, const std::vector<int>& sizes, std::uint64_t trials,
                       std::ostream& out) {
  using namespace lattice;
  require(!sizes.empty(), "window needs at least one size");
  const double naive_prob = naive_edge_probability(p, 2);
  const double transformed_prob = otp_success(BiasedLink(p), BiasedLink(p));
  json rows = json::array();
  Table table{{"size", "naive_crossing", "naive_se", "transformed_crossing", "transformed_se", "gap"}, {}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto row = window_comparison(p, sizes[i], trials, cfg.seed + i, cfg.threads);
    rows.push_back({{"size", row.size},
                    {"naive_crossing", row.naive.frequency},
                    {"naive_standard_error", row.naive.standard_error},
                    {"transformed_crossing", row.transformed.frequency},
                    {"transformed_standard_error", row.transformed.standard_error},
                    {"gap", row.gap()}});
    table.rows.push_back({std::to_string(row.size), detail::num(row.naive.frequency),
                          detail::num(row.naive.standard_error), detail::num(row.transformed.frequency),
                          detail::num(row.transformed.standard_error), detail::num(row.gap())});
  }
  json result{{"naive_edge_probability", naive_prob},
              {"transformed_edge_probability", transformed_prob},
              {"naive_percolates", naive_prob > kHoneycombThreshold},
              {"transformed_percolates", transformed_prob > kTriangularThreshold},
              {"rows", rows}};
  detail::emit(cfg, result, table, out);
}

inline void cmd_verify(const RunConfig& cfg, int n, const std::string& p_text, std::ostream& out) {
  using namespace oracle;
  const Rational p = parse_rational(p_text);
  const auto chain_run = enumerate_chain(n, p);
  const auto secrecy = verify_secrecy(chain_run.joint);
  const double exact_float = to_double(chain_run.success_probability);
  const double closed_form = chain::exact_success_probability(chain::ChainSpec(n, to_double(p)));
  const auto xor_report = xor_uniqueness_check(p);
  json survivors = json::array();
  for (const auto& t : xor_report.survivors) survivors.push_back(detail::table_name(t));
  const auto merge = enumerate_parallel_or_merge(p);
  const Rational q = Rational(1) - p;
  const auto search = exhaustive_strategy_search({q * q, p * q, q * p, p * p});

  json result{
      {"chain",
       {{"links", n},
        {"exact", to_string(chain_run.success_probability)},
        {"exact_float", exact_float},
        {"closed_form", closed_form},
        {"abs_difference", std::abs(exact_float - closed_form)},
        {"weight_total", to_string(chain_run.joint.total_weight())},
        {"secret", secrecy.secret},
        {"max_bias", to_string(secrecy.max_bias)}}},
      {"xor_uniqueness", {{"survivors", survivors}, {"degenerate", xor_report.degenerate}}},
      {"parallel_or_merge",
       {{"success", to_string(merge.success_probability())}, {"secret", verify_secrecy(merge).secret}}},
      {"strategy_search", {{"best", to_string(search.best)}, {"labelings_checked", search.labelings_checked}}}};
  Table table{{"metric", "value"},
              {{"exact", to_string(chain_run.success_probability)},
               {"exact_float", detail::num(exact_float)},
               {"closed_form", detail::num(closed_form)},
               {"secret", secrecy.secret ? "1" : "0"},
               {"max_bias", to_string(secrecy.max_bias)}}};
  detail::emit(cfg, result, table, out);
}

/// Parses and runs one command line. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-key network protocols and percolation experiments"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed (default 1)");
    sub->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores (output does not depend on it)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
  };

  std::optional<double> p_opt;
  std::optional<double> p_edge;
  std::optional<int> multiplicity;
  std::string from_text, to_text, family = "triangular", strategy = "naive", export_path, p_text = "1/4";
  int n = 3, size = 64;
  double p = 0.25;
  std::uint64_t trials = 0, simulate_trials = 0;
  std::vector<int> sizes{32, 64, 128};

  auto* convert = app.add_subcommand("convert", "Optimal conversion probability between pure secret states");
  convert->add_option("--p", p_opt, "Bias of a single link (target defaults to one sbit)");
  convert->add_option("--from", from_text, "Source probability vector, comma separated");
  convert->add_option("--to", to_text, "Target probability vector (default 0.5,0.5)");
  add_common(convert);

  auto* chain_cmd = app.add_subcommand("chain", "XOR relay chain: exact, bound, naive, simulated");
  chain_cmd->add_option("--n", n, "Number of links")->required();
  chain_cmd->add_option("--p", p, "Link bias")->required();
  chain_cmd->add_option("--simulate", simulate_trials, "Also simulate with this many trials");
  add_common(chain_cmd);

  auto* percolate = app.add_subcommand("percolate", "Left-right crossing frequency on one lattice");
  percolate->add_option("--family", family, "square, triangular or honeycomb");
  percolate->add_option("--L", size, "Linear size");
  percolate->add_option("--p-edge", p_edge, "Open probability of every edge");
  percolate->add_option("--p", p_opt, "Link bias, edge probability from --strategy");
  percolate->add_option("--strategy", strategy, "naive or transformed (with --p)");
  percolate->add_option("--multiplicity", multiplicity, "Links per bundle for the naive strategy");
  percolate->add_option("--trials", trials, "Samples (default 1000)");
  percolate->add_option("--export-graph", export_path, "Write the sampled graph in the text export format");
  add_common(percolate);

  auto* threshold = app.add_subcommand("threshold", "Bond-percolation threshold estimate");
  threshold->add_option("--family", family, "square, triangular or honeycomb");
  threshold->add_option("--sizes", sizes, "Linear sizes")->delimiter(',');
  threshold->add_option("--trials", trials, "Sweeps per size (default 20000)");
  add_common(threshold);

  auto* window = app.add_subcommand("window", "Naive honeycomb vs transformed triangular crossing");
  window->add_option("--p", p, "Link bias")->required();
  window->add_option("--sizes", sizes, "Linear sizes")->delimiter(',');
  window->add_option("--trials", trials, "Samples per strategy and size (default 10000)");
  add_common(window);

  auto* verify = app.add_subcommand("verify", "Exact rational verification of the relay protocols");
  verify->add_option("--n", n, "Chain links (at most 16)");
  verify->add_option("--p", p_text, "Link bias as num/den");
  add_common(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (convert->parsed()) {
      cfg.command = "convert";
      if (p_opt) cfg.params["p"] = *p_opt;
      if (!from_text.empty()) cfg.params["from"] = from_text;
      cfg.params["to"] = to_text.empty() ? "0.5,0.5" : to_text;
      cmd_convert(cfg, p_opt, from_text, to_text, out);
    } else if (chain_cmd->parsed()) {
      cfg.command = "chain";
      cfg.params = {{"n", n}, {"p", p}, {"simulate", simulate_trials}};
      cmd_chain(cfg, n, p, simulate_trials, out);
    } else if (percolate->parsed()) {
      cfg.command = "percolate";
      if (trials == 0) trials = 1000;
      cfg.params = {{"family", family}, {"L", size}, {"trials", trials}};
      if (p_edge) cfg.params["p_edge"] = *p_edge;
      if (p_opt) {
        cfg.params["p"] = *p_opt;
        cfg.params["strategy"] = strategy;
      }
      if (multiplicity) cfg.params["multiplicity"] = *multiplicity;
      cmd_percolate(cfg, family, size, p_edge, p_opt, strategy, multiplicity, trials, export_path, out);
    } else if (threshold->parsed()) {
      cfg.command = "threshold";
      if (trials == 0) trials = 20000;
      cfg.params = {{"family", family}, {"sizes", sizes}, {"trials", trials}};
      cmd_threshold(cfg, family, sizes, trials, out);
    } else if (window->parsed()) {
      cfg.command = "window";
      if (trials == 0) trials = 10000;
      cfg.params = {{"p", p}, {"sizes", sizes}, {"trials", trials}};
      cmd_window(cfg, p, sizes, trials, out);
    } else if (verify->parsed()) {
      cfg.command = "verify";
      cfg.params = {{"n", n}, {"p", p_text}};
      cmd_verify(cfg, n, p_text, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace secretnet::cli
