#include "cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "unidemand/anchoring.hpp"
#include "unidemand/discretization.hpp"
#include "unidemand/errors.hpp"
#include "unidemand/instance_json.hpp"
#include "unidemand/oracle.hpp"
#include "unidemand/pipeline.hpp"
#include "unidemand/reductions.hpp"
#include "unidemand/report_json.hpp"

namespace unidemand::cli {
namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty entry in list \"" + text + "\"");
    parts.push_back(part.substr(b, e - b + 1));
  }
  if (parts.empty()) throw InputError("empty list");
  return parts;
}

std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> grid;
  for (const auto& p : split_list(text)) grid.push_back(parse_rational(p));
  return grid;
}

PriceVector parse_prices(const std::string& text) {
  PriceVector prices;
  for (const auto& p : split_list(text)) {
    if (p == "inf" || p == "+inf") {
      prices.push_back(Price::infinity());
    } else {
      try {
        prices.emplace_back(parse_rational(p));
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
    }
  }
  return prices;
}

std::string tuple_text(const PriceVector& prices) {
  std::string out = "(";
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (i > 0) out += ",";
    out += prices[i].is_infinite() ? "inf" : shortest_decimal(to_double(prices[i].value()));
  }
  return out + ")";
}

void emit(const json& document, const std::string& path, std::ostream& out) {
  const std::string text = document.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

// Options shared by several subcommands.
struct Common {
  std::string instance_path;
  std::string tie_break;
  std::string out_path;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100'000;
};

Instance load(const Common& common) {
  Instance instance = load_instance_file(common.instance_path);
  if (!common.tie_break.empty()) instance.tie_break = parse_tie_break(common.tie_break);
  return instance;
}

struct DiscretizeFlags {
  std::string delta;
  std::string price_eps;
  std::string schedule = "practical";

  DiscretizationOptions options() const {
    DiscretizationOptions o;
    if (schedule == "theorem") {
      o.schedule = Schedule::Theorem;
    } else if (schedule != "practical") {
      throw InputError("--schedule must be practical or theorem");
    }
    if (!delta.empty()) o.delta = parse_rational(delta);
    if (!price_eps.empty()) o.price_eps = parse_rational(price_eps);
    return o;
  }
};

void add_common(CLI::App* app, Common& common, bool with_sampling) {
  app->add_option("instance", common.instance_path, "Instance JSON file")->required();
  app->add_option("--tie-break", common.tie_break, "lowest or highest (overrides the file)");
  app->add_option("--out", common.out_path, "Write the JSON report here instead of stdout");
  if (with_sampling) {
    app->add_option("--seed", common.seed, "Monte-Carlo seed");
    app->add_option("--samples", common.samples, "Monte-Carlo sample count");
  }
}

void add_discretize_flags(CLI::App* app, DiscretizeFlags& flags) {
  app->add_option("--delta", flags.delta, "Override the horizontal discretization delta");
  app->add_option("--price-eps", flags.price_eps, "Override the price-grid eps'");
  app->add_option("--schedule", flags.schedule, "practical (default) or theorem");
}

// Anchors and truncates a tagged instance; untagged instances pass through.
Instance anchored_and_truncated(const Instance& instance, double eps, json& provenance) {
  if (instance.value_class == ValueClass::Mhr) {
    const MhrAnchor anchor = beta_mhr(instance);
    provenance["anchor"] = to_json(anchor);
    return truncate_values_mhr(instance, anchor.beta, eps);
  }
  if (instance.value_class == ValueClass::Regular) {
    const RegularAnchor anchor = alpha_regular(instance);
    provenance["anchor"] = to_json(anchor);
    return truncate_values_regular(instance, anchor.alpha, eps);
  }
  return instance;
}

struct CompareRow {
  std::string solver;
  std::string status = "ok";
  std::optional<double> revenue;
  std::string exact;
  std::string prices;
};

CompareRow compare_row(const std::string& name, const Instance& instance, SolveOptions options) {
  CompareRow row;
  row.solver = name;
  try {
    const SolveReport report = solve(instance, options);
    row.prices = tuple_text(report.prices);
    if (report.exact_revenue) {
      row.revenue = to_double(*report.exact_revenue);
      row.exact = to_string(*report.exact_revenue);
    } else if (report.estimate) {
      row.revenue = report.estimate->mean;
    }
    if (!report.mode.empty() && report.mode != "FastPath") row.status = report.mode;
  } catch (const ResourceError& e) {
    row.status = std::string("resource limit: ") + e.what();
  } catch (const Error& e) {
    row.status = std::string("n/a: ") + e.what();
  }
  return row;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit-demand pricing solver"};
  app.require_subcommand(1);

  Common common;
  DiscretizeFlags disc;
  double eps = 0.25;

  // solve
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run a solver and write a report");
  add_common(solve_cmd, common, true);
  add_discretize_flags(solve_cmd, disc);
  std::string solver = "dp";
  std::size_t state_cap = 5'000'000;
  std::int64_t m_override = 0;
  std::string solve_grid;
  bool force_fast_path = false;
  double eps_prime = 0.0;
  solve_cmd->add_option("--epsilon", eps, "Approximation parameter");
  solve_cmd->add_option("--solver", solver, "dp, brute or iid");
  solve_cmd->add_option("--state-cap", state_cap, "Maximum DP states per layer");
  solve_cmd->add_option("--m-override", m_override, "Use m instead of ceil(n r); M = m^3");
  solve_cmd->add_option("--grid", solve_grid, "Price set for --solver brute");
  solve_cmd->add_flag("--force-fast-path", force_fast_path,
                      "i.i.d. solver: skip the n threshold test");
  solve_cmd->add_option("--eps-prime", eps_prime, "i.i.d. solver: override eps' = eps/12");

  // brute
  CLI::App* brute_cmd = app.add_subcommand("brute", "Exhaustive search over a price grid");
  add_common(brute_cmd, common, false);
  std::string brute_grid;
  brute_cmd->add_option("--grid", brute_grid, "Comma-separated price set")->required();

  // eval
  CLI::App* eval_cmd = app.add_subcommand("eval", "Expected revenue of a price vector");
  add_common(eval_cmd, common, true);
  std::string eval_prices;
  eval_cmd->add_option("--prices", eval_prices, "Comma-separated prices (inf allowed)")
      ->required();

  // discretize
  CLI::App* disc_cmd = app.add_subcommand("discretize", "Write the restricted instance");
  add_common(disc_cmd, common, false);
  add_discretize_flags(disc_cmd, disc);
  disc_cmd->add_option("--epsilon", eps, "Approximation parameter");

  // verify-anchors
  CLI::App* verify_cmd = app.add_subcommand("verify-anchors", "Check the anchor guarantees");
  add_common(verify_cmd, common, true);
  double verify_eps = 0.1;
  verify_cmd->add_option("--epsilon", verify_eps, "eps of the tail checks");

  // compare
  CLI::App* compare_cmd = app.add_subcommand("compare", "dp vs brute vs iid gap table");
  add_common(compare_cmd, common, true);
  add_discretize_flags(compare_cmd, disc);
  std::string compare_grid;
  std::string csv_path;
  compare_cmd->add_option("--epsilon", eps, "Approximation parameter");
  compare_cmd->add_option("--grid", compare_grid, "Price set for brute force");
  compare_cmd->add_option("--csv", csv_path, "Write the CSV gap table here");
  compare_cmd->add_option("--state-cap", state_cap, "Maximum DP states per layer");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve_cmd) {
      SolveOptions options;
      options.eps = eps;
      options.solver = parse_solver(solver);
      options.state_cap = state_cap;
      if (m_override > 0) options.m_override = m_override;
      options.seed = common.seed;
      options.samples = common.samples;
      options.discretization = disc.options();
      if (!solve_grid.empty()) options.brute_grid = parse_grid(solve_grid);
      options.iid.force_fast_path = force_fast_path;
      if (eps_prime > 0) options.iid.eps_prime = eps_prime;
      const SolveReport report = solve(load(common), options);
      emit(to_json(report), common.out_path, out);
    } else if (*brute_cmd) {
      const Instance instance = load(common);
      const BruteForceResult best =
          brute_force_optimum(instance, parse_grid(brute_grid), instance.tie_break);
      json report = {{"prices", prices_json(best.prices)},
                     {"vector", tuple_text(best.prices)},
                     {"revenue", rational_json(best.revenue)},
                     {"revenue_decimal", to_double(best.revenue)},
                     {"vectors", best.vectors},
                     {"tie_break", to_string(instance.tie_break)}};
      emit(report, common.out_path, out);
    } else if (*eval_cmd) {
      const Instance instance = load(common);
      const PriceVector prices = parse_prices(eval_prices);
      SolveReport report;
      evaluate(instance, prices, common.samples, common.seed, report);
      json document = {{"prices", prices_json(prices)},
                       {"tie_break", to_string(instance.tie_break)}};
      if (report.exact_revenue) {
        document["exact_revenue"] = rational_json(*report.exact_revenue);
        document["exact_revenue_decimal"] = to_double(*report.exact_revenue);
      } else {
        document["exact_revenue"] = nullptr;
        document["monte_carlo_revenue"] = estimate_json(*report.estimate);
        document["seed"] = common.seed;
      }
      emit(document, common.out_path, out);
    } else if (*disc_cmd) {
      const Instance instance = load(common);
      json provenance;
      const Instance working = anchored_and_truncated(instance, eps, provenance);
      const DiscretizationOptions options = disc.options();
      const DiscretizationPlan plan = plan_discretization(working, eps, options);
      json document;
      try {
        document = to_json(discretize_with_plan(working, plan, options.limits));
      } catch (const ResourceError&) {
        // Report the formula sizes of the refused grids before failing.
        err << to_json(plan).dump(2) << "\n";
        throw;
      }
      if (!provenance.is_null()) document["provenance"]["anchor"] = provenance["anchor"];
      emit(document, common.out_path, out);
    } else if (*verify_cmd) {
      const Instance instance = load(common);
      json document;
      if (instance.value_class == ValueClass::Mhr) {
        const MhrAnchor anchor = beta_mhr(instance);
        document = to_json(verify_mhr_anchor(instance, anchor, verify_eps, common.samples,
                                             common.seed));
        document["beta"] = rational_json(anchor.beta);
        document["beta_decimal"] = to_double(anchor.beta);
        document["rounds"] = to_json(anchor)["rounds"];
      } else if (instance.value_class == ValueClass::Regular) {
        const RegularAnchor anchor = alpha_regular(instance);
        document = to_json(verify_regular_anchor(instance, anchor, verify_eps, common.samples,
                                                 common.seed));
        document["alpha"] = rational_json(anchor.alpha);
        document["alpha_decimal"] = to_double(anchor.alpha);
      } else {
        throw InputError("verify-anchors needs a \"class\" tag (\"mhr\" or \"regular\")");
      }
      document["eps"] = verify_eps;
      document["samples"] = common.samples;
      document["seed"] = common.seed;
      emit(document, common.out_path, out);
    } else if (*compare_cmd) {
      const Instance instance = load(common);
      SolveOptions base;
      base.eps = eps;
      base.seed = common.seed;
      base.samples = common.samples;
      base.state_cap = state_cap;
      base.discretization = disc.options();
      if (!compare_grid.empty()) base.brute_grid = parse_grid(compare_grid);
      std::vector<CompareRow> rows;
      for (SolverKind kind : {SolverKind::Dp, SolverKind::Brute, SolverKind::Iid}) {
        SolveOptions options = base;
        options.solver = kind;
        rows.push_back(compare_row(to_string(kind), instance, options));
      }
      double best = 0.0;
      for (const auto& r : rows) {
        if (r.revenue) best = std::max(best, *r.revenue);
      }
      std::vector<std::array<std::string, 4>> cells = {{"solver", "revenue", "gap",
                                                        "prices / status"}};
      std::ostringstream csv;
      csv << "solver,revenue,exact_revenue,gap_to_best,prices,status\n";
      for (const auto& r : rows) {
        const std::string revenue = r.revenue ? shortest_decimal(*r.revenue) : "-";
        const std::string gap = r.revenue ? shortest_decimal(best - *r.revenue) : "-";
        cells.push_back({r.solver, revenue, gap, r.status == "ok" ? r.prices : r.status});
        csv << r.solver << "," << (r.revenue ? revenue : "") << "," << r.exact << ","
            << (r.revenue ? gap : "") << "," << csv_field(r.prices) << "," << csv_field(r.status)
            << "\n";
      }
      std::array<std::size_t, 3> width{};
      for (const auto& row : cells) {
        for (std::size_t c = 0; c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
      }
      std::ostringstream table;
      for (const auto& row : cells) {
        for (std::size_t c = 0; c < width.size(); ++c) {
          table << std::left << std::setw(static_cast<int>(width[c] + 2)) << row[c];
        }
        table << row[3] << "\n";
      }
      out << table.str();
      if (csv_path.empty()) {
        out << "\n" << csv.str();
      } else {
        std::ofstream file(csv_path, std::ios::binary);
        if (!file) throw InputError("cannot write " + csv_path);
        file << csv.str();
      }
    }
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInputError& e) {
    err << "unsupported input: " << e.what() << "\n";
    return 2;
  } catch (const AnchoringError& e) {
    err << "anchoring error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace unidemand::cli
