#include "rsp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsp/analysis.hpp"

namespace rsp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kRoot2Inv = 0.70710678118654752440;

// Shortest round-trip decimal text. The same serializer renders JSON
// numbers, so CSV and JSON reports agree byte for byte and re-serializing
// a parsed report reproduces it exactly.
std::string format_double(double v) { return ordered_json(v).dump(); }

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double_strict(const std::string& text) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw UsageError("malformed number \"" + text + "\"");
  }
  if (consumed != text.size()) {
    throw UsageError("malformed number \"" + text + "\"");
  }
  return value;
}

std::array<Amplitude, 4> parse_target_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream stream(text);
  while (std::getline(stream, current, ',')) parts.push_back(trim(current));
  if (!text.empty() && text.back() == ',') parts.push_back("");
  if (parts.size() != 4) {
    throw UsageError("--target needs exactly four comma-separated complex "
                     "coefficients, got " + std::to_string(parts.size()));
  }
  std::array<Amplitude, 4> target{};
  for (std::size_t i = 0; i < 4; ++i) {
    target[i] = parse_complex_literal(parts[i]);
  }
  return target;
}

ordered_json complex_json(const Amplitude& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json state_json(const StateVector& s) {
  ordered_json j = ordered_json::array();
  for (const Amplitude& a : s.amps()) j.push_back(complex_json(a));
  return j;
}

ordered_json target_json(const std::array<Amplitude, 4>& target) {
  ordered_json j = ordered_json::array();
  for (const Amplitude& a : target) j.push_back(complex_json(a));
  return j;
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Run:
      return "run";
    case Mode::Exact:
      return "exact";
    case Mode::Simulate:
      return "simulate";
    case Mode::Sweep:
      return "sweep";
    case Mode::Validate:
      return "validate";
  }
  return "unknown";
}

ordered_json channel_inputs(const ChannelPair& ch) {
  ordered_json j = ordered_json::object();
  j["a"] = ch.a();
  j["b"] = ch.b();
  j["c"] = ch.c();
  j["d"] = ch.d();
  return j;
}

struct ConstraintRow {
  std::string name;
  bool ok;
  double measured;
};

// Mirrors validate_target constraint by constraint so every violation is
// reported, not just the first.
std::vector<ConstraintRow> target_constraints(
    const std::array<Amplitude, 4>& t) {
  const Amplitude alpha = t[0], beta = t[1], gamma = t[2], delta = t[3];
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta) +
                                std::norm(gamma) + std::norm(delta));
  const double cross_imag = (std::conj(beta) * delta).imag();
  return {
      {"alpha-real", std::abs(alpha.imag()) <= kInputTol, alpha.imag()},
      {"gamma-real", std::abs(gamma.imag()) <= kInputTol, gamma.imag()},
      {"cross-term-real", std::abs(cross_imag) <= kInputTol, cross_imag},
      {"unit-norm", std::abs(norm - 1.0) <= 1e-6, norm},
  };
}

std::string csv_bool(bool v) { return v ? "true" : "false"; }

std::string render(const ordered_json& report, OutputFormat format,
                   const std::string& csv_text) {
  if (format == OutputFormat::Json) return report.dump(2) + "\n";
  return csv_text;
}

struct BuiltReport {
  std::string text;
  int exit_code = 0;
};

BuiltReport build_run_report(const RunConfig& config) {
  const auto& raw = *config.target;
  const TargetState target = validate_target(raw[0], raw[1], raw[2], raw[3]);
  const ChannelPair channel = ChannelPair::from_ac(config.a, config.c);
  RandomStream rng(config.seed);
  const ProtocolResult result =
      run_protocol(target, channel, rng,
                   RunOptions{config.forced_outcome, config.forced_aux});

  ordered_json report;
  report["mode"] = mode_name(config.mode);
  ordered_json inputs = ordered_json::object();
  inputs["target"] = target_json(raw);
  inputs.update(channel_inputs(channel));
  inputs["seed"] = config.seed;
  inputs["forced_outcome"] = config.forced_outcome
                                 ? ordered_json(outcome_name(*config.forced_outcome))
                                 : ordered_json(nullptr);
  inputs["forced_aux"] = config.forced_aux
                             ? ordered_json(static_cast<int>(*config.forced_aux))
                             : ordered_json(nullptr);
  report["inputs"] = inputs;

  ordered_json results = ordered_json::object();
  results["alice_outcome"] = outcome_name(result.alice_outcome);
  results["alice_probability"] = result.alice_probability;
  results["corrected"] = result.corrected;
  results["aux_outcome"] = result.aux_outcome
                               ? ordered_json(static_cast<int>(*result.aux_outcome))
                               : ordered_json(nullptr);
  results["aux_probability"] = result.aux_probability
                                   ? ordered_json(*result.aux_probability)
                                   : ordered_json(nullptr);
  results["final_bob_state"] = state_json(result.final_bob_state);
  results["fidelity_to_target"] = result.fidelity_to_target;
  results["success"] = result.success;
  report["results"] = results;

  std::ostringstream csv;
  csv << "alice_outcome,alice_probability,corrected,aux_outcome,"
         "aux_probability,fidelity_to_target,success\n";
  csv << outcome_name(result.alice_outcome) << ','
      << format_double(result.alice_probability) << ','
      << csv_bool(result.corrected) << ',';
  if (result.aux_outcome) csv << static_cast<int>(*result.aux_outcome);
  csv << ',';
  if (result.aux_probability) csv << format_double(*result.aux_probability);
  csv << ',' << format_double(result.fidelity_to_target) << ','
      << csv_bool(result.success) << '\n';

  return BuiltReport{render(report, config.format, csv.str()), 0};
}

BuiltReport build_exact_report(const RunConfig& config) {
  const auto& raw = *config.target;
  const TargetState target = validate_target(raw[0], raw[1], raw[2], raw[3]);
  const ChannelPair channel = ChannelPair::from_ac(config.a, config.c);
  const BranchReport branches = exact_branch_report(target, channel);
  const double closed = closed_form_success(channel);

  ordered_json report;
  report["mode"] = mode_name(config.mode);
  ordered_json inputs = ordered_json::object();
  inputs["target"] = target_json(raw);
  inputs.update(channel_inputs(channel));
  report["inputs"] = inputs;

  ordered_json probabilities = ordered_json::object();
  ordered_json successes = ordered_json::object();
  for (Outcome o : kAllOutcomes) {
    probabilities[outcome_name(o)] =
        branches.branch_probability[static_cast<int>(o)];
    successes[outcome_name(o)] = branches.branch_success[static_cast<int>(o)];
  }
  ordered_json results = ordered_json::object();
  results["branch_probability"] = probabilities;
  results["branch_success"] = successes;
  results["total_success"] = branches.total_success;
  results["closed_form"] = closed;
  report["results"] = results;

  std::ostringstream csv;
  csv << "p_phi,p_phi_perp,p_psi,p_psi_perp,success_phi_perp,"
         "success_psi_perp,total_success,closed_form\n";
  csv << format_double(branches.branch_probability[0]) << ','
      << format_double(branches.branch_probability[1]) << ','
      << format_double(branches.branch_probability[2]) << ','
      << format_double(branches.branch_probability[3]) << ','
      << format_double(branches.branch_success[1]) << ','
      << format_double(branches.branch_success[3]) << ','
      << format_double(branches.total_success) << ','
      << format_double(closed) << '\n';

  return BuiltReport{render(report, config.format, csv.str()), 0};
}

BuiltReport build_simulate_report(const RunConfig& config) {
  const auto& raw = *config.target;
  const TargetState target = validate_target(raw[0], raw[1], raw[2], raw[3]);
  const ChannelPair channel = ChannelPair::from_ac(config.a, config.c);
  const std::uint64_t trials = config.trials.value_or(100000);
  const MonteCarloSummary summary =
      monte_carlo(target, channel, trials, config.seed);

  ordered_json report;
  report["mode"] = mode_name(config.mode);
  ordered_json inputs = ordered_json::object();
  inputs["target"] = target_json(raw);
  inputs.update(channel_inputs(channel));
  inputs["trials"] = summary.trials;
  inputs["seed"] = summary.seed;
  report["inputs"] = inputs;

  ordered_json results = ordered_json::object();
  results["trials"] = summary.trials;
  results["successes"] = summary.successes;
  results["estimated_rate"] = summary.estimated_rate;
  results["standard_error"] = summary.standard_error;
  results["seed"] = summary.seed;
  results["closed_form"] = closed_form_success(channel);
  report["results"] = results;

  std::ostringstream csv;
  csv << "trials,successes,estimated_rate,standard_error,seed\n";
  csv << summary.trials << ',' << summary.successes << ','
      << format_double(summary.estimated_rate) << ','
      << format_double(summary.standard_error) << ',' << summary.seed << '\n';

  return BuiltReport{render(report, config.format, csv.str()), 0};
}

BuiltReport build_sweep_report(const RunConfig& config) {
  std::optional<TargetState> target;
  if (config.trials) {
    const auto& raw = *config.target;
    target = validate_target(raw[0], raw[1], raw[2], raw[3]);
  }

  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double value = static_cast<double>(i) * config.step;
    if (value > kRoot2Inv + 1e-12) break;
    grid.push_back(value);
  }

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "a,c,closed_form";
  if (config.trials) csv << ",mc_rate,mc_stderr,trials,seed";
  csv << '\n';

  std::uint64_t row_index = 0;
  for (double a : grid) {
    for (double c : grid) {
      const ChannelPair channel = ChannelPair::from_ac(a, c);
      const double closed = closed_form_success(channel);
      ordered_json row = ordered_json::object();
      row["a"] = a;
      row["c"] = c;
      row["closed_form"] = closed;
      csv << format_double(a) << ',' << format_double(c) << ','
          << format_double(closed);
      if (config.trials) {
        const MonteCarloSummary summary = monte_carlo(
            *target, channel, *config.trials, config.seed + row_index);
        row["mc_rate"] = summary.estimated_rate;
        row["mc_stderr"] = summary.standard_error;
        row["trials"] = summary.trials;
        row["seed"] = summary.seed;
        csv << ',' << format_double(summary.estimated_rate) << ','
            << format_double(summary.standard_error) << ',' << summary.trials
            << ',' << summary.seed;
      }
      csv << '\n';
      rows.push_back(row);
      ++row_index;
    }
  }

  ordered_json report;
  report["mode"] = mode_name(config.mode);
  ordered_json inputs = ordered_json::object();
  if (config.target) inputs["target"] = target_json(*config.target);
  inputs["step"] = config.step;
  if (config.trials) {
    inputs["trials"] = *config.trials;
    inputs["seed"] = config.seed;
  }
  report["inputs"] = inputs;
  report["results"] = ordered_json::object({{"rows", rows}});

  return BuiltReport{render(report, config.format, csv.str()), 0};
}

BuiltReport build_validate_report(const RunConfig& config) {
  const auto& raw = *config.target;
  const std::vector<ConstraintRow> checks = target_constraints(raw);
  const bool valid = std::all_of(checks.begin(), checks.end(),
                                 [](const ConstraintRow& c) { return c.ok; });

  ordered_json report;
  report["mode"] = mode_name(config.mode);
  ordered_json inputs = ordered_json::object();
  inputs["target"] = target_json(raw);
  report["inputs"] = inputs;

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "constraint,ok,measured\n";
  for (const ConstraintRow& check : checks) {
    ordered_json row = ordered_json::object();
    row["name"] = check.name;
    row["ok"] = check.ok;
    row["measured"] = check.measured;
    rows.push_back(row);
    csv << check.name << ',' << csv_bool(check.ok) << ','
        << format_double(check.measured) << '\n';
  }
  ordered_json results = ordered_json::object();
  results["constraints"] = rows;
  results["valid"] = valid;
  report["results"] = results;

  return BuiltReport{render(report, config.format, csv.str()), valid ? 0 : 1};
}

}  // namespace

Amplitude parse_complex_literal(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw UsageError("empty complex literal");
  if (text.back() != 'j' && text.back() != 'J') {
    return Amplitude(parse_double_strict(text), 0.0);
  }
  const std::string body = text.substr(0, text.size() - 1);
  if (body.empty()) throw UsageError("malformed complex literal \"" + raw + "\"");
  // Split before the sign of the imaginary part, ignoring exponent signs.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
        body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    return Amplitude(0.0, parse_double_strict(body));  // bare imaginary
  }
  return Amplitude(parse_double_strict(body.substr(0, split)),
                   parse_double_strict(body.substr(split)));
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig config;
  CLI::App app{"Simulator and analysis toolkit for remote preparation of "
               "two-qubit states over entangled channels"};
  app.name("rsp");
  app.require_subcommand(1);

  std::string target_text;
  std::string forced_outcome_text;
  int forced_aux_value = 0;
  std::string format_text;
  std::string out_text;
  std::uint64_t trials_value = 100000;

  const std::string target_help =
      "four comma-separated complex coefficients (\"re\" or \"re+imj\")";
  const std::string a_help = "channel coefficient a in [0, 1/sqrt 2]; "
                             "b is derived as sqrt(1-a^2)";
  const std::string c_help = "channel coefficient c in [0, 1/sqrt 2]; "
                             "d is derived as sqrt(1-c^2)";

  auto add_common = [&](CLI::App* sub, bool with_channel) {
    if (with_channel) {
      sub->add_option("--a", config.a, a_help)->capture_default_str();
      sub->add_option("--c", config.c, c_help)->capture_default_str();
    }
    sub->add_option("--format", format_text, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_text, "write the report to PATH");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "trace one protocol run");
  run_cmd->add_option("--target", target_text, target_help)->required();
  add_common(run_cmd, true);
  run_cmd->add_option("--seed", config.seed, "randomness seed")
      ->capture_default_str();
  run_cmd->add_option("--forced-outcome", forced_outcome_text,
                      "force the sender's measurement outcome")
      ->check(CLI::IsMember({"phi", "phi-perp", "psi", "psi-perp"}));
  run_cmd->add_option("--forced-aux", forced_aux_value,
                      "force the auxiliary measurement outcome")
      ->check(CLI::IsMember({0, 1}));

  CLI::App* exact_cmd =
      app.add_subcommand("exact", "exact branch and success report");
  exact_cmd->add_option("--target", target_text, target_help)->required();
  add_common(exact_cmd, true);

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "seeded Monte Carlo estimate");
  simulate_cmd->add_option("--target", target_text, target_help)->required();
  add_common(simulate_cmd, true);
  simulate_cmd->add_option("--trials", trials_value, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate_cmd->add_option("--seed", config.seed, "randomness seed")
      ->capture_default_str();

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "closed-form success over an (a, c) grid, with optional "
               "Monte Carlo per point");
  sweep_cmd->add_option("--target", target_text,
                        target_help + "; required with --trials");
  add_common(sweep_cmd, false);
  sweep_cmd->add_option("--step", config.step, "grid step for a and c")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--trials", trials_value,
                        "Monte Carlo trials per grid point")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", config.seed, "base randomness seed")
      ->capture_default_str();

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "report each target coefficient constraint");
  validate_cmd
      ->add_option("--target", target_text,
                   target_help + ", or a path to a file holding them")
      ->required();
  add_common(validate_cmd, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == run_cmd) config.mode = Mode::Run;
  if (sub == exact_cmd) config.mode = Mode::Exact;
  if (sub == simulate_cmd) config.mode = Mode::Simulate;
  if (sub == sweep_cmd) config.mode = Mode::Sweep;
  if (sub == validate_cmd) config.mode = Mode::Validate;

  if (!format_text.empty()) {
    config.format =
        format_text == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  } else if (config.mode == Mode::Sweep) {
    config.format = OutputFormat::Csv;  // sweeps are row oriented
  }
  if (!out_text.empty()) config.out_path = out_text;
  if (sub->count("--forced-outcome") > 0) {
    config.forced_outcome = outcome_from_name(forced_outcome_text);
  }
  if (sub->count("--forced-aux") > 0) {
    config.forced_aux =
        forced_aux_value == 0 ? AuxOutcome::Aux0 : AuxOutcome::Aux1;
  }
  if (config.mode == Mode::Simulate) {
    config.trials = trials_value;
  } else if (config.mode == Mode::Sweep && sub->count("--trials") > 0) {
    config.trials = trials_value;
  }

  if (sub->count("--target") > 0) {
    std::string literal = target_text;
    if (config.mode == Mode::Validate &&
        std::filesystem::exists(target_text)) {
      std::ifstream file(target_text);
      std::string line;
      while (std::getline(file, line) && trim(line).empty()) {
      }
      if (trim(line).empty()) {
        throw UsageError("target file \"" + target_text + "\" is empty");
      }
      literal = trim(line);
    }
    config.target = parse_target_list(literal);
  }
  if (config.mode == Mode::Sweep && config.trials && !config.target) {
    throw UsageError("sweep with --trials needs --target");
  }

  // Constraint checks beyond syntax: channel box and target validity.
  if (config.mode != Mode::Sweep && config.mode != Mode::Validate) {
    try {
      ChannelPair::from_ac(config.a, config.c);
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }
  if (config.target && config.mode != Mode::Validate) {
    try {
      const auto& t = *config.target;
      validate_target(t[0], t[1], t[2], t[3]);
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }

  return config;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  BuiltReport report;
  try {
    switch (config.mode) {
      case Mode::Run:
        report = build_run_report(config);
        break;
      case Mode::Exact:
        report = build_exact_report(config);
        break;
      case Mode::Simulate:
        report = build_simulate_report(config);
        break;
      case Mode::Sweep:
        report = build_sweep_report(config);
        break;
      case Mode::Validate:
        report = build_validate_report(config);
        break;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DegenerateBranchError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (config.out_path) {
    std::ofstream file(*config.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open \"" << *config.out_path
          << "\" for writing\n";
      return 1;
    }
    file << report.text;
    file.close();
    if (!file) {
      err << "error: failed writing \"" << *config.out_path << "\"\n";
      return 1;
    }
  } else {
    out << report.text;
  }
  return report.exit_code;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    const RunConfig config = parse_args(args);
    return execute(config, std::cout, std::cerr);
  } catch (const HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rsp
