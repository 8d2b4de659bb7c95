#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gencluster/b2_golden.hpp"
#include "gencluster/errors.hpp"
#include "gencluster/identities.hpp"
#include "gencluster/io.hpp"
#include "gencluster/pattern.hpp"
#include "gencluster/seed.hpp"

namespace gencluster::cli {

enum ExitCode : int { ok = 0, verification_failure = 1, input_error = 2, internal_error = 3 };

struct RunConfig {
  std::string command;
  std::string input;  // path or inline JSON
  std::string example;
  std::string word;
  int depth = -1;
  std::string semifield;
  std::uint64_t seed = 1;
  std::string format;  // json, text; per-command default when empty
  bool debug_epsilon = false;
  // verify
  bool all = false;
  std::vector<std::string> checks;
  int n = 0;
  int instances = 24;
  double volume_limit = SweepOptions{}.volume_limit;
  bool universal_bridge = false;
  // example
  std::string golden;
};

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
inline std::string input_text(const std::string& input) {
  const auto first = input.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && input[first] == '{') return input;
  return read_text(input);
}

inline const char* b2_seed_document = R"({"n": 2, "B": [[0, -1], [1, 0]], "d": [2, 1], "coefficients": "universal"})";

inline SeedSpec load_spec(const RunConfig& cfg) {
  if (!cfg.input.empty() && !cfg.example.empty()) throw InputError("--input and --example are exclusive");
  SeedSpec spec;
  if (!cfg.input.empty()) {
    spec = seed_spec_from_string(input_text(cfg.input));
  } else if (cfg.example == "b2") {
    spec = seed_spec_from_string(b2_seed_document);
  } else if (!cfg.example.empty()) {
    throw InputError("unknown example: " + cfg.example);
  } else {
    throw InputError("an input seed is required (--input FILE|JSON or --example b2)");
  }
  if (!cfg.semifield.empty()) spec.semifield = cfg.semifield;
  if (spec.semifield != "principal" && spec.semifield != "universal")
    throw InputError("unknown semifield: " + spec.semifield);
  return spec;
}

template <SemifieldInstance S>
int mutate_as(const SeedSpec& spec, const RunConfig& cfg, std::ostream& out) {
  Seed<S> seed = build_seed<S>(spec);
  const MutationWord w = parse_word(cfg.word, seed.rank());
  for (int k : w) seed = mutate_seed(seed, k, cfg.debug_epsilon);
  if (cfg.format == "text")
    out << seed_to_text(seed);
  else
    out << seed_to_json(seed, w).dump(2) << "\n";
  return ok;
}

inline int cmd_mutate(const RunConfig& cfg, std::ostream& out) {
  const SeedSpec spec = load_spec(cfg);
  return spec.semifield == "principal" ? mutate_as<Tropical>(spec, cfg, out) : mutate_as<Universal>(spec, cfg, out);
}

template <SemifieldInstance S>
int pattern_as(const SeedSpec& spec, const RunConfig& cfg, std::ostream& out) {
  const int depth = cfg.depth < 0 ? 8 : cfg.depth;
  const Pattern<S> pattern(build_seed<S>(spec), cfg.debug_epsilon);
  const auto words = reduced_words(pattern.rank(), depth);
  if (cfg.format == "text") {
    for (const auto& w : words) out << vertex_to_text(pattern, w);
    return ok;
  }
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& w : words) vertices.push_back(vertex_to_json(pattern, w));
  nlohmann::json j{{"n", pattern.rank()},
                   {"B", matrix_to_json(pattern.initial_B())},
                   {"d", pattern.degrees()},
                   {"semifield", std::string(S::name)},
                   {"depth", depth},
                   {"vertices", vertices}};
  out << j.dump(2) << "\n";
  return ok;
}

inline int cmd_pattern(const RunConfig& cfg, std::ostream& out) {
  const SeedSpec spec = load_spec(cfg);
  return spec.semifield == "principal" ? pattern_as<Tropical>(spec, cfg, out) : pattern_as<Universal>(spec, cfg, out);
}

inline std::vector<Instance> verify_instances(const RunConfig& cfg) {
  std::vector<Instance> out;
  if (cfg.example == "b2") {
    Instance b2 = b2_instance();
    if (cfg.depth >= 0) b2.depth = cfg.depth;
    out.push_back(std::move(b2));
  } else if (!cfg.example.empty()) {
    throw InputError("unknown example: " + cfg.example);
  }
  if (!cfg.input.empty()) {
    const SeedSpec spec = seed_spec_from_string(input_text(cfg.input));
    Instance inst;
    inst.name = "input";
    inst.B = spec.B;
    inst.d = spec.d;
    inst.depth = cfg.depth >= 0 ? cfg.depth : tractable_depth(spec.B.matrix(), spec.d, 5, cfg.volume_limit);
    inst.R = tree_skewsymmetrizer(scaled_left(spec.d, spec.B.matrix()));
    out.push_back(std::move(inst));
  }
  if (out.empty()) {
    SweepOptions opt;
    opt.count = cfg.instances;
    opt.rank = cfg.n;
    opt.volume_limit = cfg.volume_limit;
    if (cfg.depth >= 0) opt.max_depth = cfg.depth;
    out = random_instances(cfg.seed, opt);
  }
  return out;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n < 0 || cfg.n > 6) throw InputError("--n must be between 0 and 6");
  if (cfg.instances < 1) throw InputError("--instances must be positive");
  std::vector<std::string> names = cfg.checks;
  if (cfg.all || names.empty()) names = check_names();
  for (const auto& name : names)
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
      throw InputError("unknown check: " + name);

  std::vector<CheckReport> reports;
  if (cfg.example == "b2" && (cfg.all || cfg.checks.empty())) reports.push_back(golden_report(b2_golden()));
  for (const auto& inst : verify_instances(cfg)) {
    const Workbench wb(inst);
    const bool universal_bridge = cfg.universal_bridge || inst.name == "B2";
    for (const auto& name : names) {
      auto r = run_check(wb, name, universal_bridge);
      reports.insert(reports.end(), r.begin(), r.end());
    }
  }

  bool passed = true;
  std::size_t failures = 0;
  for (const auto& r : reports) {
    passed &= r.passed();
    failures += r.failures.size();
  }
  if (cfg.format == "text") {
    for (const auto& r : reports) out << report_to_text(r);
    out << (passed ? "all checks passed" : std::to_string(failures) + " failures") << " (" << reports.size()
        << " reports)\n";
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    out << nlohmann::json{{"passed", passed}, {"reports", arr}}.dump(2) << "\n";
  }
  return passed ? ok : verification_failure;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline int cmd_example(const RunConfig& cfg, std::ostream& out) {
  const GoldenFixture fx = cfg.golden.empty() ? b2_golden() : golden_from_string(read_text(cfg.golden));
  const GoldenReport rep = run_golden(fx);
  if (cfg.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"t", r.t}, {"item", r.item}, {"expected", r.expected}, {"computed", r.computed}, {"ok", r.ok}});
    nlohmann::json j{{"example", fx.name}, {"summary", rep.summary()}, {"passed", rep.passed()}, {"rows", rows}};
    if (const auto* m = rep.first_mismatch())
      j["first_mismatch"] = {{"t", m->t}, {"item", m->item}, {"expected", m->expected}, {"computed", m->computed}};
    out << j.dump(2) << "\n";
  } else {
    for (const auto& r : rep.rows) {
      out << (r.ok ? "  ok  " : "  XX  ") << "t=" << pad(std::to_string(r.t), 3) << pad(r.item, 26)
          << "expected: " << r.expected << "\n"
          << std::string(6 + 5 + 26, ' ') << "computed: " << r.computed << "\n";
    }
    if (const auto* m = rep.first_mismatch())
      out << "first mismatch: t=" << m->t << " " << m->item << ": expected " << m->expected << ", computed "
          << m->computed << "\n";
    out << rep.summary() << "\n";
  }
  return rep.passed() ? ok : verification_failure;
}

/// Parses argv and runs one command. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized cluster patterns: mutation, exploration and verification", "gencluster"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool seed_input) {
    if (seed_input) {
      sub->add_option("--input", cfg.input, "seed JSON file or inline JSON");
      sub->add_option("--example", cfg.example, "built-in example (b2)");
    }
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* mutate = app.add_subcommand("mutate", "apply a mutation word to a seed");
  add_common(mutate, true);
  mutate->add_option("--word", cfg.word, "1-based directions, e.g. 1,2,1");
  mutate->add_option("--semifield", cfg.semifield, "coefficient semifield")
      ->check(CLI::IsMember({"principal", "universal"}));
  mutate->add_flag("--debug-epsilon", cfg.debug_epsilon, "mutate with both signs and compare");

  auto* pattern = app.add_subcommand("pattern", "breadth-first dump of seeds, C, G and F");
  add_common(pattern, true);
  pattern->add_option("--depth", cfg.depth, "maximal word length (default 8)")->check(CLI::NonNegativeNumber);
  pattern->add_option("--semifield", cfg.semifield, "coefficient semifield")
      ->check(CLI::IsMember({"principal", "universal"}));
  pattern->add_flag("--debug-epsilon", cfg.debug_epsilon, "mutate with both signs and compare");

  auto* verify = app.add_subcommand("verify", "run identity checks");
  add_common(verify, true);
  verify->add_flag("--all", cfg.all, "run every check");
  verify->add_option("--check", cfg.checks, "check name (repeatable)");
  verify->add_option("--n", cfg.n, "rank of random instances (0: mixed 2 and 3)");
  verify->add_option("--seed", cfg.seed, "random seed for the instance sweep");
  verify->add_option("--instances", cfg.instances, "number of random instances");
  verify->add_option("--depth", cfg.depth, "exploration depth (default: adaptive, at most 5)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--volume-limit", cfg.volume_limit, "F-polynomial size bound for adaptive depth");
  verify->add_flag("--universal-bridge", cfg.universal_bridge, "also check p-coefficients in the universal semifield");

  auto* example = app.add_subcommand("example", "compare with the embedded B2 tables");
  add_common(example, false);
  example->add_option("--golden", cfg.golden, "golden fixture JSON (default: embedded)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
  if (app.got_subcommand(mutate)) cfg.command = "mutate";
  if (app.got_subcommand(pattern)) cfg.command = "pattern";
  if (app.got_subcommand(verify)) cfg.command = "verify";
  if (app.got_subcommand(example)) cfg.command = "example";
  if (cfg.format.empty()) cfg.format = cfg.command == "example" ? "text" : "json";

  try {
    if (cfg.command == "mutate") return cmd_mutate(cfg, out);
    if (cfg.command == "pattern") return cmd_pattern(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    return cmd_example(cfg, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const InvalidExchangeMatrix& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const InvalidSkewsymmetrizer& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return internal_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return internal_error;
  }
}

}  // namespace gencluster::cli
