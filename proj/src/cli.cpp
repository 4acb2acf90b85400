#include "mac/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mac/analysis.hpp"
#include "mac/dynamics.hpp"

namespace mac::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError(what + ": '" + text + "' is not a valid number");
  }
  return value;
}

std::vector<double> parse_probs(const std::string& text) {
  std::vector<double> probs;
  for (const auto& part : split(text, ',')) probs.push_back(parse_number<double>(part, "--probs"));
  return probs;
}

std::vector<std::vector<AgentId>> parse_partition(const std::string& text) {
  std::vector<std::vector<AgentId>> cells;
  if (trim(text).empty()) return cells;
  for (const auto& part : split(text, ';')) {
    auto cell = parse_id_list(part);
    if (cell.empty()) throw UsageError("--partition: empty cell in '" + text + "'");
    cells.push_back(std::move(cell));
  }
  return cells;
}

bool builtin_graph(const std::string& desc) {
  return desc == "fig1" || desc.starts_with("complete:") || desc.starts_with("random:");
}

// Shorthands are checked for syntax, paths for readability.
void check_graph(const std::string& desc, const std::string& flag) {
  if (desc.empty()) throw UsageError(flag + " is required");
  if (builtin_graph(desc)) {
    try {
      (void)resolve_graph(desc, 0);
    } catch (const UsageError& e) {
      throw UsageError(flag + ": " + e.what());
    }
    return;
  }
  std::ifstream in(desc);
  if (!in) throw UsageError(flag + ": cannot read '" + desc + "'");
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t given) {
  if (flag->count() > 0) return given;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    return parse_number<std::uint64_t>(env, kSeedEnv);
  }
  return kDefaultSeed;
}

std::uint64_t default_trials(VerifyTarget target) {
  switch (target) {
    case VerifyTarget::Submodularity: return 10000;
    case VerifyTarget::Expectation: return 5000;
    case VerifyTarget::SelectionRule: return 2000;
    case VerifyTarget::GreedyBound: return 2000;
  }
  return 0;
}

VerifyTarget parse_target(const std::string& text) {
  if (text == "submodularity") return VerifyTarget::Submodularity;
  if (text == "expectation") return VerifyTarget::Expectation;
  if (text == "selection-rule") return VerifyTarget::SelectionRule;
  if (text == "greedy-bound") return VerifyTarget::GreedyBound;
  throw UsageError("verify: unknown target '" + text +
                   "' (expected submodularity, expectation, selection-rule or greedy-bound)");
}

template <class F>
auto translate(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << text;
  if (!file) throw std::runtime_error("write failed for " + path);
}

void require_agents(const Instance& inst, std::span<const AgentId> ids, const std::string& flag) {
  for (AgentId a : ids) {
    if (!inst.contains(a)) {
      throw UsageError(flag + ": agent " + std::to_string(a) + " outside 1.." + std::to_string(inst.size()));
    }
  }
}

std::size_t zero_edges(const Instance& inst, const Profile& profile) {
  std::size_t count = 0;
  for (const auto& e : inst.edges()) {
    if (profile.action(e.u) == Action::Zero || profile.action(e.v) == Action::Zero) ++count;
  }
  return count;
}

ordered_json ratio_json(std::size_t f, std::size_t edges) {
  if (edges == 0) return nullptr;
  return static_cast<double>(f) / static_cast<double>(edges);
}

int run_generate(const GenerateCmd& cmd, std::ostream& out) {
  const Instance inst = generate_random(cmd.n0, cmd.n1, cmd.p, cmd.c_mode, cmd.seed);
  emit(serialize_instance(inst), cmd.out, out);
  return kOk;
}

int run_run(const RunCmd& cmd, std::ostream& out) {
  const Instance inst = resolve_graph(cmd.instance, kDefaultSeed);
  Trace trace;
  if (cmd.stages.empty()) {
    require_agents(inst, cmd.control, "--control");
    trace = run(inst, cmd.control);
  } else {
    for (const auto& cell : cmd.stages) require_agents(inst, cell, "--stage");
    trace = run_staged(inst, cmd.stages);
  }
  std::string text = cmd.trace ? format_trace(trace) : std::string{};
  const auto& last = trace.final_profile();
  const std::size_t f = zero_edges(inst, last);
  ordered_json j;
  j["converged_at"] = trace.converged_at;
  j["zeros"] = last.zeros();
  j["ones"] = last.ones();
  j["undecided"] = last.undecided();
  j["f"] = f;
  j["edges"] = inst.edge_count();
  j["ratio"] = ratio_json(f, inst.edge_count());
  text += j.dump() + "\n";
  emit(text, cmd.out, out);
  return kOk;
}

int run_solve(const SolveCmd& cmd, std::ostream& out) {
  const Instance inst = resolve_graph(cmd.instance, kDefaultSeed);
  SolverOptions options;
  options.jobs = cmd.jobs;
  options.enumeration_cap = cmd.cap;
  ordered_json j;
  j["method"] = std::string(to_string(cmd.method));
  j["side"] = std::string(to_string(cmd.side));
  j["budget"] = cmd.budget;
  std::size_t f = 0;
  if (cmd.method == Method::Greedy) {
    const auto g = greedy(inst, cmd.budget, cmd.side, options);
    j["picks"] = g.picks;
    j["values"] = g.values;
    f = g.final_value;
  } else {
    const auto b = brute_force(inst, cmd.budget, cmd.side, options);
    j["picks"] = b.best_set;
    j["subsets"] = b.subsets_evaluated;
    f = b.best_value;
  }
  j["f"] = f;
  j["edges"] = inst.edge_count();
  j["ratio"] = ratio_json(f, inst.edge_count());
  emit(j.dump() + "\n", cmd.out, out);
  return kOk;
}

int run_verify(const VerifyCmd& cmd, std::ostream& out) {
  const Instance topology = resolve_graph(cmd.graph, cmd.seed);
  std::string text;
  bool pass = false;
  switch (cmd.target) {
    case VerifyTarget::Submodularity: {
      const auto r = check_influence_submodularity(topology, cmd.trials, cmd.seed, cmd.jobs);
      text = to_json(r);
      pass = r.pass;
      break;
    }
    case VerifyTarget::Expectation: {
      const auto r = check_expected_submodularity(topology, cmd.set_a, cmd.set_b, cmd.trials, cmd.seed, cmd.jobs);
      text = to_json(r);
      pass = r.pass;
      break;
    }
    case VerifyTarget::SelectionRule: {
      const auto r = check_selection_rule_distribution(topology, cmd.partition, cmd.tail, cmd.trials, cmd.seed, cmd.jobs);
      text = to_json(r);
      pass = r.pass;
      break;
    }
    case VerifyTarget::GreedyBound: {
      SolverOptions options;
      options.jobs = cmd.jobs;
      options.enumeration_cap = cmd.cap;
      const auto r = check_greedy_bound(topology, cmd.budget, cmd.trials, cmd.seed, options);
      text = to_json(r);
      pass = r.pass;
      break;
    }
  }
  emit(text + "\n", cmd.out, out);
  return pass ? kOk : kRefused;
}

int run_sweep(const SweepCmd& cmd, std::ostream& out, std::ostream& err) {
  const auto result = sweep(cmd.config, cmd.jobs, [&err](const std::string& line) { err << line << '\n'; });
  if (result.records.empty()) throw std::invalid_argument("sweep: every cell was skipped");
  emit(format_csv(result.records), cmd.out, out);
  const std::string manifest = !cmd.manifest.empty() ? cmd.manifest
                               : !cmd.out.empty()    ? cmd.out + ".manifest.json"
                                                     : std::string{};
  if (!manifest.empty()) emit(format_manifest(cmd.config, result), manifest, out);
  return kOk;
}

}  // namespace

std::vector<AgentId> parse_id_list(const std::string& text) {
  std::vector<AgentId> ids;
  if (trim(text).empty()) return ids;
  for (const auto& part : split(text, ',')) ids.push_back(parse_number<AgentId>(part, "agent list"));
  return ids;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("--sizes: expected lo:hi:step, got '" + text + "'");
    const int lo = parse_number<int>(parts[0], "--sizes");
    const int hi = parse_number<int>(parts[1], "--sizes");
    const int step = parse_number<int>(parts[2], "--sizes");
    if (step < 1 || lo > hi) throw UsageError("--sizes: empty range '" + text + "'");
    for (int n = lo; n <= hi; n += step) sizes.push_back(n);
  } else {
    for (const auto& part : split(text, ',')) sizes.push_back(parse_number<int>(part, "--sizes"));
  }
  return sizes;
}

Instance resolve_graph(const std::string& desc, std::uint64_t seed) {
  if (desc == "fig1") return fig1();
  const auto dims = [&](const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw UsageError("bad dimensions '" + text + "' (expected AxB)");
    const int a = parse_number<int>(text.substr(0, x), "graph");
    const int b = parse_number<int>(text.substr(x + 1), "graph");
    if (a < 1 || b < 1) throw UsageError("graph sides must be positive in '" + desc + "'");
    return std::pair{a, b};
  };
  if (desc.starts_with("complete:")) {
    const auto [a, b] = dims(desc.substr(9));
    return complete_bipartite(a, b);
  }
  if (desc.starts_with("random:")) {
    const auto parts = split(desc.substr(7), ':');
    if (parts.size() != 2) throw UsageError("bad graph '" + desc + "' (expected random:AxB:p)");
    const auto [a, b] = dims(parts[0]);
    const double p = parse_number<double>(parts[1], "graph");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("edge probability outside [0, 1] in '" + desc + "'");
    return generate_random(a, b, p, CMode::Uniform01, seed);
  }
  return load_instance(desc);
}

Command parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Maximum anti-coordination toolkit", "mac"};
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  std::uint64_t cap = 5'000'000;
  std::string out;

  GenerateCmd gen;
  std::string gen_mode = "uniform";
  auto* generate = app.add_subcommand("generate", "Random bipartite instance");
  generate->add_option("--n0", gen.n0, "Agents in S0")->required();
  generate->add_option("--n1", gen.n1, "Agents in S1")->required();
  generate->add_option("--p", gen.p, "Edge probability")->required();
  generate->add_option("--c-mode", gen_mode, "uniform or well-behaved");
  auto* gen_seed = generate->add_option("--seed", seed);
  generate->add_option("--out", out);

  RunCmd runc;
  std::string control;
  std::vector<std::string> stages;
  auto* run_cmd = app.add_subcommand("run", "Simulate the dynamics");
  run_cmd->add_option("--instance", runc.instance, "Instance path or fig1")->required();
  run_cmd->add_option("--control", control, "Controlled agents, e.g. 3,4");
  run_cmd->add_option("--stage", stages, "Staged control cell (repeatable)");
  run_cmd->add_flag("--trace", runc.trace, "Print one line per step");
  run_cmd->add_option("--out", out);

  SolveCmd solve;
  std::string solve_method = "greedy";
  std::string solve_side = "s0";
  auto* solve_cmd = app.add_subcommand("solve", "Choose a control set");
  solve_cmd->add_option("--instance", solve.instance)->required();
  solve_cmd->add_option("--budget", solve.budget)->required();
  solve_cmd->add_option("--method", solve_method, "greedy or brute");
  solve_cmd->add_option("--side", solve_side, "s0 or any");
  solve_cmd->add_option("--jobs", jobs);
  solve_cmd->add_option("--cap", cap, "Brute-force enumeration cap");
  solve_cmd->add_option("--out", out);

  VerifyCmd ver;
  std::string target;
  std::string set_a;
  std::string set_b;
  std::string partition;
  std::string tail;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("target", target, "submodularity, expectation, selection-rule or greedy-bound")->required();
  verify->add_option("--graph", ver.graph, "fig1, complete:AxB, random:AxB:p or a path")->required();
  verify->add_option("--trials,--draws", ver.trials);
  auto* ver_seed = verify->add_option("--seed", seed);
  verify->add_option("--A", set_a);
  verify->add_option("--B", set_b);
  verify->add_option("--partition", partition, "Cells separated by ';', e.g. 1,2;3");
  verify->add_option("--tail", tail);
  verify->add_option("--budget", ver.budget);
  verify->add_option("--jobs", jobs);
  verify->add_option("--cap", cap);
  verify->add_option("--out", out);

  SweepCmd sw;
  std::string sizes = "4:40:4";
  std::string probs = "0.3,0.8";
  std::string methods = "greedy,brute";
  std::string sweep_mode = "uniform";
  std::string sweep_side = "any";
  std::string manifest;
  bool no_timing = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Greedy versus brute-force sweep");
  sweep_cmd->add_option("--sizes", sizes, "lo:hi:step or comma list");
  sweep_cmd->add_option("--probs", probs);
  sweep_cmd->add_option("--samples", sw.config.samples_per_cell);
  sweep_cmd->add_option("--methods", methods);
  sweep_cmd->add_option("--c-mode", sweep_mode);
  sweep_cmd->add_option("--side", sweep_side);
  auto* sweep_seed = sweep_cmd->add_option("--seed", seed);
  sweep_cmd->add_option("--jobs", jobs);
  sweep_cmd->add_option("--cap", cap);
  sweep_cmd->add_flag("--no-timing", no_timing, "Write runtime_ms as 0");
  sweep_cmd->add_option("--out", out);
  sweep_cmd->add_option("--manifest", manifest);

  if (!args.empty() && !args.front().starts_with("-") && app.get_subcommand_no_throw(args.front()) == nullptr) {
    throw UsageError("unknown subcommand '" + args.front() + "'");
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->get_help_ptr() != nullptr && sub->get_help_ptr()->count() > 0) throw HelpRequested(sub->help());
  }
  if (jobs < 1) throw UsageError("--jobs must be >= 1");

  if (generate->parsed()) {
    if (gen.n0 < 0 || gen.n1 < 0) throw UsageError("--n0/--n1 must be non-negative");
    if (!(gen.p >= 0.0 && gen.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
    gen.c_mode = translate("--c-mode", [&] { return parse_cmode(gen_mode); });
    gen.seed = resolve_seed(gen_seed, seed);
    gen.out = out;
    return gen;
  }
  if (run_cmd->parsed()) {
    check_graph(runc.instance, "--instance");
    runc.control = parse_id_list(control);
    for (const auto& s : stages) runc.stages.push_back(parse_id_list(s));
    if (!runc.stages.empty() && !runc.control.empty()) throw UsageError("--control and --stage are exclusive");
    runc.out = out;
    return runc;
  }
  if (solve_cmd->parsed()) {
    check_graph(solve.instance, "--instance");
    if (solve.budget < 0) throw UsageError("--budget must be non-negative");
    solve.method = translate("--method", [&] { return parse_method(solve_method); });
    solve.side = translate("--side", [&] { return parse_side(solve_side); });
    solve.jobs = jobs;
    solve.cap = cap;
    solve.out = out;
    return solve;
  }
  if (verify->parsed()) {
    ver.target = parse_target(target);
    ver.seed = resolve_seed(ver_seed, seed);
    check_graph(ver.graph, "--graph");
    if (ver.trials == 0) ver.trials = default_trials(ver.target);
    ver.set_a = parse_id_list(set_a);
    ver.set_b = parse_id_list(set_b);
    ver.partition = parse_partition(partition);
    ver.tail = parse_id_list(tail);
    if (ver.target == VerifyTarget::Expectation && (ver.set_a.empty() && ver.set_b.empty())) {
      throw UsageError("verify expectation: --A or --B is required");
    }
    ver.jobs = jobs;
    ver.cap = cap;
    ver.out = out;
    return ver;
  }
  sw.config.sizes = parse_sizes(sizes);
  sw.config.probs = parse_probs(probs);
  sw.config.methods.clear();
  for (const auto& m : split(methods, ',')) {
    sw.config.methods.push_back(translate("--methods", [&] { return parse_method(m); }));
  }
  sw.config.c_mode = translate("--c-mode", [&] { return parse_cmode(sweep_mode); });
  sw.config.side = translate("--side", [&] { return parse_side(sweep_side); });
  sw.config.master_seed = resolve_seed(sweep_seed, seed);
  sw.config.enumeration_cap = cap;
  sw.config.record_timing = !no_timing;
  translate("sweep", [&] {
    validate(sw.config);
    return 0;
  });
  sw.out = out;
  sw.manifest = manifest;
  sw.jobs = jobs;
  return sw;
}

int dispatch(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    return std::visit(
        [&](const auto& c) -> int {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, GenerateCmd>) return run_generate(c, out);
          else if constexpr (std::is_same_v<T, RunCmd>) return run_run(c, out);
          else if constexpr (std::is_same_v<T, SolveCmd>) return run_solve(c, out);
          else if constexpr (std::is_same_v<T, VerifyCmd>) return run_verify(c, out);
          else return run_sweep(c, out, err);
        },
        cmd);
  } catch (const EnumerationCapExceeded& e) {
    err << "error: refused: " << e.what() << '\n';
    return kRefused;
  } catch (const InstanceError& e) {
    err << "error: instance: " << e.what() << '\n';
    return kIoError;
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: refused: " << e.what() << '\n';
    return kRefused;
  } catch (const std::exception& e) {
    err << "error: io: " << e.what() << '\n';
    return kIoError;
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kOk;
  } catch (const std::exception& e) {
    err << "error: usage: " << e.what() << '\n';
    return kIoError;
  }
  return dispatch(cmd, out, err);
}

}  // namespace mac::cli
