// Command-line front end: gate-set generation, net building and auditing,
// synthesis, and benchmark tables.
//
// Exit codes (stable contract):
//   0 success, 2 argument/validation error, 3 unusable net (empty shell 0),
//   4 enumeration budget exceeded, 5 audit failure, 6 synthesis target missed.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sknet/json_io.hpp"
#include "sknet/nets.hpp"
#include "sknet/skc.hpp"

namespace {

using namespace sknet;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitUnusable = 3;
constexpr int kExitBudget = 4;
constexpr int kExitAudit = 5;
constexpr int kExitMissed = 6;

// --config FILE: JSON object or flat TOML (key = value), identical key names
// to the long flags. Values are injected before the user's flags so explicit
// flags win under the take-last policy.
std::vector<std::string> config_to_args(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::pair<std::string, std::string>> kv;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        kv.emplace_back(key, value.get<std::string>());
      else
        kv.emplace_back(key, value.dump());
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r\"");
        const auto e = s.find_last_not_of(" \t\r\"");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (!key.empty() && !value.empty()) kv.emplace_back(key, value);
    }
  }

  std::vector<std::string> args;
  for (const auto& [key, value] : kv) {
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

GateSet load_gates(const std::string& path, bool verbose = true) {
  std::vector<std::string> log;
  GateSet gs = gateset_from_json_text(read_file(path), &log);
  if (verbose)
    for (const auto& line : log) std::fprintf(stderr, "gates: %s\n", line.c_str());
  return gs;
}

void print_cardinalities(const ShellNet& net) {
  std::printf("shells (non-identity cardinality):");
  for (int i = 0; i <= net.shell_count(); ++i)
    std::printf(" %d:%zu", i, net.shell(i).size() - 1);
  std::printf("\n");
}

bool shell0_usable(const ShellNet& net) {
  for (const ShellEntry& e : net.shell(0))
    if (e.word.length() > 0) return true;
  return false;
}

int cmd_gates(int qubits, const std::string& out_path) {
  std::vector<std::string> log;
  const GateSet gs = standard_gateset(qubits, &log);
  for (const auto& line : log) std::fprintf(stderr, "gates: %s\n", line.c_str());
  write_file(out_path, gateset_to_json(gs));
  std::printf("wrote %d gates at d=%d to %s\n", gs.size(), gs.dim(), out_path.c_str());
  return kExitOk;
}

int cmd_netbuild(const std::string& gates_path, const std::string& method, double q,
                 double epsilon, int len_cap, int max_len, int seed_max_len,
                 const std::string& seed_net_path, int shell, const std::string& net_path,
                 const std::string& out_path, const std::string& log_path) {
  const GateSet gs = load_gates(gates_path);
  NetParams params;
  params.q = q;
  params.epsilon = epsilon;
  params.max_word_len = len_cap;
  params.dim = gs.dim();

  ShellNet net(params, gs.name(), gateset_hash(gs));
  std::string log_text;

  if (method == "exhaustive") {
    net = build_exhaustive(gs, params, max_len);
  } else if (method == "heuristic") {
    ShellNet seed = seed_net_path.empty()
                        ? build_seed_shell0(gs, params, seed_max_len)
                        : net_from_json_text(read_file(seed_net_path), gs);
    BuildLog log;
    net = build_heuristic(gs, params, seed, &log);
    log_text = log.to_text();
  } else if (method == "complement") {
    const ShellNet base = net_from_json_text(read_file(net_path), gs);
    net = build_complement(base, shell, gs);
  } else {
    throw ValidationError("netbuild: unknown method " + method);
  }

  write_file(out_path, net_to_json(net));
  if (!log_path.empty()) write_file(log_path, log_text);
  print_cardinalities(net);

  // A chain that cannot even start covering (no non-identity element at
  // shell 0) is unusable; complement outputs are single-shell candidates by
  // design and exempt from the check.
  if (method != "complement" && !shell0_usable(net)) {
    std::fprintf(stderr, "netbuild: shell 0 holds only the identity; net unusable\n");
    return kExitUnusable;
  }
  return kExitOk;
}

int cmd_netcheck(const std::string& gates_path, const std::string& net_path, int samples,
                 std::uint64_t seed, const std::string& out_path) {
  const GateSet gs = load_gates(gates_path);
  const ShellNet net = net_from_json_text(read_file(net_path), gs);
  const auto reports = audit_net(net, samples, seed);

  bool all_pass = true;
  std::ostringstream out;
  out << "{\"gate_set_hash\": \"" << net.gate_set_hash() << "\", \"samples_per_shell\": "
      << samples << ", \"seed\": " << seed << ", \"shells\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const bool pass = r.covered_verdict && r.membership_ok && r.sparseness_ok;
    all_pass = all_pass && pass;
    if (i) out << ", ";
    out << "{\"shell\": " << r.shell_index << ", \"samples\": " << r.samples_tested
        << ", \"covered\": " << r.covered_count
        << ", \"worst_gap\": " << format_f17(r.worst_gap)
        << ", \"delta\": " << format_f17(net.params().shell_delta(r.shell_index))
        << ", \"covered_verdict\": " << (r.covered_verdict ? "true" : "false")
        << ", \"membership_ok\": " << (r.membership_ok ? "true" : "false")
        << ", \"sparseness_ok\": " << (r.sparseness_ok ? "true" : "false") << "}";
    std::printf("shell %2d: covered %d/%d worst gap %.6g (delta %.6g) %s\n", r.shell_index,
                r.covered_count, r.samples_tested, r.worst_gap,
                net.params().shell_delta(r.shell_index), pass ? "pass" : "FAIL");
  }
  out << "], \"all_pass\": " << (all_pass ? "true" : "false") << "}\n";
  write_file(out_path, out.str());
  return all_pass ? kExitOk : kExitAudit;
}

int cmd_synthesize(const std::string& target_path, const std::string& backend,
                   const std::string& gates_path, const std::string& net_path,
                   double epsilon0, int levels, double epsilon, std::uint64_t seed,
                   const std::string& out_path) {
  const UMatrix target = matrix_from_json_text(read_file(target_path));
  if (!target.is_unitary(target.dim() * default_tolerances().unitary_tol) ||
      !target.is_special(target.dim() * default_tolerances().unitary_tol))
    throw ValidationError("synthesize: target is not special unitary within tolerance");

  const SKConstants consts = SKConstants::for_dim(target.dim());
  SynthesisResult result;

  if (backend == "net") {
    const GateSet gs = load_gates(gates_path);
    const ShellNet net = net_from_json_text(read_file(net_path), gs);
    NetBackend base(net, gs);
    result = sk_recurse(target, levels, base, consts);
  } else if (backend == "mock") {
    MockBackend base(target.dim(), epsilon0, seed);
    result = sk_recurse(target, levels, base, consts);
  } else {
    throw ValidationError("synthesize: unknown backend " + backend);
  }

  write_file(out_path, synthesis_to_json(result));
  std::printf("achieved %.9g with word length %d at %d levels\n", result.achieved,
              result.length, result.levels);
  return result.achieved <= epsilon ? kExitOk : kExitMissed;
}

int cmd_bench(const std::string& backend, const std::string& gates_path,
              const std::string& net_path, double epsilon0, double floor, int samples,
              std::uint64_t seed, const std::string& out_base) {
  std::vector<double> grid;
  for (double decade = 1e-1; decade >= floor * (1.0 - 1e-12); decade /= 10.0) {
    grid.push_back(decade);
    if (3e-1 * decade >= floor * (1.0 - 1e-12) && 3e-1 * decade < 1e-1)
      grid.push_back(3e-1 * decade);
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());
  if (grid.empty()) throw ValidationError("bench: empty epsilon sweep");

  const GateSet gs = gates_path.empty() ? standard_gateset(1) : load_gates(gates_path);
  std::unique_ptr<ShellNet> net;
  std::unique_ptr<BaseApproximator> base;
  int dim = 2;
  if (backend == "net") {
    net = std::make_unique<ShellNet>(net_from_json_text(read_file(net_path), gs));
    base = std::make_unique<NetBackend>(*net, gs);
    dim = net->params().dim;
  } else if (backend == "mock") {
    base = std::make_unique<MockBackend>(dim, epsilon0, seed);
  } else {
    throw ValidationError("bench: unknown backend " + backend);
  }
  const SKConstants consts = SKConstants::for_dim(dim);

  struct Row {
    double epsilon;
    int levels;
    double mean_achieved, max_achieved, mean_length, max_length, mean_ms;
  };
  std::vector<Row> rows;

  for (double eps : grid) {
    const double e0 = base->epsilon0();
    const int levels = (e0 > 0.0 && eps < e0) ? iterations_needed(eps, e0) : 0;
    Row row{eps, levels, 0, 0, 0, 0, 0};
    for (int s = 0; s < samples; ++s) {
      const UMatrix target = haar_sample(dim, seed + 1000 * s + 17);
      const auto t0 = std::chrono::steady_clock::now();
      const SynthesisResult r = sk_recurse(target, levels, *base, consts);
      const auto t1 = std::chrono::steady_clock::now();
      row.mean_achieved += r.achieved / samples;
      row.max_achieved = std::max(row.max_achieved, r.achieved);
      row.mean_length += static_cast<double>(r.length) / samples;
      row.max_length = std::max(row.max_length, static_cast<double>(r.length));
      row.mean_ms += std::chrono::duration<double, std::milli>(t1 - t0).count() / samples;
    }
    rows.push_back(row);
  }

  // Least-squares slope of mean length against log(1/epsilon).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Row& r : rows) {
    const double x = std::log(1.0 / r.epsilon);
    sx += x;
    sy += r.mean_length;
    sxx += x * x;
    sxy += x * r.mean_length;
  }
  const double n = static_cast<double>(rows.size());
  const double denom = n * sxx - sx * sx;
  const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;

  std::ostringstream txt, csv;
  txt << "# synthesis bench: backend=" << backend << " samples=" << samples << "\n";
  txt << "# length grows 9x per level: two group commutators contribute eight "
         "factors and the carried approximant is the ninth\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-7s %-14s %-14s %-12s %-12s %-10s\n", "epsilon",
                "levels", "mean_achieved", "max_achieved", "mean_length", "max_length",
                "mean_ms");
  txt << line;
  csv << "epsilon,levels,mean_achieved,max_achieved,mean_length,max_length,mean_ms\n";
  for (const Row& r : rows) {
    std::snprintf(line, sizeof(line), "%-12.4g %-7d %-14.6g %-14.6g %-12.6g %-12.6g %-10.4g\n",
                  r.epsilon, r.levels, r.mean_achieved, r.max_achieved, r.mean_length,
                  r.max_length, r.mean_ms);
    txt << line;
    csv << format_f17(r.epsilon) << "," << r.levels << "," << format_f17(r.mean_achieved)
        << "," << format_f17(r.max_achieved) << "," << format_f17(r.mean_length) << ","
        << format_f17(r.max_length) << "," << format_f17(r.mean_ms) << "\n";
  }
  char slope_line[128];
  std::snprintf(slope_line, sizeof(slope_line),
                "# length vs log(1/epsilon) least-squares slope: %.6g\n", slope);
  txt << slope_line;

  write_file(out_base + ".txt", txt.str());
  write_file(out_base + ".csv", csv.str());
  std::printf("%s%s", txt.str().c_str(), "");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gate synthesis over finite gate sets: shell nets and the "
               "group-commutator recursion"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path, gates_path, net_path, target_path, out_path, log_path;
  std::string method = "exhaustive", backend = "net", seed_net_path;
  double q = 2.0, epsilon = 0.1, epsilon0 = 1e-4, floor = 1e-3;
  int qubits = 1, len_cap = 16, max_len = 4, seed_max_len = 3, levels = 0, shell = 0;
  int samples = 20;
  std::uint64_t seed = 1;

  auto* gates_cmd = app.add_subcommand("gates", "emit the standard gate set as JSON");
  gates_cmd->add_option("--qubits", qubits, "qubit count in [1, 4]");
  gates_cmd->add_option("--out", out_path, "output gate-set file")->required();

  auto* netbuild = app.add_subcommand("netbuild", "build a shell net");
  netbuild->add_option("--gates", gates_path)->required();
  netbuild->add_option("--method", method, "exhaustive | heuristic | complement");
  netbuild->add_option("--q", q, "net quality ratio");
  netbuild->add_option("--epsilon", epsilon, "target resolution");
  netbuild->add_option("--L", len_cap, "word length cap");
  netbuild->add_option("--max-len", max_len, "exhaustive enumeration depth");
  netbuild->add_option("--seed-max-len", seed_max_len, "inline shell-0 seed depth (heuristic)");
  netbuild->add_option("--seed-net", seed_net_path, "seed net file (heuristic)");
  netbuild->add_option("--shell", shell, "base shell index (complement)");
  netbuild->add_option("--net", net_path, "base net file (complement)");
  netbuild->add_option("--out", out_path)->required();
  netbuild->add_option("--log", log_path, "build log file (heuristic)");

  auto* netcheck = app.add_subcommand("netcheck", "audit a net file");
  netcheck->add_option("--gates", gates_path)->required();
  netcheck->add_option("--net", net_path)->required();
  netcheck->add_option("--samples", samples, "samples per shell");
  netcheck->add_option("--seed", seed);
  netcheck->add_option("--out", out_path)->required();

  auto* synth = app.add_subcommand("synthesize", "approximate a target unitary");
  synth->add_option("--target", target_path)->required();
  synth->add_option("--backend", backend, "net | mock");
  synth->add_option("--gates", gates_path);
  synth->add_option("--net", net_path);
  synth->add_option("--epsilon0", epsilon0, "mock base resolution");
  synth->add_option("--levels", levels, "recursion depth");
  synth->add_option("--epsilon", epsilon, "requested accuracy (exit 6 if missed)");
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path)->required();

  auto* bench = app.add_subcommand("bench", "epsilon sweep table");
  bench->add_option("--backend", backend, "net | mock");
  bench->add_option("--gates", gates_path);
  bench->add_option("--net", net_path);
  bench->add_option("--epsilon0", epsilon0, "mock base resolution");
  bench->add_option("--floor", floor, "smallest epsilon in the sweep");
  bench->add_option("--samples", samples, "targets per epsilon");
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "output base path (.txt/.csv)")->required();

  for (auto* cmd : {gates_cmd, netbuild, netcheck, synth, bench})
    cmd->add_option("--config", config_path, "JSON or TOML config; flags override");

  // Inject config-derived values before the user's own flags (take-last).
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      try {
        const auto injected = config_to_args(args[i + 1]);
        args.insert(args.begin() + 1, injected.begin(), injected.end());
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitArgs;
      }
      break;
    }
  }

  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitArgs;
  }

  try {
    if (gates_cmd->parsed()) return cmd_gates(qubits, out_path);
    if (netbuild->parsed())
      return cmd_netbuild(gates_path, method, q, epsilon, len_cap, max_len, seed_max_len,
                          seed_net_path, shell, net_path, out_path, log_path);
    if (netcheck->parsed()) return cmd_netcheck(gates_path, net_path, samples, seed, out_path);
    if (synth->parsed())
      return cmd_synthesize(target_path, backend, gates_path, net_path, epsilon0, levels,
                            epsilon, seed, out_path);
    if (bench->parsed())
      return cmd_bench(backend, gates_path, net_path, epsilon0, floor, samples, seed, out_path);
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgs;
  }
  return kExitArgs;
}
