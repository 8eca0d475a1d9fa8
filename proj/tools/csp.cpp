#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "csp/play_http.hpp"
#include "csp/q3sat.hpp"
#include "csp/reduction.hpp"
#include "csp/verify.hpp"

namespace {

using namespace csp;

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_budget() {
  if (const char* env = std::getenv("CSP_BUDGET")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("CSP_BUDGET must be a non-negative integer, got '") + env + "'");
  }
  return kDefaultBudget;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void result(const std::string& key, const std::string& value) { std::cout << "RESULT " << key << "=" << value << "\n"; }

int cmd_solve(const std::string& file, std::size_t budget, const std::string& policy_path) {
  Instance inst = load_instance(file);
  require_valid(inst);
  SolveResult solved = solve(inst, budget);
  std::cout << "value: " << solved.value().to_string() << "\n";
  std::cout << "states: " << solved.stats().states_visited << ", layers: " << solved.stats().layers_solved
            << ", seconds: " << solved.stats().elapsed_seconds << "\n";
  if (!policy_path.empty()) {
    std::ofstream out(policy_path);
    if (!out) throw UsageError("cannot write " + policy_path);
    // One line per reachable state; value and move assume no captures so far.
    solved.for_each_state([&](const GameState& s, const PositionValues& v) {
      json j{{"state", state_to_json(inst, s)},
             {"end_value", v.end_value},
             {"hold_value", v.hold_value},
             {"value", solved.value_at(s, 0).to_string()}};
      if (auto bm = solved.best_move(s, 0)) j["best_move"] = move_to_json(bm->move);
      out << j.dump() << "\n";
    });
    std::cout << "policy written to " << policy_path << "\n";
  }
  result("value", solved.value().to_string());
  result("states", std::to_string(solved.stats().states_visited));
  return kOk;
}

int cmd_match(const std::string& file, const std::string& kind_i, const std::string& kind_ii, std::size_t ply_cap,
              std::size_t budget) {
  Instance inst = load_instance(file);
  require_valid(inst);
  std::unique_ptr<Strategy> a, b;
  try {
    std::shared_ptr<const SolveResult> solved;
    if (kind_i.find("optimal") != std::string::npos || kind_ii.find("optimal") != std::string::npos)
      solved = std::make_shared<const SolveResult>(solve(inst, budget));
    a = make_strategy(kind_i, budget, solved);
    b = make_strategy(kind_ii, budget, solved);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  MatchRecord rec = run_match(inst, *a, *b, ply_cap);
  int ply = 0;
  for (const auto& m : rec.moves)
    std::cout << ++ply << ". " << to_string(m.mover) << " " << m.move.to_string() << (m.capture ? " +1" : "") << "\n";
  std::cout << "outcome: " << rec.outcome.to_string() << " (" << to_string(rec.reason) << "), score " << rec.score_i
            << "-" << rec.score_ii << (rec.flagged ? ", flagged" : "") << "\n";
  result("outcome", rec.outcome.to_string());
  result("reason", to_string(rec.reason));
  result("score_i", std::to_string(rec.score_i));
  result("score_ii", std::to_string(rec.score_ii));
  result("plies", std::to_string(rec.moves.size()));
  result("flagged", rec.flagged ? "true" : "false");
  return kOk;
}

struct GenArgs {
  std::string family;
  std::string out;
  int n = 7;
  int customers = 3;
  std::uint64_t seed = 1;
  int rays = 3;
  int max_len = 4;
  double density = 0.3;
  int k = trailing_defaults().k, d = trailing_defaults().d, L = trailing_defaults().L, s = trailing_defaults().s;
  int p = apriori_defaults().p, q = apriori_defaults().q;
};

int cmd_gen(const GenArgs& g) {
  Instance inst;
  if (g.family == "tree") inst = random_tree(g.n, g.customers, g.seed);
  else if (g.family == "star") inst = random_star(g.rays, g.max_len, g.customers, g.seed);
  else if (g.family == "bipartite") inst = random_bipartite(g.n, g.customers, g.seed, g.density);
  else if (g.family == "general") inst = random_general(g.n, g.customers, g.seed, g.density);
  else if (g.family == "wheel") inst = gen_wheel(g.n);
  else if (g.family == "trailing-tree") inst = gen_trailing_tree(g.k, g.d, g.L, g.s);
  else if (g.family == "apriori-tree") inst = gen_apriori_tree(g.p, g.q);
  else {
    auto it = std::find_if(catalog().begin(), catalog().end(), [&](const auto& e) { return e.name == g.family; });
    if (it == catalog().end()) throw UsageError("unknown family '" + g.family + "'");
    inst = it->build();
  }
  require_valid(inst);
  save_instance(inst, g.out);
  std::cout << "wrote " << g.out << ": " << inst.graph.vertex_count << " vertices, " << inst.customer_count()
            << " customers\n";
  result("vertices", std::to_string(inst.graph.vertex_count));
  result("customers", std::to_string(inst.customer_count()));
  return kOk;
}

int cmd_reduce(const std::string& file, const std::string& out, const std::string& labels_path, bool no_subdivide,
               bool audit) {
  QFormula f = parse_q3sat(read_file(file));
  QFormula padded = pad_formula(f);
  if (!(padded == f))
    std::cout << "padded from n=" << f.n << ", m=" << f.m() << " to n=" << padded.n << ", m=" << padded.m() << "\n";
  ReductionArtifact art = build_reduction(padded, !no_subdivide);
  save_instance(art.instance, out);
  const std::string labels = labels_path.empty() ? out + ".labels" : labels_path;
  write_file(labels, label_sidecar(art));
  std::cout << "wrote " << out << " (" << art.instance.graph.vertex_count << " vertices, "
            << art.instance.customer_count() << " customers) and " << labels << "\n";
  result("vertices", std::to_string(art.instance.graph.vertex_count));
  result("customers", std::to_string(art.instance.customer_count()));
  if (!audit) return kOk;
  AuditReport report = verify_reduction(art);
  std::cout << format_audit(report);
  result("audit", report.ok() ? "pass" : "fail");
  return report.ok() ? kOk : kViolation;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt, const std::string& cex_path) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  try {
    rep = run_suite(suite, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "suite " << rep.suite << ": " << rep.instances << " instances checked\n";
  for (const auto& l : rep.lines) std::cout << "  " << l << "\n";
  if (!rep.passed) {
    std::cout << "counterexample: " << rep.failure << "\n";
    std::cout << instance_to_json(*rep.counterexample).dump(2) << "\n";
    if (!cex_path.empty()) save_instance(*rep.counterexample, cex_path);
  }
  result("suite", rep.suite);
  result("instances", std::to_string(rep.instances));
  result("seconds", std::to_string(secs));
  result("status", rep.passed ? "pass" : "fail");
  return rep.passed ? kOk : kViolation;
}

int cmd_serve(const std::string& host, int port, std::size_t budget) {
  PlayService::Options opt;
  opt.budget = budget;
  PlayService service(opt);
  httplib::Server server;
  bind_routes(server, service);
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competing salesmen: solver, matches, generators, reduction and verification suites"};
  app.require_subcommand(1);

  std::size_t budget = 0;
  std::string file, out, policy, kind_i, kind_ii, labels, suite, cex, host = "127.0.0.1";
  std::size_t ply_cap = kDefaultPlyCap;
  bool no_subdivide = false, audit = false;
  int port = 8080;
  GenArgs gen;
  SuiteOptions sopt;

  auto* solve_cmd = app.add_subcommand("solve", "exact value of an instance");
  solve_cmd->add_option("file", file, "instance file")->required();
  solve_cmd->add_option("--budget", budget, "state budget");
  solve_cmd->add_option("--policy", policy, "write per-state values and moves (JSON lines)");

  auto* match_cmd = app.add_subcommand("match", "play two strategies against each other");
  match_cmd->add_option("file", file, "instance file")->required();
  match_cmd->add_option("--i", kind_i, "strategy for I: greedy, optimal, random:<seed>, apriori:<v,...>, stolen:<kind>")
      ->required();
  match_cmd->add_option("--ii", kind_ii, "strategy for II")->required();
  match_cmd->add_option("--ply-cap", ply_cap, "abort after this many plies");
  match_cmd->add_option("--budget", budget, "state budget for optimal play");

  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("family", gen.family, "tree, star, bipartite, general, wheel, trailing-tree, apriori-tree, or a catalog name")
      ->required();
  gen_cmd->add_option("-o,--out", gen.out, "output file")->required();
  gen_cmd->add_option("--n", gen.n, "vertex count (wheel: customer count)");
  gen_cmd->add_option("--customers", gen.customers, "customer count");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--rays", gen.rays, "star ray count");
  gen_cmd->add_option("--max-len", gen.max_len, "star maximum ray length");
  gen_cmd->add_option("--density", gen.density, "extra edge probability");
  gen_cmd->add_option("--k", gen.k, "trailing tree: near rays");
  gen_cmd->add_option("--d", gen.d, "trailing tree: near ray length");
  gen_cmd->add_option("--L", gen.L, "trailing tree: distance to the first far customer");
  gen_cmd->add_option("--s", gen.s, "trailing tree: far customer spacing");
  gen_cmd->add_option("--p", gen.p, "a-priori tree: root-to-branch path length");
  gen_cmd->add_option("--q", gen.q, "a-priori tree: branch-to-leaf path length");

  auto* reduce_cmd = app.add_subcommand("reduce", "build the game instance for a quantified 3-CNF formula");
  reduce_cmd->add_option("file", file, "formula file (p q3cnf)")->required();
  reduce_cmd->add_option("-o,--out", out, "output instance file")->required();
  reduce_cmd->add_option("--labels", labels, "label sidecar path (default: <out>.labels)");
  reduce_cmd->add_flag("--no-subdivide", no_subdivide, "keep the graph before bipartite subdivision");
  reduce_cmd->add_flag("--audit", audit, "print the structural audit");

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--max-n", sopt.max_n, "largest exhaustive size");
  verify_cmd->add_option("--seed", sopt.seed, "seed for random corpora");
  verify_cmd->add_option("--random", sopt.random_count, "random corpus size");
  verify_cmd->add_option("--counterexample", cex, "write the first counterexample here");
  verify_cmd->add_option("--budget", budget, "state budget");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP play service");
  serve_cmd->add_option("--port", port, "port");
  serve_cmd->add_option("--host", host, "address to bind");
  serve_cmd->add_option("--budget", budget, "per-session state budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (budget == 0) budget = default_budget();
    sopt.budget = budget;
    if (*solve_cmd) return cmd_solve(file, budget, policy);
    if (*match_cmd) return cmd_match(file, kind_i, kind_ii, ply_cap, budget);
    if (*gen_cmd) return cmd_gen(gen);
    if (*reduce_cmd) return cmd_reduce(file, out, labels, no_subdivide, audit);
    if (*verify_cmd) return cmd_verify(suite, sopt, cex);
    if (*serve_cmd) return cmd_serve(host, port, budget);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    result("status", "budget_exceeded");
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInstance& e) {
    std::cerr << "error: invalid instance: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
