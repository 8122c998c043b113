// Copyright 2026 The clssmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// clssmt: inhabit, translate, solve/enumerate, check and bench from the
// command line.
//
// Exit codes: 0 success, 1 input or validation error, 2 environment error
// (solver missing or failing), 3 solver timeout.  `check` exits 1 for a
// non-member and 2 when its inputs do not parse.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clssmt/clssmt.hpp"

namespace {

using namespace clssmt;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kEnvironmentError = 2;
constexpr int kTimeout = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ValidationError("cannot write '" + path + "'");
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

// Goal text to a nonterminal of `g`: exact name first, else the canonical
// form of the type it denotes.
std::string resolve_goal(const TreeGrammar& g, const std::string& goal) {
  if (goal.empty() || g.has(goal)) return goal.empty() ? g.start : goal;
  try {
    std::string c = canonical_string(parse_type(goal));
    if (g.has(c)) return c;
  } catch (const ParseError&) {
  }
  return goal;
}

// ---------------------------------------------------------------------------
// Options shared by the solver-facing commands

struct ScriptFlags {
  std::string constraints;
  std::string indices;
  std::string mode;
  std::size_t depth = 0;
  bool exactly_one = false;
  std::string instantiate = "full";

  void add(CLI::App* app, bool with_mode) {
    app->add_option("--constraints,-c", constraints, "Structural constraint file")
        ->check(CLI::ExistingFile);
    app->add_option("--indices", indices, "Combinator index overrides (`name index` lines)")
        ->check(CLI::ExistingFile);
    if (with_mode)
      app->add_option("--mode", mode,
                      "quantified or finitized (default: finitized when --depth is "
                      "given, quantified otherwise)")
          ->check(CLI::IsMember({"quantified", "finitized"}));
    app->add_option("--depth,-d", depth, "Finitization depth (tree height)")
        ->check(CLI::Range(1, 60));
    app->add_flag("--exactly-one", exactly_one,
                  "Encode alternatives as or + pairwise exclusion instead of xor");
    app->add_option("--instantiate", instantiate,
                    "Finitized vertices: full tree or reachable only")
        ->check(CLI::IsMember({"full", "reachable"}));
  }

  ScriptOptions options(std::size_t default_depth) const {
    ScriptOptions o;
    o.mode = mode == "quantified" || (mode.empty() && depth == 0 && default_depth == 0)
                 ? Mode::Quantified
                 : Mode::Finitized;
    o.depth = depth ? depth : default_depth ? default_depth : ScriptOptions{}.depth;
    o.instantiation = instantiate == "reachable" ? Instantiation::Reachable : Instantiation::Full;
    o.translate.exactly_one = exactly_one;
    return o;
  }

  std::vector<StructuralConstraint> load_constraints() const {
    return constraints.empty() ? std::vector<StructuralConstraint>{}
                               : parse_constraints(read_file(constraints));
  }

  Tables tables(const TreeGrammar& g) const {
    return assign_tables(g, indices.empty() ? std::map<std::string, int>{}
                                            : parse_index_overrides(read_file(indices)));
  }
};

struct SolverFlags {
  std::string command;
  double timeout = 60;
  bool incremental = false;

  void add(CLI::App* app) {
    app->add_option("--solver", command,
                    std::string("Solver command line (default: $") + kSolverEnvVar +
                        " or '" + kDefaultSolver + "')");
    app->add_option("--timeout", timeout, "Seconds per solver call")
        ->check(CLI::PositiveNumber);
    app->add_flag("--incremental", incremental,
                  "Add blocking clauses to a live solver instead of re-sending the script");
  }

  SolverConfig config() const {
    SolverConfig c = SolverConfig::from_environment();
    if (!command.empty()) c.command = SolverConfig::split_command(command);
    c.timeout_seconds = timeout;
    c.incremental = incremental;
    return c;
  }
};

int require_solver(const SolverConfig& c) {
  if (solver_available(c)) return kOk;
  std::cerr << "error: SMT solver '" << (c.command.empty() ? "" : c.command[0])
            << "' not found.  Install z3 (e.g. `pip install z3-solver` or your package "
               "manager) or point --solver / $"
            << kSolverEnvVar << " at an SMT-LIB 2 solver reading standard input.\n";
  return kEnvironmentError;
}

// ---------------------------------------------------------------------------
// inhabit

struct InhabitCmd {
  std::string repo, goal, format = "json", output;
  std::size_t max_nonterminals = InhabitationOptions{}.max_nonterminals;

  void add(CLI::App& root, std::function<int()>& run) {
    auto* app = root.add_subcommand("inhabit", "Compute the tree grammar of all inhabitants");
    app->add_option("repository", repo, "Repository file")->required()->check(CLI::ExistingFile);
    app->add_option("goal", goal, "Goal type, e.g. 'Pos(1,0)'")->required();
    app->add_option("--format,-f", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app->add_option("--output,-o", output, "Write to a file instead of standard output");
    app->add_option("--max-nonterminals", max_nonterminals, "Abort beyond this many");
    app->callback([this, &run] { run = [this] { return exec(); }; });
  }

  int exec() {
    Repository r = parse_repository(read_file(repo));
    InhabitationOptions o;
    o.max_nonterminals = max_nonterminals;
    TreeGrammar g = inhabit(r, parse_type(goal), o);
    if (g.empty()) std::cerr << "note: " << goal << " is uninhabited\n";
    write_output(output, format == "json" ? to_json(g) : print_grammar(g));
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// translate

struct TranslateCmd {
  std::string grammar, goal, output;
  ScriptFlags flags;

  void add(CLI::App& root, std::function<int()>& run) {
    auto* app = root.add_subcommand("translate", "Emit the SMT-LIB script for a grammar");
    app->add_option("grammar", grammar, "Grammar JSON (from `inhabit`)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--goal,-g", goal, "Goal nonterminal (default: the start symbol)");
    app->add_option("--output,-o", output, "Write to a file instead of standard output");
    flags.add(app, true);
    app->callback([this, &run] { run = [this] { return exec(); }; });
  }

  int exec() {
    TreeGrammar g = from_json(read_file(grammar));
    Tables t = flags.tables(g);
    SmtScript s =
        translate_grammar(g, resolve_goal(g, goal), t, flags.options(0), flags.load_constraints());
    write_output(output, s.text());
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// solve / enumerate

struct SolveCmd {
  std::string name;
  std::size_t default_k;
  std::string repo, grammar, goal, format = "text", output;
  std::size_t k;
  ScriptFlags flags;
  SolverFlags solver;

  SolveCmd(std::string n, std::size_t k0) : name(std::move(n)), default_k(k0), k(k0) {}

  void add(CLI::App& root, std::function<int()>& run, const std::string& description) {
    auto* app = root.add_subcommand(name, description);
    auto* r = app->add_option("--repo,-r", repo, "Repository file (inhabitation runs first)")
                  ->check(CLI::ExistingFile);
    auto* gr = app->add_option("--grammar", grammar, "Precomputed grammar JSON")
                   ->check(CLI::ExistingFile);
    r->excludes(gr);
    app->add_option("--goal,-g", goal,
                    "Goal type (with --repo, required) or nonterminal (with --grammar)");
    app->add_option("--max-solutions,-k", k,
                    "Stop after this many terms (default " + std::to_string(default_k) + ")");
    app->add_option("--format,-f", format,
                    "text, json, dot, or smt2 (print the script without solving)")
        ->check(CLI::IsMember({"text", "json", "dot", "smt2"}));
    app->add_option("--output,-o", output, "Write to a file instead of standard output");
    flags.add(app, false);
    solver.add(app);
    app->callback([this, &run] { run = [this] { return exec(); }; });
  }

  int exec() {
    if (repo.empty() == grammar.empty())
      throw ValidationError("give exactly one of --repo or --grammar");
    TreeGrammar g;
    std::string target;
    if (!repo.empty()) {
      if (goal.empty()) throw ValidationError("--repo needs --goal");
      g = inhabit(parse_repository(read_file(repo)), parse_type(goal));
      target = g.start;
    } else {
      g = from_json(read_file(grammar));
      target = resolve_goal(g, goal);
    }
    Tables t = flags.tables(g);
    ScriptOptions o = flags.options(4);
    o.mode = Mode::Finitized;
    SmtScript s = translate_grammar(g, target, t, o, flags.load_constraints());
    if (format == "smt2") {
      write_output(output, s.text());
      return kOk;
    }
    SolverConfig cfg = solver.config();
    if (k > 0)
      if (int rc = require_solver(cfg)) return rc;
    Enumeration e = enumerate_solutions(s, g, target, t, cfg, k);

    std::string out;
    if (format == "text") {
      for (const auto& term : e.terms) out += to_sexpr(term) + "\n";
    } else if (format == "dot") {
      for (std::size_t i = 0; i < e.terms.size(); ++i)
        out += to_dot(e.terms[i], t.combinators, "solution" + std::to_string(i + 1));
    } else {
      json j;
      j["goal"] = target;
      j["depth"] = o.depth;
      j["solutions"] = json::array();
      for (const auto& term : e.terms) {
        json layout_json = json::object();
        for (const auto& [v, label] : layout(term, t.combinators))
          layout_json[std::to_string(v)] = label;
        j["solutions"].push_back(
            {{"term", to_sexpr(term)}, {"sugar", to_sugar(term)}, {"layout", layout_json}});
      }
      j["rejected"] = e.rejected;
      j["status"] = k == 0 ? "skipped" : to_string(e.final_status);
      j["complete"] = e.complete();
      j["solver_seconds"] = e.solver_seconds;
      out = j.dump(2) + "\n";
    }
    write_output(output, out);

    std::string status = k == 0                   ? "not run"
                         : e.complete()           ? "exhausted"
                         : e.terms.size() == k    ? "limit reached"
                                                  : to_string(e.final_status);
    std::cerr << e.terms.size() << " solution(s) found, " << e.rejected
              << " artifact(s) rejected, solver time " << fixed(e.solver_seconds, 3) << " s ("
              << status << (e.reason.empty() ? "" : ": " + e.reason) << ")\n";
    if (e.final_status == SolveOutcome::Status::Unknown && e.reason == "timeout")
      return kTimeout;
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// check

struct CheckCmd {
  std::string grammar, term, goal;

  void add(CLI::App& root, std::function<int()>& run) {
    auto* app = root.add_subcommand("check", "Decide whether a term is a word of the grammar");
    app->add_option("grammar", grammar, "Grammar JSON")->required()->check(CLI::ExistingFile);
    app->add_option("term", term, "Term, e.g. 'up(right(up(start)))' or '(up start)'")
        ->required();
    app->add_option("--goal,-g", goal, "Nonterminal (default: the start symbol)");
    app->callback([this, &run] { run = [this] { return exec(); }; });
  }

  int exec() {
    TreeGrammar g;
    Term t;
    try {
      g = from_json(read_file(grammar));
      t = parse_term(term);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    bool yes = g.has(resolve_goal(g, goal)) && member(g, resolve_goal(g, goal), t);
    std::cout << (yes ? "true" : "false") << "\n";
    return yes ? 0 : 1;
  }
};

// ---------------------------------------------------------------------------
// bench

struct BenchCmd {
  int n = 10;
  std::uint32_t seed = 1;
  double density = 0.2;
  bool example = false;
  std::size_t depth = 0;
  std::string format = "text";
  std::string instantiate = "reachable";
  SolverFlags solver;

  void add(CLI::App& root, std::function<int()>& run) {
    auto* app = root.add_subcommand(
        "bench", "Time inhabitation, translation and a first solution on an n x n labyrinth");
    app->add_option("n", n, "Maze side length (>= 2)");
    app->add_option("--seed", seed, "Obstacle pattern seed");
    app->add_option("--density", density, "Obstacle probability per cell")
        ->check(CLI::Range(0.0, 1.0));
    app->add_flag("--example", example, "Use the fixed 3 x 4 example labyrinth instead");
    app->add_option("--depth,-d", depth,
                    "Finitization depth (default: the shortest path's tree height)")
        ->check(CLI::Range(1, 60));
    app->add_option("--instantiate", instantiate, "full or reachable")
        ->check(CLI::IsMember({"full", "reachable"}));
    app->add_option("--format,-f", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    solver.add(app);
    app->callback([this, &run] { run = [this] { return exec(); }; });
  }

  int exec() {
    if (!example && n < 2) throw ValidationError("maze size must be at least 2");
    SolverConfig cfg = solver.config();
    if (int rc = require_solver(cfg)) return rc;

    auto t0 = Clock::now();
    Maze m = example ? example_maze() : random_maze(n, seed, density);
    Repository repo = maze_repository(m);
    double t_generate = ms_since(t0);

    t0 = Clock::now();
    TreeGrammar g = inhabit(repo, position_type(m.goal));
    double t_inhabit = ms_since(t0);

    t0 = Clock::now();
    Tables t = assign_tables(g);
    ScriptOptions o;
    o.depth = depth ? depth : min_layout_depth(g, g.start).value_or(1);
    o.instantiation =
        instantiate == "reachable" ? Instantiation::Reachable : Instantiation::Full;
    SmtScript s = translate_grammar(g, g.start, t, o);
    double t_translate = ms_since(t0);

    t0 = Clock::now();
    Enumeration e = enumerate_solutions(s, g, g.start, t, cfg, 1);
    double t_solve = ms_since(t0);

    std::string result = !e.terms.empty()     ? "sat"
                         : e.complete()       ? "unsat"
                                              : to_string(e.final_status);
    if (format == "json") {
      json j = {{"width", m.width},
                {"height", m.height},
                {"seed", seed},
                {"density", density},
                {"example", example},
                {"nonterminals", g.rules.size()},
                {"rules", g.rule_count()},
                {"depth", o.depth},
                {"vertices", s.vertices.size()},
                {"assertions", s.assertions.size()},
                {"result", result},
                {"solution", e.terms.empty() ? json(nullptr) : json(to_sugar(e.terms[0]))},
                {"ms", {{"generate", t_generate},
                        {"inhabit", t_inhabit},
                        {"translate", t_translate},
                        {"solve", t_solve}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "labyrinth " << m.width << "x" << m.height;
      if (!example) std::cout << " seed " << seed << " density " << density;
      std::cout << "\n" << m.render();
      std::cout << "generate   " << fixed(t_generate) << " ms\n";
      std::cout << "inhabit    " << fixed(t_inhabit) << " ms  (" << g.rules.size()
                << " nonterminals, " << g.rule_count() << " alternatives)\n";
      std::cout << "translate  " << fixed(t_translate) << " ms  (depth " << o.depth << ", "
                << s.vertices.size() << " vertices, " << s.assertions.size()
                << " assertions)\n";
      std::cout << "solve      " << fixed(t_solve) << " ms  (" << result;
      if (!e.terms.empty()) std::cout << ": " << to_sugar(e.terms[0]);
      if (!e.complete() && e.terms.empty() && !e.reason.empty()) std::cout << ": " << e.reason;
      std::cout << ")\n";
      std::cout << "total      " << fixed(t_generate + t_inhabit + t_translate + t_solve)
                << " ms\n";
    }
    if (e.final_status == SolveOutcome::Status::Unknown && e.reason == "timeout")
      return kTimeout;
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inhabitation of intersection types via SMT: inhabit, translate, solve, "
               "enumerate, check, bench"};
  app.require_subcommand(1);
  std::function<int()> run;

  InhabitCmd inhabit_cmd;
  TranslateCmd translate_cmd;
  SolveCmd solve_cmd("solve", 1);
  SolveCmd enumerate_cmd("enumerate", 10);
  CheckCmd check_cmd;
  BenchCmd bench_cmd;
  inhabit_cmd.add(app, run);
  translate_cmd.add(app, run);
  solve_cmd.add(app, run, "Find a verified inhabitant via the SMT solver");
  enumerate_cmd.add(app, run, "Enumerate verified inhabitants via the SMT solver");
  check_cmd.add(app, run);
  bench_cmd.add(app, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    return run();
  } catch (const SolverTimeout& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTimeout;
  } catch (const SolverError& e) {
    std::cerr << "error: solver: " << e.what() << "\n";
    return kEnvironmentError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
