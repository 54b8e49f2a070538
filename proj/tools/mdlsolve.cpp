// Command-line driver: solve constraint files, lint them, and configure
// service choreographies.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdl/choreography.hpp"
#include "mdl/constraints.hpp"
#include "mdl/errors.hpp"
#include "mdl/sat.hpp"
#include "mdl/solver.hpp"
#include "mdl/text.hpp"

#include <json.hpp>

namespace {

// 0 solved/satisfiable, 1 unsatisfiable, 2 input error, 3 internal failure.
enum ExitStatus : int { kOk = 0, kUnsat = 1, kInputError = 2, kInternalError = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mdl::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct SolveFlags {
  std::string format = "text";
  int max_iters = 10000;
  std::string dimacs_path;
  bool verify = false;
  bool trace = false;
};

mdl::ConstraintSet load_constraints(const std::string& path) {
  const std::string source = read_file(path);
  mdl::ConstraintSet set;
  for (mdl::ParsedConstraint& item : mdl::parse_constraint_file(source, path)) {
    set.add({std::move(item.lhs), std::move(item.rhs), item.span.to_string()});
  }
  return set;
}

mdl::SolveOptions make_options(const SolveFlags& flags) {
  mdl::SolveOptions options;
  options.max_iterations = flags.max_iters;
  options.audit = true;  // --verify is implied; the audit is always on
  if (flags.trace) {
    options.on_iteration = [](int iteration, const mdl::ApproximationVector& vec) {
      std::cerr << "iteration " << iteration << ":";
      for (std::size_t i = 0; i < vec.vars.downvars.size(); ++i) {
        std::cerr << ' ' << vec.vars.downvars[i] << '=';
        std::cerr << (vec.down[i].is_value() ? mdl::print_term(vec.down[i].term()) : std::string("_|_"));
      }
      for (std::size_t i = 0; i < vec.vars.upvars.size(); ++i) {
        std::cerr << ' ' << vec.vars.upvars[i] << '=';
        std::cerr << (vec.up[i].is_value() ? mdl::print_term(vec.up[i].term()) : std::string("^T^"));
      }
      std::cerr << '\n';
    };
  }
  return options;
}

void dump_dimacs(const mdl::BoolConstraintSet& adjunct, const std::string& path) {
  mdl::Cnf cnf = mdl::to_cnf(adjunct);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdl::Error("cannot write '" + path + "'");
  mdl::write_dimacs(cnf, out);
  std::ofstream names(path + ".map", std::ios::binary);
  if (!names) throw mdl::Error("cannot write '" + path + ".map'");
  mdl::write_dimacs_names(cnf, names);
}

int run_solve(const std::string& path, const SolveFlags& flags) {
  mdl::ConstraintSet constraints = load_constraints(path);
  mdl::SolveOptions options = make_options(flags);
  mdl::SolveResult result = mdl::solve(constraints, options);
  mdl::VariableInventory inv = constraints.inventory();

  if (!flags.dimacs_path.empty()) dump_dimacs(result.adjunct, flags.dimacs_path);

  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["verdict"] = result.satisfiable() ? "sat" : "unsat";
    nlohmann::ordered_json bvars = nlohmann::ordered_json::object();
    nlohmann::ordered_json tdown = nlohmann::ordered_json::object();
    nlohmann::ordered_json tup = nlohmann::ordered_json::object();
    if (result.satisfiable()) {
      for (const std::string& name : inv.bvars) bvars[name] = result.solution->bvars.at(name);
      for (const std::string& name : inv.downvars) tdown[name] = mdl::print_term(result.solution->down_vars.at(name));
      for (const std::string& name : inv.upvars) tup[name] = mdl::print_term(result.solution->up_vars.at(name));
    }
    j["bvars"] = std::move(bvars);
    j["tvars_down"] = std::move(tdown);
    j["tvars_up"] = std::move(tup);
    j["iterations"] = result.stats.iterations;
    if (!result.satisfiable()) j["implicated"] = result.implicated;
    std::cout << j.dump(2) << '\n';
  } else {
    if (!result.satisfiable()) {
      std::cout << "UNSAT\n";
      for (const std::string& origin : result.implicated) std::cout << "  " << origin << '\n';
    } else {
      for (const std::string& name : inv.bvars) {
        std::cout << name << " = " << (result.solution->bvars.at(name) ? "true" : "false") << '\n';
      }
      for (const std::string& name : inv.downvars) {
        std::cout << name << " = " << mdl::print_term(result.solution->down_vars.at(name)) << '\n';
      }
      for (const std::string& name : inv.upvars) {
        std::cout << name << " = " << mdl::print_term(result.solution->up_vars.at(name)) << '\n';
      }
    }
  }
  return result.satisfiable() ? kOk : kUnsat;
}

int run_check(const std::string& path) {
  const std::string source = read_file(path);
  std::vector<mdl::ParsedConstraint> items = mdl::parse_constraint_file(source, path);
  mdl::ConstraintSet set;
  std::map<std::string, int> bvar_occurrences;
  int index = 0;
  for (mdl::ParsedConstraint& item : items) {
    ++index;
    mdl::VariableInventory inv;
    inv.merge_from(item.lhs);
    inv.merge_from(item.rhs);
    std::cout << "constraint " << index << " (" << item.span.to_string() << "):";
    auto print_group = [](const char* tag, const std::vector<std::string>& names) {
      std::cout << ' ' << tag << "=";
      if (names.empty()) {
        std::cout << "none";
        return;
      }
      for (std::size_t i = 0; i < names.size(); ++i) std::cout << (i ? "," : "") << names[i];
    };
    print_group("bvars", inv.bvars);
    print_group("down", inv.downvars);
    print_group("up", inv.upvars);
    std::cout << '\n';
    for (const std::string& b : inv.bvars) ++bvar_occurrences[b];
    set.add({std::move(item.lhs), std::move(item.rhs), item.span.to_string()});
  }
  mdl::VariableInventory inv = set.inventory();
  // Lint: a b-variable that occurs in a single constraint cannot wire
  // anything together.
  for (const std::string& name : inv.bvars) {
    if (bvar_occurrences[name] <= 1) {
      std::cout << "warning: b-variable '" << name << "' occurs in only one constraint\n";
    }
  }
  std::cout << "ok: " << set.size() << " constraint" << (set.size() == 1 ? "" : "s") << '\n';
  return kOk;
}

int run_chor(const std::string& path, const SolveFlags& flags, bool emit_constraints) {
  const std::string source = read_file(path);
  mdl::ServiceGraph graph = mdl::parse_choreography(source, path);
  if (emit_constraints) {
    std::cout << mdl::constraints_to_text(mdl::derive_constraints(graph));
    return kOk;
  }
  mdl::SolveOptions options = make_options(flags);
  mdl::ConfigurationReport report = mdl::configure(graph, options);
  if (!flags.dimacs_path.empty()) dump_dimacs(report.adjunct, flags.dimacs_path);
  std::cout << (flags.format == "json" ? mdl::report_to_json(report) : mdl::report_to_text(report));
  return report.satisfiable ? kOk : kUnsat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interface reconciliation solver for MDL service descriptions"};
  app.require_subcommand(1);

  SolveFlags flags;
  std::string file;

  CLI::App* solve = app.add_subcommand("solve", "Solve a .mdlc constraint file");
  solve->add_option("file", file, "constraint file")->required();
  solve->add_option("--format", flags.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  solve->add_option("--max-iters", flags.max_iters, "iteration cap");
  solve->add_option("--dimacs", flags.dimacs_path, "dump the adjunct CNF to this path");
  solve->add_flag("--verify", flags.verify, "force the post-solve seniority audit");
  solve->add_flag("--trace", flags.trace, "dump per-iteration approximations to stderr");

  CLI::App* check = app.add_subcommand("check", "Parse and lint a .mdlc constraint file");
  check->add_option("file", file, "constraint file")->required();

  bool emit_constraints = false;
  CLI::App* chor = app.add_subcommand("chor", "Configure a .chor service choreography");
  chor->add_option("file", file, "choreography file")->required();
  chor->add_option("--format", flags.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  chor->add_option("--max-iters", flags.max_iters, "iteration cap");
  chor->add_option("--dimacs", flags.dimacs_path, "dump the adjunct CNF to this path");
  chor->add_flag("--verify", flags.verify, "force the post-solve seniority audit");
  chor->add_flag("--trace", flags.trace, "dump per-iteration approximations to stderr");
  chor->add_flag("--emit-constraints", emit_constraints, "print the derived constraints instead of solving");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (solve->parsed()) return run_solve(file, flags);
    if (check->parsed()) return run_check(file);
    if (chor->parsed()) return run_chor(file, flags, emit_constraints);
  } catch (const mdl::IterationLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const mdl::VerificationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const mdl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}
