#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdl/solver.hpp"
#include "mdl/source.hpp"
#include "mdl/term.hpp"

namespace mdl {

enum class PortDirection : unsigned char { Input, Output };

struct Port {
  std::string name;
  PortDirection direction = PortDirection::Input;
  Term term;
  SourceSpan span;
};

struct Service {
  std::string name;
  std::vector<Port> ports;
  SourceSpan span;
  const Port* find_port(const std::string& port_name) const;
};

struct Channel {
  std::string from_service, from_port;
  std::string to_service, to_port;
  SourceSpan span;
  std::string id() const { return from_service + "." + from_port + " -> " + to_service + "." + to_port; }
};

/// Directed service graph. All b-variables and t-variables across all
/// interfaces share one global namespace, which is what lets guards and tail
/// variables wire distinct services together.
struct ServiceGraph {
  std::vector<Service> services;
  std::vector<Channel> channels;

  const Service* find_service(const std::string& name) const;
  /// Throws DanglingChannelError / RoleMismatchError.
  void validate() const;
};

/// Parses a `.chor` file: `service N { in|out P: term; ... }` declarations
/// and `channel A.P -> B.Q;` edges, with the same lexical rules as `.mdlc`.
ServiceGraph parse_choreography(std::string_view source, std::string filename = "<memory>");

/// One seniority constraint per channel, in declaration order: the output
/// interface must be junior to the connected input interface.
ConstraintSet derive_constraints(const ServiceGraph& graph);

/// Renders a constraint set in `.mdlc` syntax, one origin comment per item.
std::string constraints_to_text(const ConstraintSet& constraints);

struct PortReport {
  std::string service;
  std::string port;
  PortDirection direction = PortDirection::Input;
  Term original;
  std::optional<Term> configured;
  std::vector<std::string> dropped;  // labels whose guards solved to false; nested as dotted paths
  std::vector<std::pair<std::string, Term>> tail_expansions;
};

struct ConfigurationReport {
  bool satisfiable = false;
  SolveStats stats;
  BoolAssignment bvars;
  std::map<std::string, Term> down_vars;
  std::map<std::string, Term> up_vars;
  std::vector<PortReport> ports;          // declaration order
  std::vector<std::string> implicated;    // diagnostics when unsatisfiable
  BoolConstraintSet adjunct;              // final adjunct Boolean set
};

/// Solves the derived constraints and reports the configured interface of
/// every port, the dropped elements and the tail expansions.
ConfigurationReport configure(const ServiceGraph& graph, const SolveOptions& options = {});

std::string report_to_text(const ConfigurationReport& report);
std::string report_to_json(const ConfigurationReport& report);

}  // namespace mdl
