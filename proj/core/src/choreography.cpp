#include "mdl/choreography.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mdl/errors.hpp"
#include "mdl/text.hpp"
#include "parse_internal.hpp"

namespace mdl {

const Port* Service::find_port(const std::string& port_name) const {
  for (const Port& p : ports) {
    if (p.name == port_name) return &p;
  }
  return nullptr;
}

const Service* ServiceGraph::find_service(const std::string& name) const {
  for (const Service& s : services) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void ServiceGraph::validate() const {
  for (const Service& s : services) {
    std::set<std::string> names;
    for (const Port& p : s.ports) {
      if (!names.insert(p.name).second) {
        throw Error("service '" + s.name + "' declares port '" + p.name + "' twice");
      }
    }
  }
  for (const Channel& c : channels) {
    const Service* from = find_service(c.from_service);
    const Service* to = find_service(c.to_service);
    const Port* out = from ? from->find_port(c.from_port) : nullptr;
    const Port* in = to ? to->find_port(c.to_port) : nullptr;
    if (out == nullptr || in == nullptr) {
      throw DanglingChannelError("channel " + c.id() + " references an unknown endpoint" +
                                 (c.span.known() ? " (" + c.span.to_string() + ")" : ""));
    }
    if (out->direction != PortDirection::Output || in->direction != PortDirection::Input) {
      throw RoleMismatchError("channel " + c.id() + " must connect an output port to an input port" +
                              (c.span.known() ? " (" + c.span.to_string() + ")" : ""));
    }
  }
}

ServiceGraph parse_choreography(std::string_view source, std::string filename) {
  detail::Parser parser(source, std::move(filename));
  ServiceGraph graph;
  while (!parser.at(detail::Tok::End)) {
    if (parser.accept_word("service")) {
      Service service;
      detail::Token name = parser.expect(detail::Tok::Ident, "service name");
      service.name = name.text;
      service.span = name.span;
      parser.expect(detail::Tok::LBrace, "opening a service body");
      while (!parser.accept(detail::Tok::RBrace)) {
        Port port;
        if (parser.accept_word("in")) {
          port.direction = PortDirection::Input;
        } else if (parser.accept_word("out")) {
          port.direction = PortDirection::Output;
        } else {
          parser.fail("expected 'in', 'out' or '}' in a service body", {"in", "out", "'}'"});
        }
        detail::Token port_name = parser.expect(detail::Tok::Ident, "port name");
        port.name = port_name.text;
        port.span = port_name.span;
        parser.expect(detail::Tok::Colon, "between port name and interface term");
        port.term = parser.parse_term();
        parser.expect(detail::Tok::Semi, "terminating a port declaration");
        service.ports.push_back(std::move(port));
      }
      graph.services.push_back(std::move(service));
      continue;
    }
    if (parser.accept_word("channel")) {
      Channel channel;
      channel.span = parser.peek().span;
      channel.from_service = parser.expect(detail::Tok::Ident, "source service").text;
      parser.expect(detail::Tok::Dot, "between service and port");
      channel.from_port = parser.expect(detail::Tok::Ident, "source port").text;
      parser.expect(detail::Tok::Arrow, "between channel endpoints");
      channel.to_service = parser.expect(detail::Tok::Ident, "target service").text;
      parser.expect(detail::Tok::Dot, "between service and port");
      channel.to_port = parser.expect(detail::Tok::Ident, "target port").text;
      parser.expect(detail::Tok::Semi, "terminating a channel");
      graph.channels.push_back(std::move(channel));
      continue;
    }
    parser.fail("expected 'service' or 'channel'", {"service", "channel"});
  }
  graph.validate();
  return graph;
}

ConstraintSet derive_constraints(const ServiceGraph& graph) {
  graph.validate();
  ConstraintSet out;
  for (const Channel& c : graph.channels) {
    const Port* from = graph.find_service(c.from_service)->find_port(c.from_port);
    const Port* to = graph.find_service(c.to_service)->find_port(c.to_port);
    std::string origin = "channel " + c.id();
    if (c.span.known()) origin += " (" + c.span.to_string() + ")";
    out.add({from->term, to->term, std::move(origin)});
  }
  return out;
}

std::string constraints_to_text(const ConstraintSet& constraints) {
  std::string out;
  for (const SeniorityConstraint& c : constraints.items()) {
    if (!c.origin.empty()) {
      out += "// " + c.origin + "\n";
    }
    out += print_term(c.lhs) + " <= " + print_term(c.rhs) + ";\n";
  }
  return out;
}

namespace {

void collect_dropped(const Term& term, const BoolAssignment& bvars, const std::string& prefix,
                     std::vector<std::string>& out) {
  switch (term.kind()) {
    case TermKind::Tuple:
      for (const Term& item : term.items()) collect_dropped(item, bvars, prefix, out);
      return;
    case TermKind::Record:
    case TermKind::Choice:
      for (const Element& e : term.elements()) {
        const std::string path = prefix.empty() ? e.label : prefix + "." + e.label;
        bool kept = true;
        if (!e.guard.is_constant()) {
          kept = e.guard.evaluate(bvars);
        } else {
          kept = e.guard.constant_value();
        }
        if (!kept) {
          out.push_back(path);
          continue;
        }
        collect_dropped(e.term(), bvars, path, out);
      }
      return;
    default:
      return;
  }
}

void collect_tails(const Term& term, const std::map<std::string, Term>& down_vals,
                   const std::map<std::string, Term>& up_vals, std::vector<std::pair<std::string, Term>>& out,
                   std::set<std::string>& seen) {
  switch (term.kind()) {
    case TermKind::Tuple:
      for (const Term& item : term.items()) collect_tails(item, down_vals, up_vals, out, seen);
      return;
    case TermKind::Record:
    case TermKind::Choice: {
      if (term.tail() && seen.insert(*term.tail()).second) {
        const auto& source = term.kind() == TermKind::Record ? down_vals : up_vals;
        auto it = source.find(*term.tail());
        if (it != source.end()) out.emplace_back(*term.tail(), it->second);
      }
      for (const Element& e : term.elements()) collect_tails(e.term(), down_vals, up_vals, out, seen);
      return;
    }
    case TermKind::Switch:
      for (const SwitchAlt& alt : term.alternatives()) collect_tails(alt.term(), down_vals, up_vals, out, seen);
      return;
    default:
      return;
  }
}

}  // namespace

ConfigurationReport configure(const ServiceGraph& graph, const SolveOptions& options) {
  ConstraintSet constraints = derive_constraints(graph);
  SolveResult solved = solve(constraints, options);

  ConfigurationReport report;
  report.stats = solved.stats;
  report.adjunct = std::move(solved.adjunct);
  report.satisfiable = solved.satisfiable();
  if (!report.satisfiable) {
    report.implicated = solved.implicated;
  } else {
    report.bvars = solved.solution->bvars;
    report.down_vars = solved.solution->down_vars;
    report.up_vars = solved.solution->up_vars;
  }

  for (const Service& s : graph.services) {
    for (const Port& p : s.ports) {
      PortReport pr;
      pr.service = s.name;
      pr.port = p.name;
      pr.direction = p.direction;
      pr.original = p.term;
      if (report.satisfiable) {
        TermSubstitution subst{report.bvars, report.down_vars, report.up_vars};
        pr.configured = canonicalize(substitute(p.term, subst));
        collect_dropped(p.term, report.bvars, "", pr.dropped);
        std::set<std::string> seen;
        collect_tails(p.term, report.down_vars, report.up_vars, pr.tail_expansions, seen);
      }
      report.ports.push_back(std::move(pr));
    }
  }
  return report;
}

std::string report_to_text(const ConfigurationReport& report) {
  std::ostringstream out;
  out << "verdict: " << (report.satisfiable ? "satisfiable" : "unsatisfiable") << '\n';
  out << "iterations: " << report.stats.iterations << '\n';
  if (!report.satisfiable) {
    if (!report.implicated.empty()) {
      out << "implicated:\n";
      for (const std::string& origin : report.implicated) out << "  " << origin << '\n';
    }
    return out.str();
  }
  out << "variables:\n";
  for (const auto& [name, value] : report.bvars) out << "  " << name << " = " << (value ? "true" : "false") << '\n';
  for (const auto& [name, value] : report.down_vars) out << "  " << name << " = " << print_term(value) << '\n';
  for (const auto& [name, value] : report.up_vars) out << "  " << name << " = " << print_term(value) << '\n';
  std::string current_service;
  for (const PortReport& pr : report.ports) {
    if (pr.service != current_service) {
      current_service = pr.service;
      out << "service " << current_service << '\n';
    }
    out << "  " << (pr.direction == PortDirection::Output ? "out" : "in") << ' ' << pr.port << ": "
        << print_term(*pr.configured) << '\n';
    if (!pr.dropped.empty()) {
      out << "    dropped:";
      for (const std::string& d : pr.dropped) out << ' ' << d;
      out << '\n';
    }
    for (const auto& [var, value] : pr.tail_expansions) {
      out << "    tail " << var << " = " << print_term(value) << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const ConfigurationReport& report) {
  nlohmann::ordered_json j;
  j["verdict"] = report.satisfiable ? "sat" : "unsat";
  j["iterations"] = report.stats.iterations;
  nlohmann::ordered_json bvars = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.bvars) bvars[name] = value;
  j["bvars"] = std::move(bvars);
  nlohmann::ordered_json tvars = nlohmann::ordered_json::object();
  nlohmann::ordered_json down = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.down_vars) down[name] = print_term(value);
  nlohmann::ordered_json up = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.up_vars) up[name] = print_term(value);
  tvars["down"] = std::move(down);
  tvars["up"] = std::move(up);
  j["tvars"] = std::move(tvars);
  if (!report.satisfiable) {
    j["implicated"] = report.implicated;
  }
  nlohmann::ordered_json services = nlohmann::ordered_json::array();
  std::string current;
  for (const PortReport& pr : report.ports) {
    if (services.empty() || pr.service != current) {
      current = pr.service;
      nlohmann::ordered_json s;
      s["name"] = pr.service;
      s["ports"] = nlohmann::ordered_json::array();
      services.push_back(std::move(s));
    }
    nlohmann::ordered_json port;
    port["name"] = pr.port;
    port["direction"] = pr.direction == PortDirection::Output ? "out" : "in";
    port["original"] = print_term(pr.original);
    if (pr.configured) port["configured"] = print_term(*pr.configured);
    port["dropped"] = pr.dropped;
    nlohmann::ordered_json tails = nlohmann::ordered_json::object();
    for (const auto& [var, value] : pr.tail_expansions) tails[var] = print_term(value);
    port["tails"] = std::move(tails);
    services.back()["ports"].push_back(std::move(port));
  }
  j["services"] = std::move(services);
  return j.dump(2) + "\n";
}

}  // namespace mdl
