#include "mdl/constraints.hpp"

#include <set>

#include "mdl/errors.hpp"

namespace mdl {

namespace {

struct Emitter {
  std::vector<GeneratedFormula> out;
  std::set<std::string> seen;  // keyed by printed normal form

  void emit(const Guard& formula, const std::string& where) {
    Guard normal = formula.normalized();
    if (normal.is_true()) return;
    if (!seen.insert(normal.to_string()).second) return;
    out.push_back({std::move(normal), where});
  }
};

void wfc_into(const Term& t, const Guard& context, const std::string& where, Emitter& em) {
  switch (t.kind()) {
    case TermKind::Symbol:
    case TermKind::DownVar:
    case TermKind::UpVar:
      return;
    case TermKind::Tuple: {
      for (std::size_t i = 0; i < t.items().size(); ++i) {
        wfc_into(t.items()[i], context, where + "." + std::to_string(i), em);
      }
      return;
    }
    case TermKind::Record:
    case TermKind::Choice: {
      const auto& elems = t.elements();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
          if (elems[i].label != elems[j].label) continue;
          em.emit(Guard::implication(context,
                                     Guard::negation(Guard::conjunction(elems[i].guard, elems[j].guard))),
                  where + "." + elems[i].label);
        }
      }
      for (const Element& e : elems) {
        wfc_into(e.term(), Guard::conjunction(context, e.guard), where + "." + e.label, em);
      }
      return;
    }
    case TermKind::Switch: {
      const auto& alts = t.alternatives();
      for (std::size_t i = 0; i < alts.size(); ++i) {
        for (std::size_t j = i + 1; j < alts.size(); ++j) {
          em.emit(Guard::implication(context, Guard::negation(Guard::conjunction(alts[i].guard, alts[j].guard))),
                  where + ".switch");
        }
      }
      std::vector<Guard> guards;
      guards.reserve(alts.size());
      for (const SwitchAlt& alt : alts) guards.push_back(alt.guard);
      em.emit(Guard::implication(context, Guard::disjunction_of(guards)), where + ".switch");
      for (std::size_t i = 0; i < alts.size(); ++i) {
        wfc_into(alts[i].term(), Guard::conjunction(context, alts[i].guard),
                 where + ".switch#" + std::to_string(i), em);
      }
      return;
    }
  }
}

bool is_down_structural(const Term& t) {
  return t.kind() == TermKind::Symbol || t.kind() == TermKind::Tuple || t.kind() == TermKind::Record;
}

void sc_into(const Term& t1, const Term& t2, const Guard& context, const std::string& where, Emitter& em) {
  // Switches distribute their alternative guards as implications.
  if (t1.kind() == TermKind::Switch) {
    for (std::size_t i = 0; i < t1.alternatives().size(); ++i) {
      const SwitchAlt& alt = t1.alternatives()[i];
      sc_into(alt.term(), t2, Guard::conjunction(context, alt.guard), where + ".lswitch#" + std::to_string(i), em);
    }
    return;
  }
  if (t2.kind() == TermKind::Switch) {
    for (std::size_t i = 0; i < t2.alternatives().size(); ++i) {
      const SwitchAlt& alt = t2.alternatives()[i];
      sc_into(t1, alt.term(), Guard::conjunction(context, alt.guard), where + ".rswitch#" + std::to_string(i), em);
    }
    return;
  }
  if (t1.kind() == TermKind::DownVar || t1.kind() == TermKind::UpVar || t2.kind() == TermKind::DownVar ||
      t2.kind() == TermKind::UpVar) {
    throw SortError("seniority constraint generation requires semi-ground terms");
  }
  if (t1.kind() == TermKind::Symbol && t2.kind() == TermKind::Symbol && t1.name() == t2.name()) {
    return;  // equal symbols: vacuous
  }
  if (t1.kind() == TermKind::Tuple && t2.kind() == TermKind::Tuple &&
      t1.items().size() == t2.items().size()) {
    for (std::size_t i = 0; i < t1.items().size(); ++i) {
      sc_into(t1.items()[i], t2.items()[i], context, where + "." + std::to_string(i), em);
    }
    return;
  }
  if (t2.kind() == TermKind::Record && is_down_structural(t1)) {
    // Width-covariant records: every enabled right element needs an enabled
    // same-label left element with a junior payload. A non-record left side
    // behaves as a record with no elements.
    for (const Element& e2 : t2.elements()) {
      std::vector<Guard> partners;
      if (t1.kind() == TermKind::Record) {
        for (const Element& e1 : t1.elements()) {
          if (e1.label != e2.label) continue;
          partners.push_back(e1.guard);
          Emitter payload;
          sc_into(e1.term(), e2.term(), Guard::constant(true), where + "." + e2.label, payload);
          for (const GeneratedFormula& g : payload.out) {
            em.emit(Guard::implication(
                        Guard::conjunction(context, Guard::conjunction(e1.guard, e2.guard)), g.formula),
                    g.provenance);
          }
        }
      }
      em.emit(Guard::implication(Guard::conjunction(context, e2.guard), Guard::disjunction_of(partners)),
              where + "." + e2.label);
    }
    return;
  }
  if (t1.kind() == TermKind::Choice && t2.kind() == TermKind::Choice) {
    // Width-contravariant choices: every enabled left variant needs an
    // enabled same-label right variant with a junior payload.
    for (const Element& e1 : t1.elements()) {
      std::vector<Guard> partners;
      for (const Element& e2 : t2.elements()) {
        if (e2.label != e1.label) continue;
        partners.push_back(e2.guard);
        Emitter payload;
        sc_into(e1.term(), e2.term(), Guard::constant(true), where + "." + e1.label, payload);
        for (const GeneratedFormula& g : payload.out) {
          em.emit(Guard::implication(Guard::conjunction(context, Guard::conjunction(e1.guard, e2.guard)),
                                     g.formula),
                  g.provenance);
        }
      }
      em.emit(Guard::implication(Guard::conjunction(context, e1.guard), Guard::disjunction_of(partners)),
              where + "." + e1.label);
    }
    return;
  }
  // Unrelated categories.
  em.emit(Guard::implication(context, Guard::constant(false)), where);
}

std::vector<Guard> strip(std::vector<GeneratedFormula> items) {
  std::vector<Guard> out;
  out.reserve(items.size());
  for (GeneratedFormula& g : items) out.push_back(std::move(g.formula));
  return out;
}

}  // namespace

std::vector<GeneratedFormula> wfc_provenanced(const Term& term, const std::string& origin) {
  Emitter em;
  wfc_into(term, Guard::constant(true), origin, em);
  return std::move(em.out);
}

std::vector<GeneratedFormula> sc_provenanced(const Term& lhs, const Term& rhs, const std::string& origin) {
  Emitter em;
  sc_into(lhs, rhs, Guard::constant(true), origin, em);
  return std::move(em.out);
}

std::vector<Guard> wfc(const Term& term) { return strip(wfc_provenanced(term, "wfc")); }

std::vector<Guard> sc(const Term& lhs, const Term& rhs) { return strip(sc_provenanced(lhs, rhs, "sc")); }

}  // namespace mdl
