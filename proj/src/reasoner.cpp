#include "spstore/reasoner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "spstore/errors.hpp"
#include "spstore/ntriples.hpp"

namespace spstore {

Rule makeRule(std::string name, std::vector<RulePattern> premises, RulePattern conclusion) {
  std::set<std::string> bound;
  for (const RulePattern& prem : premises) {
    for (const RuleTerm* t : {&prem.s, &prem.p, &prem.o}) {
      if (t->isVariable) bound.insert(t->text);
    }
  }
  for (const RuleTerm* t : {&conclusion.s, &conclusion.p, &conclusion.o}) {
    if (t->isVariable && !bound.count(t->text)) {
      throw std::invalid_argument("rule " + name + ": conclusion variable ?" + t->text + " unbound");
    }
  }
  return Rule{std::move(name), std::move(premises), std::move(conclusion)};
}

const std::vector<Rule>& standardRdfsRules() {
  auto v = [](const char* n) { return RuleTerm::var(n); };
  auto c = [](const char* iri) { return RuleTerm::iri(iri); };
  // Two-premise rules put the instance premise first; that is the order
  // derivations are recorded and printed in.
  static const std::vector<Rule> rules = {
      makeRule("rdfs2", {{v("s"), v("p"), v("o")}, {v("p"), c(vocab::kRdfsDomain), v("c")}},
               {v("s"), c(vocab::kRdfType), v("c")}),
      makeRule("rdfs3", {{v("s"), v("p"), v("o")}, {v("p"), c(vocab::kRdfsRange), v("c")}},
               {v("o"), c(vocab::kRdfType), v("c")}),
      makeRule("rdfs5", {{v("p"), c(vocab::kRdfsSubPropertyOf), v("q")}, {v("q"), c(vocab::kRdfsSubPropertyOf), v("r")}},
               {v("p"), c(vocab::kRdfsSubPropertyOf), v("r")}),
      makeRule("rdfs7", {{v("s"), v("p"), v("o")}, {v("p"), c(vocab::kRdfsSubPropertyOf), v("q")}},
               {v("s"), v("q"), v("o")}),
      makeRule("rdfs9", {{v("s"), c(vocab::kRdfType), v("c")}, {v("c"), c(vocab::kRdfsSubClassOf), v("d")}},
               {v("s"), c(vocab::kRdfType), v("d")}),
      makeRule("rdfs11", {{v("c"), c(vocab::kRdfsSubClassOf), v("d")}, {v("d"), c(vocab::kRdfsSubClassOf), v("e")}},
               {v("c"), c(vocab::kRdfsSubClassOf), v("e")}),
  };
  return rules;
}

Ruleset Ruleset::rdfsDefault(const SpVocabulary& vocabulary, bool includeMetaAxiom) {
  Ruleset rs;
  rs.rules = standardRdfsRules();
  for (const auto& g : vocabulary.primitiveTriples()) rs.axioms.push_back(g);
  if (includeMetaAxiom) rs.axioms.push_back(vocabulary.metaAxiom());
  return rs;
}

Ruleset Ruleset::byNames(const std::vector<std::string>& names) {
  Ruleset rs;
  for (const std::string& name : names) {
    bool found = false;
    for (const Rule& r : standardRdfsRules()) {
      if (r.name == name) {
        rs.rules.push_back(r);
        found = true;
        break;
      }
    }
    if (!found) throw StoreError(ErrorCode::ConfigError, "unknown rule name " + name);
  }
  return rs;
}

namespace {

// A rule compiled against one store: constants resolved to ids, variables to
// dense slots. Rules whose constants are absent from the dictionary cannot
// match anything.
struct CompiledPattern {
  std::optional<TermId> s, p, o;   // set: constant
  int sVar = -1, pVar = -1, oVar = -1;
};

struct CompiledRule {
  const Rule* rule = nullptr;
  std::vector<CompiledPattern> premises;
  CompiledPattern conclusion;
  int varCount = 0;
  bool dead = false;  // a constant is not interned
};

CompiledRule compileRule(const TripleStore& store, const Rule& rule) {
  CompiledRule out;
  out.rule = &rule;
  std::map<std::string, int> slots;
  auto slotOf = [&](const std::string& name) {
    auto [it, added] = slots.emplace(name, static_cast<int>(slots.size()));
    return it->second;
  };
  auto compileTerm = [&](const RuleTerm& t, std::optional<TermId>& constant, int& var) {
    if (t.isVariable) {
      var = slotOf(t.text);
      return true;
    }
    auto id = store.lookup(Term::iri(t.text));
    if (!id) return false;
    constant = *id;
    return true;
  };
  auto compilePattern = [&](const RulePattern& p, CompiledPattern& cp) {
    return compileTerm(p.s, cp.s, cp.sVar) && compileTerm(p.p, cp.p, cp.pVar) && compileTerm(p.o, cp.o, cp.oVar);
  };
  for (const RulePattern& prem : rule.premises) {
    CompiledPattern cp;
    if (!compilePattern(prem, cp)) out.dead = true;
    out.premises.push_back(cp);
  }
  if (!compilePattern(rule.conclusion, out.conclusion)) out.dead = true;
  out.varCount = static_cast<int>(slots.size());
  return out;
}

constexpr TermId kUnbound{0xFFFFFFFFu};

bool bindPosition(int var, std::optional<TermId> constant, TermId value, std::vector<TermId>& bindings,
                  std::vector<int>& boundHere) {
  if (constant) return *constant == value;
  TermId& slot = bindings[static_cast<std::size_t>(var)];
  if (slot == kUnbound) {
    slot = value;
    boundHere.push_back(var);
    return true;
  }
  return slot == value;
}

bool matchTriple(const CompiledPattern& cp, const Triple& t, std::vector<TermId>& bindings,
                 std::vector<int>& boundHere) {
  std::size_t before = boundHere.size();
  if (bindPosition(cp.sVar, cp.s, t.s, bindings, boundHere) &&
      bindPosition(cp.pVar, cp.p, t.p, bindings, boundHere) &&
      bindPosition(cp.oVar, cp.o, t.o, bindings, boundHere)) {
    return true;
  }
  while (boundHere.size() > before) {
    bindings[static_cast<std::size_t>(boundHere.back())] = kUnbound;
    boundHere.pop_back();
  }
  return false;
}

void unbind(std::vector<TermId>& bindings, std::vector<int>& boundHere, std::size_t mark) {
  while (boundHere.size() > mark) {
    bindings[static_cast<std::size_t>(boundHere.back())] = kUnbound;
    boundHere.pop_back();
  }
}

IdPattern toQuery(const CompiledPattern& cp, const std::vector<TermId>& bindings) {
  auto pos = [&](std::optional<TermId> constant, int var) -> std::optional<TermId> {
    if (constant) return constant;
    if (var >= 0 && bindings[static_cast<std::size_t>(var)] != kUnbound) {
      return bindings[static_cast<std::size_t>(var)];
    }
    return std::nullopt;
  };
  return IdPattern{pos(cp.s, cp.sVar), pos(cp.p, cp.pVar), pos(cp.o, cp.oVar)};
}

// Conclusions that would put a literal in subject position or a non-IRI in
// predicate position are skipped rather than reported.
bool wellFormedConclusion(const TripleStore& store, const Triple& t) {
  return !store.term(t.s).isLiteral() && store.term(t.p).isIri();
}

class FixpointEngine {
 public:
  FixpointEngine(TripleStore& store, const Ruleset& ruleset, const MaterializeOptions& options)
      : store_(store), options_(options) {
    for (const Rule& r : ruleset.rules) compiled_.push_back(compileRule(store, r));
    if (options_.trace) trace_.emplace();
  }

  MaterializeResult run() {
    std::size_t ceiling = options_.tripleCeiling;
    if (ceiling == 0) ceiling = std::max<std::size_t>(store_.tripleCount() * 10, 1000);

    std::vector<Triple> delta;
    if (options_.strategy == Strategy::SemiNaive) {
      delta = store_.triples();
    }

    MaterializeResult result;
    while (true) {
      if (result.rounds >= options_.roundCeiling) {
        throw StoreError(ErrorCode::ResourceLimit,
                         "round ceiling " + std::to_string(options_.roundCeiling) + " reached");
      }
      std::map<Triple, Derivation> candidates;
      if (options_.strategy == Strategy::SemiNaive) {
        collectSemiNaive(delta, candidates);
      } else {
        collectNaive(candidates);
      }
      if (candidates.empty()) break;
      if (store_.tripleCount() + candidates.size() > ceiling) {
        throw StoreError(ErrorCode::ResourceLimit,
                         "triple ceiling " + std::to_string(ceiling) + " would be exceeded (round " +
                             std::to_string(result.rounds + 1) + ", store " + std::to_string(store_.tripleCount()) +
                             ", new " + std::to_string(candidates.size()) + ")");
      }
      delta.clear();
      for (auto& [t, derivation] : candidates) {
        if (store_.insert(t, Origin::Inferred)) {
          delta.push_back(t);
          ++result.inferredCount;
          if (trace_) trace_->emplace(t, std::move(derivation));
        }
      }
      ++result.rounds;
    }
    result.trace = std::move(trace_);
    return result;
  }

 private:
  void recordCandidate(std::map<Triple, Derivation>& candidates, const CompiledRule& cr,
                       const std::vector<TermId>& bindings, const std::vector<Triple>& premises) {
    auto value = [&](std::optional<TermId> constant, int var) {
      return constant ? *constant : bindings[static_cast<std::size_t>(var)];
    };
    Triple conclusion{value(cr.conclusion.s, cr.conclusion.sVar), value(cr.conclusion.p, cr.conclusion.pVar),
                      value(cr.conclusion.o, cr.conclusion.oVar)};
    if (store_.contains(conclusion) || !wellFormedConclusion(store_, conclusion)) return;
    if (candidates.count(conclusion)) return;
    candidates.emplace(conclusion, Derivation{conclusion, cr.rule->name, premises});
  }

  // Joins the remaining premises against the full store.
  void joinRest(const CompiledRule& cr, std::size_t premiseIndex, std::size_t skip,
                std::vector<TermId>& bindings, std::vector<int>& boundHere, std::vector<Triple>& premiseTriples,
                std::map<Triple, Derivation>& candidates) {
    if (premiseIndex == cr.premises.size()) {
      recordCandidate(candidates, cr, bindings, premiseTriples);
      return;
    }
    if (premiseIndex == skip) {
      joinRest(cr, premiseIndex + 1, skip, bindings, boundHere, premiseTriples, candidates);
      return;
    }
    const CompiledPattern& cp = cr.premises[premiseIndex];
    store_.forEachMatch(toQuery(cp, bindings), [&](const Triple& t) {
      std::size_t mark = boundHere.size();
      if (matchTriple(cp, t, bindings, boundHere)) {
        premiseTriples[premiseIndex] = t;
        joinRest(cr, premiseIndex + 1, skip, bindings, boundHere, premiseTriples, candidates);
        unbind(bindings, boundHere, mark);
      }
      return true;
    });
  }

  void collectNaive(std::map<Triple, Derivation>& candidates) {
    for (const CompiledRule& cr : compiled_) {
      if (cr.dead) continue;
      std::vector<TermId> bindings(static_cast<std::size_t>(cr.varCount), kUnbound);
      std::vector<int> boundHere;
      std::vector<Triple> premiseTriples(cr.premises.size());
      joinRest(cr, 0, cr.premises.size(), bindings, boundHere, premiseTriples, candidates);
    }
  }

  // Standard semi-naive round: for each premise position, match that premise
  // against the delta and the rest against the full store.
  void collectSemiNaive(const std::vector<Triple>& delta, std::map<Triple, Derivation>& candidates) {
    for (const CompiledRule& cr : compiled_) {
      if (cr.dead) continue;
      std::vector<TermId> bindings(static_cast<std::size_t>(cr.varCount), kUnbound);
      std::vector<int> boundHere;
      std::vector<Triple> premiseTriples(cr.premises.size());
      for (std::size_t deltaPos = 0; deltaPos < cr.premises.size(); ++deltaPos) {
        const CompiledPattern& cp = cr.premises[deltaPos];
        for (const Triple& t : delta) {
          std::size_t mark = boundHere.size();
          if (matchTriple(cp, t, bindings, boundHere)) {
            premiseTriples[deltaPos] = t;
            joinRest(cr, 0, deltaPos, bindings, boundHere, premiseTriples, candidates);
            unbind(bindings, boundHere, mark);
          }
        }
      }
    }
  }

  TripleStore& store_;
  const MaterializeOptions& options_;
  std::vector<CompiledRule> compiled_;
  std::optional<DerivationTrace> trace_;
};

}  // namespace

std::vector<Triple> applyRuleOnce(const TripleStore& store, const Rule& rule) {
  CompiledRule cr = compileRule(store, rule);
  if (cr.dead) return {};
  std::map<Triple, Derivation> candidates;
  std::vector<TermId> bindings(static_cast<std::size_t>(cr.varCount), kUnbound);
  std::vector<int> boundHere;
  std::vector<Triple> premiseTriples(cr.premises.size());

  // Same join as one naive round, restricted to this rule.
  struct Once {
    const TripleStore& store;
    const CompiledRule& cr;
    std::map<Triple, Derivation>& candidates;

    void recurse(std::size_t i, std::vector<TermId>& bindings, std::vector<int>& boundHere,
                 std::vector<Triple>& premiseTriples) {
      if (i == cr.premises.size()) {
        auto value = [&](std::optional<TermId> constant, int var) {
          return constant ? *constant : bindings[static_cast<std::size_t>(var)];
        };
        Triple conclusion{value(cr.conclusion.s, cr.conclusion.sVar), value(cr.conclusion.p, cr.conclusion.pVar),
                          value(cr.conclusion.o, cr.conclusion.oVar)};
        if (store.contains(conclusion) || !wellFormedConclusion(store, conclusion)) return;
        candidates.emplace(conclusion, Derivation{conclusion, cr.rule->name, premiseTriples});
        return;
      }
      const CompiledPattern& cp = cr.premises[i];
      store.forEachMatch(toQuery(cp, bindings), [&](const Triple& t) {
        std::size_t mark = boundHere.size();
        if (matchTriple(cp, t, bindings, boundHere)) {
          premiseTriples[i] = t;
          recurse(i + 1, bindings, boundHere, premiseTriples);
          unbind(bindings, boundHere, mark);
        }
        return true;
      });
    }
  } once{store, cr, candidates};
  once.recurse(0, bindings, boundHere, premiseTriples);

  std::vector<Triple> out;
  out.reserve(candidates.size());
  for (const auto& [t, d] : candidates) out.push_back(t);
  return out;
}

MaterializeResult materialize(TripleStore& store, const Ruleset& ruleset, const MaterializeOptions& options) {
  for (const auto& axiom : ruleset.axioms) {
    Triple t{store.intern(Term::iri(axiom[0])), store.intern(Term::iri(axiom[1])), store.intern(Term::iri(axiom[2]))};
    store.insert(t, Origin::Base);
  }
  // Conclusion constants (rdf:type and friends) must be representable even
  // when the base data never mentions them and the ruleset carries no axioms.
  for (const Rule& rule : ruleset.rules) {
    for (const RuleTerm* t : {&rule.conclusion.s, &rule.conclusion.p, &rule.conclusion.o}) {
      if (!t->isVariable) store.intern(Term::iri(t->text));
    }
  }
  FixpointEngine engine(store, ruleset, options);
  return engine.run();
}

std::vector<Derivation> explain(const DerivationTrace& trace, const TripleStore& store, const Triple& triple) {
  auto origin = store.origin(triple);
  if (!origin) throw StoreError(ErrorCode::NotInferred, "triple is not in the store");
  if (*origin == Origin::Base) throw StoreError(ErrorCode::NotInferred, "triple is asserted, not inferred");
  if (!trace.count(triple)) {
    throw StoreError(ErrorCode::NotInferred, "no derivation recorded (materialize ran without tracing?)");
  }

  std::vector<Derivation> chain;
  std::set<Triple> emitted;
  // Premises-first walk; shared subproofs are emitted once.
  std::vector<std::pair<Triple, bool>> stack{{triple, false}};
  while (!stack.empty()) {
    auto [current, expanded] = stack.back();
    stack.pop_back();
    if (emitted.count(current)) continue;
    auto it = trace.find(current);
    if (it == trace.end()) continue;  // base triple
    if (expanded) {
      emitted.insert(current);
      chain.push_back(it->second);
      continue;
    }
    stack.emplace_back(current, true);
    const auto& premises = it->second.premises;
    for (auto p = premises.rbegin(); p != premises.rend(); ++p) {
      stack.emplace_back(*p, false);
    }
  }
  return chain;
}

std::string formatDerivation(const TripleStore& store, const Derivation& d) {
  auto tripleText = [&](const Triple& t) { return "(" + renderTriple(store, t) + ")"; };
  std::string out = tripleText(d.conclusion) + " <= " + d.rule + "(";
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    if (i) out += ", ";
    out += tripleText(d.premises[i]);
  }
  out += ")";
  return out;
}

}  // namespace spstore
