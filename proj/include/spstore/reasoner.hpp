#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spstore/singleton.hpp"
#include "spstore/store.hpp"

namespace spstore {

// One slot of a rule template: a named variable or a constant IRI.
struct RuleTerm {
  bool isVariable = false;
  std::string text;

  static RuleTerm var(std::string name) { return {true, std::move(name)}; }
  static RuleTerm iri(std::string value) { return {false, std::move(value)}; }
};

struct RulePattern {
  RuleTerm s, p, o;
};

// premises -> conclusion over triple templates. Every conclusion variable
// must be bound by some premise; checked on construction via makeRule.
struct Rule {
  std::string name;
  std::vector<RulePattern> premises;
  RulePattern conclusion;
};

Rule makeRule(std::string name, std::vector<RulePattern> premises, RulePattern conclusion);

struct Ruleset {
  std::vector<Rule> rules;
  std::vector<std::array<std::string, 3>> axioms;  // ground triples injected before evaluation

  // rdfs2, rdfs3, rdfs5, rdfs7, rdfs9, rdfs11 with the singleton-property
  // declaration triples (and, by default, the meta axiom) as axioms.
  static Ruleset rdfsDefault(const SpVocabulary& vocabulary = SpVocabulary::standard(),
                             bool includeMetaAxiom = true);

  // The named subset of the default rules, with no axioms.
  static Ruleset byNames(const std::vector<std::string>& names);
};

// The standard RDFS instance/schema rules this engine ships.
const std::vector<Rule>& standardRdfsRules();

struct Derivation {
  Triple conclusion;
  std::string rule;
  std::vector<Triple> premises;
};

// First derivation recorded per inferred triple.
using DerivationTrace = std::unordered_map<Triple, Derivation, TripleHash>;

enum class Strategy { Naive, SemiNaive };

struct MaterializeOptions {
  Strategy strategy = Strategy::SemiNaive;
  bool trace = false;
  std::size_t roundCeiling = 10000;
  std::size_t tripleCeiling = 0;  // 0: 10x the store size at call time (min 1000)
};

struct MaterializeResult {
  std::size_t inferredCount = 0;
  std::size_t rounds = 0;
  std::optional<DerivationTrace> trace;
};

// All instantiations of `rule` whose premises match the store and whose
// conclusion is well-formed and absent. The store is not modified, so a rule
// constant the dictionary has never seen makes the rule inert here: premise
// constants cannot match, and conclusions mentioning them cannot be encoded
// as ids. materialize() interns conclusion constants up front, so this edge
// only affects direct calls on stores that never saw e.g. rdf:type.
std::vector<Triple> applyRuleOnce(const TripleStore& store, const Rule& rule);

// Least fixpoint of the ruleset over base + axioms. New triples are flagged
// inferred; axioms are inserted as base. Both strategies produce the same
// set. Throws ResourceLimit when a ceiling is hit, leaving the store at the
// last completed round.
MaterializeResult materialize(TripleStore& store, const Ruleset& ruleset, const MaterializeOptions& options = {});

// One proof path for an inferred triple, premises before conclusions, ending
// with the derivation of `triple` itself. Throws NotInferred for base or
// absent triples.
std::vector<Derivation> explain(const DerivationTrace& trace, const TripleStore& store, const Triple& triple);

// "(s p o) <= rule((s p o), (s p o))" rendering, one line per derivation.
std::string formatDerivation(const TripleStore& store, const Derivation& d);

}  // namespace spstore
