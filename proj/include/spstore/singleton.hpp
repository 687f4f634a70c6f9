#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spstore/store.hpp"

namespace spstore {

// The singleton-property vocabulary: two terms in a configurable namespace
// (the rdf: namespace by default) plus the fixed primitive triples and the
// axiom that makes singletonPropertyOf a sub-property of rdfs:subPropertyOf.
struct SpVocabulary {
  std::string ns = vocab::kRdfNs;

  static SpVocabulary standard() { return SpVocabulary{}; }
  static SpVocabulary withNamespace(std::string customNs) { return SpVocabulary{std::move(customNs)}; }

  std::string singletonPropertyOf() const { return ns + "singletonPropertyOf"; }
  std::string singletonPropertyClass() const { return ns + "SingletonProperty"; }

  using GroundTriple = std::array<std::string, 3>;

  // The six declaration triples: singletonPropertyOf is a Property and a
  // Resource with domain SingletonProperty and range Property;
  // SingletonProperty is a Class and a subclass of Property.
  std::array<GroundTriple, 6> primitiveTriples() const;

  // (singletonPropertyOf, rdfs:subPropertyOf, rdfs:subPropertyOf), the one
  // triple that lets a plain RDFS reasoner recover data triples.
  GroundTriple metaAxiom() const;
};

// A data triple plus its metadata, as carried by one singleton property.
struct SingletonDescriptor {
  TermId sp;       // the singleton property
  TermId generic;  // the property it specializes
  TermId subject;
  TermId object;
  // (metaProperty, metaValue) pairs; reify echoes them as given, extract
  // returns them in store index order.
  std::vector<std::pair<TermId, TermId>> meta;
};

// Mints fresh singleton property IRIs. Default scheme appends "#<n>" to the
// generic IRI (".<n>" when the generic already contains a '#'); a custom
// template may use the {generic} and {n} placeholders. The counter is global
// so successive singletons number consecutively across properties.
class SingletonMinter {
 public:
  explicit SingletonMinter(std::uint64_t start = 1, std::string schemeTemplate = {})
      : counter_(start), template_(std::move(schemeTemplate)) {}

  std::uint64_t counter() const { return counter_; }

  // Throws MintCollision if the candidate IRI is already used as a predicate.
  std::string mint(const TripleStore& store, const std::string& genericIri);

 private:
  std::uint64_t counter_;
  std::string template_;
};

// Asserts the singleton graph for `data` with the given metadata pairs:
// (sp singletonPropertyOf generic), (s sp o), and one (sp metaProp metaValue)
// per pair, exactly 2 + n triples. The data triple itself is not asserted.
SingletonDescriptor reify(TripleStore& store, const Triple& data,
                          const std::vector<std::pair<TermId, TermId>>& meta, SingletonMinter& minter,
                          const SpVocabulary& vocabulary = SpVocabulary::standard());

// Inverse of reify. Requires exactly one generic declaration and exactly one
// usage triple for sp; rdf:type triples and inferred triples on sp are not
// treated as metadata, so extraction still round-trips on a materialized
// store.
SingletonDescriptor extract(const TripleStore& store, TermId sp,
                            const SpVocabulary& vocabulary = SpVocabulary::standard());

// Inserts the six primitive triples plus, when requested, the meta axiom.
// Returns the number of triples actually added; idempotent.
std::size_t installVocabulary(TripleStore& store, bool includeMetaAxiom = true,
                              const SpVocabulary& vocabulary = SpVocabulary::standard());

struct SingletonIssue {
  TermId sp;
  std::string message;
};

struct SingletonEnumeration {
  std::vector<SingletonDescriptor> descriptors;
  std::vector<SingletonIssue> issues;
};

// Extracts every singleton property declared in the store, reporting the
// malformed ones instead of failing.
SingletonEnumeration enumerateSingletons(const TripleStore& store,
                                         const SpVocabulary& vocabulary = SpVocabulary::standard());

}  // namespace spstore
