#include "spstore/singleton.hpp"

#include <set>

#include "spstore/errors.hpp"

namespace spstore {

namespace {
std::string renderableName(const Term& t) {
  return t.isBlank() ? "_:" + t.lexical : "<" + t.lexical + ">";
}
}  // namespace

std::array<SpVocabulary::GroundTriple, 6> SpVocabulary::primitiveTriples() const {
  const std::string spo = singletonPropertyOf();
  const std::string spClass = singletonPropertyClass();
  return {{
      {spo, vocab::kRdfType, vocab::kRdfProperty},
      {spo, vocab::kRdfType, vocab::kRdfResource},
      {spo, vocab::kRdfsDomain, spClass},
      {spo, vocab::kRdfsRange, vocab::kRdfProperty},
      {spClass, vocab::kRdfType, vocab::kRdfsClass},
      {spClass, vocab::kRdfsSubClassOf, vocab::kRdfProperty},
  }};
}

SpVocabulary::GroundTriple SpVocabulary::metaAxiom() const {
  return {singletonPropertyOf(), vocab::kRdfsSubPropertyOf, vocab::kRdfsSubPropertyOf};
}

std::string SingletonMinter::mint(const TripleStore& store, const std::string& genericIri) {
  std::string candidate;
  if (!template_.empty()) {
    candidate = template_;
    auto substitute = [&](const std::string& key, const std::string& value) {
      for (std::size_t at = candidate.find(key); at != std::string::npos; at = candidate.find(key, at)) {
        candidate.replace(at, key.size(), value);
        at += value.size();
      }
    };
    substitute("{generic}", genericIri);
    substitute("{n}", std::to_string(counter_));
  } else if (genericIri.find('#') != std::string::npos) {
    candidate = genericIri + "." + std::to_string(counter_);
  } else {
    candidate = genericIri + "#" + std::to_string(counter_);
  }

  if (auto existing = store.lookup(Term::iri(candidate))) {
    if (store.countMatches({{}, *existing, {}}) > 0) {
      throw StoreError(ErrorCode::MintCollision, candidate + " is already used as a predicate");
    }
  }
  ++counter_;
  return candidate;
}

SingletonDescriptor reify(TripleStore& store, const Triple& data,
                          const std::vector<std::pair<TermId, TermId>>& meta, SingletonMinter& minter,
                          const SpVocabulary& vocabulary) {
  const Term& generic = store.term(data.p);
  if (!generic.isIri()) {
    throw StoreError(ErrorCode::NonIriPredicate, "cannot reify a triple whose predicate is not an IRI");
  }
  store.term(data.s);
  store.term(data.o);
  for (const auto& [metaProp, metaValue] : meta) {
    if (!store.term(metaProp).isIri()) {
      throw StoreError(ErrorCode::NonIriPredicate, "meta property must be an IRI");
    }
    store.term(metaValue);
  }

  TermId sp = store.intern(Term::iri(minter.mint(store, generic.lexical)));
  TermId spoId = store.intern(Term::iri(vocabulary.singletonPropertyOf()));

  store.insert({sp, spoId, data.p}, Origin::Base);
  store.insert({data.s, sp, data.o}, Origin::Base);
  for (const auto& [metaProp, metaValue] : meta) {
    store.insert({sp, metaProp, metaValue}, Origin::Base);
  }

  return SingletonDescriptor{sp, data.p, data.s, data.o, meta};
}

SingletonDescriptor extract(const TripleStore& store, TermId sp, const SpVocabulary& vocabulary) {
  const Term& spTerm = store.term(sp);

  auto spoId = store.lookup(Term::iri(vocabulary.singletonPropertyOf()));
  std::vector<Triple> generics;
  if (spoId) generics = store.match({sp, *spoId, {}});
  if (generics.empty()) {
    throw StoreError(ErrorCode::NotASingleton, renderableName(spTerm) + " has no singletonPropertyOf triple");
  }
  if (generics.size() > 1) {
    throw StoreError(ErrorCode::AmbiguousSingleton, renderableName(spTerm) + " declares multiple generic properties");
  }

  std::vector<Triple> usages = store.match({{}, sp, {}});
  if (usages.empty()) {
    throw StoreError(ErrorCode::IncompleteSingleton, renderableName(spTerm) + " is never used as a predicate");
  }
  if (usages.size() > 1) {
    throw StoreError(ErrorCode::AmbiguousSingleton,
                     renderableName(spTerm) + " is used with more than one subject-object pair");
  }

  SingletonDescriptor d;
  d.sp = sp;
  d.generic = generics.front().o;
  d.subject = usages.front().s;
  d.object = usages.front().o;

  auto typeId = store.lookup(Term::iri(vocab::kRdfType));
  for (const Triple& t : store.match({sp, {}, {}})) {
    if (t.p == *spoId) continue;
    if (typeId && t.p == *typeId) continue;
    if (store.origin(t) == Origin::Inferred) continue;
    d.meta.emplace_back(t.p, t.o);
  }
  return d;
}

std::size_t installVocabulary(TripleStore& store, bool includeMetaAxiom, const SpVocabulary& vocabulary) {
  std::size_t added = 0;
  auto insertGround = [&](const SpVocabulary::GroundTriple& g) {
    Triple t{store.intern(Term::iri(g[0])), store.intern(Term::iri(g[1])), store.intern(Term::iri(g[2]))};
    if (store.insert(t, Origin::Base)) ++added;
  };
  for (const auto& g : vocabulary.primitiveTriples()) insertGround(g);
  if (includeMetaAxiom) insertGround(vocabulary.metaAxiom());
  return added;
}

SingletonEnumeration enumerateSingletons(const TripleStore& store, const SpVocabulary& vocabulary) {
  SingletonEnumeration out;
  auto spoId = store.lookup(Term::iri(vocabulary.singletonPropertyOf()));
  if (!spoId) return out;

  std::set<TermId> seen;
  for (const Triple& t : store.match({{}, *spoId, {}})) {
    if (!seen.insert(t.s).second) continue;
    try {
      out.descriptors.push_back(extract(store, t.s, vocabulary));
    } catch (const StoreError& e) {
      out.issues.push_back({t.s, e.what()});
    }
  }
  return out;
}

}  // namespace spstore
