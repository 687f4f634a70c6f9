#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "spstore/errors.hpp"
#include "spstore/ntriples.hpp"
#include "spstore/reasoner.hpp"
#include "spstore/singleton.hpp"
#include "testutil.hpp"

using namespace spstore;

namespace {

const std::string kEx = "http://example.org/";

TermId iriId(TripleStore& store, const std::string& suffix) {
  return store.intern(Term::iri(kEx + suffix));
}

// Rebuilds the worked three-singleton example: one professor with two
// employment spans, one advised student, plus the subproperty link.
struct Example {
  TripleStore store;
  SingletonMinter minter;
  SingletonDescriptor d1, d2, d3;

  Example() {
    auto lit = [&](const char* v) { return store.intern(Term::literal(v)); };
    const auto profA = iriId(store, "ProfessorA");
    const auto studB = iriId(store, "StudentB");
    const auto uni1 = iriId(store, "University1");
    const auto uni2 = iriId(store, "University2");
    const auto worksFor = iriId(store, "worksFor");
    const auto hasAdvisor = iriId(store, "hasAdvisor");
    const auto memberOf = iriId(store, "memberOf");
    const auto from = iriId(store, "from");
    const auto to = iriId(store, "to");

    d1 = reify(store, {profA, worksFor, uni1}, {{from, lit("1994")}, {to, lit("2006")}}, minter);
    d2 = reify(store, {profA, worksFor, uni2}, {{from, lit("2007")}}, minter);
    d3 = reify(store, {studB, hasAdvisor, profA}, {{from, lit("2009")}}, minter);
    store.insert({worksFor, store.intern(Term::iri(vocab::kRdfsSubPropertyOf)), memberOf});
  }
};

}  // namespace

TEST_CASE("the vocabulary block is six fixed triples plus the axiom") {
  const auto v = SpVocabulary::standard();
  CHECK(v.singletonPropertyOf() == "http://www.w3.org/1999/02/22-rdf-syntax-ns#singletonPropertyOf");
  CHECK(v.singletonPropertyClass() == "http://www.w3.org/1999/02/22-rdf-syntax-ns#SingletonProperty");

  const auto prim = v.primitiveTriples();
  const std::set<SpVocabulary::GroundTriple> got(prim.begin(), prim.end());
  const std::set<SpVocabulary::GroundTriple> want = {
      {v.singletonPropertyOf(), vocab::kRdfType, vocab::kRdfProperty},
      {v.singletonPropertyOf(), vocab::kRdfType, vocab::kRdfResource},
      {v.singletonPropertyOf(), vocab::kRdfsDomain, v.singletonPropertyClass()},
      {v.singletonPropertyOf(), vocab::kRdfsRange, vocab::kRdfProperty},
      {v.singletonPropertyClass(), vocab::kRdfType, vocab::kRdfsClass},
      {v.singletonPropertyClass(), vocab::kRdfsSubClassOf, vocab::kRdfProperty},
  };
  CHECK(got == want);

  const auto axiom = v.metaAxiom();
  CHECK(axiom[0] == v.singletonPropertyOf());
  CHECK(axiom[1] == std::string(vocab::kRdfsSubPropertyOf));
  CHECK(axiom[2] == std::string(vocab::kRdfsSubPropertyOf));

  TripleStore store;
  CHECK(installVocabulary(store) == 7);
  CHECK(installVocabulary(store) == 0);
  TripleStore bare;
  CHECK(installVocabulary(bare, false) == 6);

  const auto custom = SpVocabulary::withNamespace("http://example.org/meta#");
  CHECK(custom.singletonPropertyOf() == "http://example.org/meta#singletonPropertyOf");
  TripleStore other;
  CHECK(installVocabulary(other, true, custom) == 7);
}

TEST_CASE("reify numbers singletons consecutively and asserts exactly 2+n triples") {
  Example ex;
  auto& store = ex.store;

  CHECK(store.term(ex.d1.sp).lexical == kEx + "worksFor#1");
  CHECK(store.term(ex.d2.sp).lexical == kEx + "worksFor#2");
  CHECK(store.term(ex.d3.sp).lexical == kEx + "hasAdvisor#3");
  CHECK(ex.minter.counter() == 4);

  // 3 singleton graphs with 2, 1 and 1 meta pairs, plus the subproperty link.
  CHECK(store.tripleCount() == (2 + 2) + (2 + 1) + (2 + 1) + 1);

  // The plain data triple is represented, not asserted.
  const auto worksFor = *store.lookup(Term::iri(kEx + "worksFor"));
  CHECK(store.countMatches({{}, worksFor, {}}) == 0);

  // The built store is byte-identical to the checked-in example file.
  TripleStore fixture;
  REQUIRE_FALSE(parseNTriplesFile(testutil::fixturePath("table2.nt"), fixture).hasErrors());
  CHECK(writeNTriples(store) == writeNTriples(fixture));
}

TEST_CASE("extract inverts reify") {
  Example ex;
  for (const auto* d : {&ex.d1, &ex.d2, &ex.d3}) {
    const auto back = extract(ex.store, d->sp);
    CHECK(back.sp == d->sp);
    CHECK(back.generic == d->generic);
    CHECK(back.subject == d->subject);
    CHECK(back.object == d->object);
    CHECK(back.meta == d->meta);  // interned in reify order here, so index order agrees
  }
}

TEST_CASE("extract still round-trips after materialization") {
  Example ex;
  installVocabulary(ex.store);
  const auto result = materialize(ex.store, Ruleset::rdfsDefault());
  CHECK(result.inferredCount > 0);
  const auto back = extract(ex.store, ex.d1.sp);
  CHECK(back.subject == ex.d1.subject);
  CHECK(back.object == ex.d1.object);
  CHECK(back.meta == ex.d1.meta);

  const auto all = enumerateSingletons(ex.store);
  CHECK(all.descriptors.size() == 3);
  CHECK(all.issues.empty());
}

TEST_CASE("extract rejects non-singletons and torn singleton graphs") {
  Example ex;
  auto& store = ex.store;
  const auto spo = store.intern(Term::iri(SpVocabulary::standard().singletonPropertyOf()));

  try {
    extract(store, *store.lookup(Term::iri(kEx + "worksFor")));
    FAIL("expected NotASingleton");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::NotASingleton);
  }

  // Second generic declaration for the same singleton.
  store.insert({ex.d1.sp, spo, *store.lookup(Term::iri(kEx + "hasAdvisor"))});
  try {
    extract(store, ex.d1.sp);
    FAIL("expected AmbiguousSingleton");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::AmbiguousSingleton);
  }

  // Second usage triple.
  Example ex2;
  ex2.store.insert({ex2.d3.subject, ex2.d1.sp, ex2.d1.object});
  try {
    extract(ex2.store, ex2.d1.sp);
    FAIL("expected AmbiguousSingleton");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::AmbiguousSingleton);
  }

  // Declared but never used.
  Example ex3;
  const auto spo3 = ex3.store.intern(Term::iri(SpVocabulary::standard().singletonPropertyOf()));
  const auto orphan = ex3.store.intern(Term::iri(kEx + "worksFor#99"));
  ex3.store.insert({orphan, spo3, *ex3.store.lookup(Term::iri(kEx + "worksFor"))});
  try {
    extract(ex3.store, orphan);
    FAIL("expected IncompleteSingleton");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::IncompleteSingleton);
  }

  const auto report = enumerateSingletons(ex3.store);
  CHECK(report.descriptors.size() == 3);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].sp == orphan);
}

TEST_CASE("minting skips nothing and refuses reuse of an active predicate") {
  TripleStore store;
  const auto s = iriId(store, "s");
  const auto o = iriId(store, "o");
  const auto worksFor = iriId(store, "worksFor");

  // The candidate IRI exists as a term but is no predicate: no collision.
  iriId(store, "worksFor#1");
  SingletonMinter minter;
  const auto d = reify(store, {s, worksFor, o}, {}, minter);
  CHECK(store.term(d.sp).lexical == kEx + "worksFor#1");

  // Now worksFor#1 is a predicate, so a fresh minter at 1 must refuse it.
  SingletonMinter clash;
  try {
    reify(store, {s, worksFor, o}, {}, clash);
    FAIL("expected MintCollision");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::MintCollision);
  }

  // A generic with a fragment gets dot-suffixed instead.
  const auto frag = store.intern(Term::iri(kEx + "rel#x"));
  const auto d2 = reify(store, {s, frag, o}, {}, minter);
  CHECK(store.term(d2.sp).lexical == kEx + "rel#x.2");

  // Custom template.
  SingletonMinter templated(7, "{generic}/sp/{n}");
  const auto d3 = reify(store, {s, worksFor, o}, {}, templated);
  CHECK(store.term(d3.sp).lexical == kEx + "worksFor/sp/7");
}

TEST_CASE("randomized reify/extract round-trips with the 2+n size law") {
  std::mt19937_64 rng(512);
  TripleStore store;
  SingletonMinter minter;
  std::vector<TermId> props;
  for (int i = 0; i < 6; ++i) props.push_back(iriId(store, "meta" + std::to_string(i)));

  for (int round = 0; round < 150; ++round) {
    const Triple data{store.intern(testutil::randomTerm(rng, true, false)),
                      store.intern(testutil::randomTerm(rng, false, true)),
                      store.intern(testutil::randomTerm(rng, false, false))};
    auto shuffledProps = props;
    std::shuffle(shuffledProps.begin(), shuffledProps.end(), rng);
    const auto n = static_cast<std::size_t>(testutil::randInt(rng, 0, 4));
    std::vector<std::pair<TermId, TermId>> meta;
    for (std::size_t i = 0; i < n; ++i) {
      meta.emplace_back(shuffledProps[i], store.intern(testutil::randomTerm(rng, false, false)));
    }

    const auto before = store.tripleCount();
    const auto d = reify(store, data, meta, minter);
    INFO("round ", round);
    CHECK(store.tripleCount() == before + 2 + meta.size());

    const auto back = extract(store, d.sp);
    CHECK(back.subject == data.s);
    CHECK(back.generic == data.p);
    CHECK(back.object == data.o);
    auto sortPairs = [](std::vector<std::pair<TermId, TermId>> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK(sortPairs(back.meta) == sortPairs(meta));
  }
}
