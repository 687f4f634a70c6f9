#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "spstore/errors.hpp"
#include "spstore/store.hpp"
#include "testutil.hpp"

using namespace spstore;

TEST_CASE("interning is idempotent and injective") {
  TripleStore store;
  const auto a1 = store.intern(Term::iri("http://example.org/a"));
  const auto a2 = store.intern(Term::iri("http://example.org/a"));
  CHECK(a1 == a2);
  CHECK(store.termCount() == 1);

  const auto b = store.intern(Term::iri("http://example.org/b"));
  CHECK(a1 != b);

  // Same lexical form, different kinds and literal fields: all distinct terms.
  const auto lit = store.intern(Term::literal("x"));
  const auto typed = store.intern(Term::typedLiteral("x", "http://www.w3.org/2001/XMLSchema#string"));
  const auto tagged = store.intern(Term::langLiteral("x", "en"));
  const auto blank = store.intern(Term::blank("x"));
  const auto iri = store.intern(Term::iri("x"));
  std::set<std::uint32_t> ids{lit.value, typed.value, tagged.value, blank.value, iri.value};
  CHECK(ids.size() == 5);

  CHECK(store.lookup(Term::literal("x")) == lit);
  CHECK(store.term(tagged).language == "en");
  CHECK_FALSE(store.lookup(Term::langLiteral("x", "de")).has_value());
}

TEST_CASE("malformed terms are rejected at intern time") {
  TripleStore store;
  CHECK_THROWS_AS(store.intern(Term::iri("")), StoreError);
  CHECK_THROWS_AS(store.intern(Term::blank("has space")), StoreError);
  CHECK_THROWS_AS(store.intern(Term::blank("")), StoreError);
  CHECK_THROWS_AS(store.intern(Term::langLiteral("x", "not a tag")), StoreError);
  CHECK_THROWS_AS(store.intern(Term::langLiteral("x", "-en")), StoreError);

  Term both = Term::typedLiteral("x", "http://example.org/dt");
  both.language = "en";
  try {
    store.intern(both);
    FAIL("expected MalformedTerm");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::MalformedTerm);
  }
  CHECK(store.termCount() == 0);
}

TEST_CASE("triple shape is enforced on insert") {
  TripleStore store;
  const auto s = store.intern(Term::iri("http://example.org/s"));
  const auto p = store.intern(Term::iri("http://example.org/p"));
  const auto lit = store.intern(Term::literal("v"));
  const auto blank = store.intern(Term::blank("b1"));

  CHECK(store.insert({s, p, lit}));
  CHECK(store.insert({blank, p, s}));

  try {
    store.insert({lit, p, s});
    FAIL("expected LiteralSubject");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::LiteralSubject);
  }
  try {
    store.insert({s, blank, s});
    FAIL("expected NonIriPredicate");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::NonIriPredicate);
  }
  try {
    store.insert({s, lit, s});
    FAIL("expected NonIriPredicate");
  } catch (const StoreError& e) {
    CHECK(e.code() == ErrorCode::NonIriPredicate);
  }
  CHECK(store.tripleCount() == 2);

  CHECK_THROWS_AS(store.insert({s, p, TermId{9999}}), StoreError);
  CHECK_THROWS_AS((void)store.term(TermId{9999}), StoreError);
}

TEST_CASE("duplicate inserts are no-ops and base wins over inferred") {
  TripleStore store;
  const auto s = store.intern(Term::iri("http://example.org/s"));
  const auto p = store.intern(Term::iri("http://example.org/p"));
  const auto o = store.intern(Term::iri("http://example.org/o"));
  const Triple t{s, p, o};

  CHECK(store.insert(t, Origin::Inferred));
  CHECK_FALSE(store.insert(t, Origin::Inferred));
  CHECK(store.origin(t) == Origin::Inferred);
  CHECK(store.stats().inferredCount == 1);

  // Asserting a previously derived fact reclassifies it.
  CHECK_FALSE(store.insert(t, Origin::Base));
  CHECK(store.origin(t) == Origin::Base);
  CHECK(store.stats().inferredCount == 0);
  CHECK(store.stats().baseCount == 1);

  // The opposite direction does not downgrade.
  CHECK_FALSE(store.insert(t, Origin::Inferred));
  CHECK(store.origin(t) == Origin::Base);
  CHECK(store.tripleCount() == 1);
}

TEST_CASE("match agrees with a linear scan for every pattern shape") {
  std::mt19937_64 rng(7);
  TripleStore store = testutil::randomRuleStore(rng, 120);
  const auto all = store.triples();
  REQUIRE(!all.empty());

  auto linear = [&](const IdPattern& q) {
    std::vector<Triple> out;
    for (const auto& t : all) {
      if (q.s && *q.s != t.s) continue;
      if (q.p && *q.p != t.p) continue;
      if (q.o && *q.o != t.o) continue;
      out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  for (int i = 0; i < 200; ++i) {
    const auto& probe = all[static_cast<std::size_t>(testutil::randInt(rng, 0, static_cast<std::int64_t>(all.size()) - 1))];
    IdPattern q;
    if (testutil::randInt(rng, 0, 1)) q.s = probe.s;
    if (testutil::randInt(rng, 0, 1)) q.p = probe.p;
    if (testutil::randInt(rng, 0, 1)) q.o = probe.o;
    auto got = store.match(q);
    std::sort(got.begin(), got.end());
    CHECK(got == linear(q));
    CHECK(store.countMatches(q) == got.size());
  }
}

TEST_CASE("the three indexes hold the same triples regardless of insert order") {
  std::mt19937_64 rng(11);
  TripleStore reference = testutil::randomRuleStore(rng, 150);
  auto rows = reference.triples();

  auto rebuild = [&](const std::vector<Triple>& order) {
    TripleStore s;
    for (std::size_t id = 0; id < reference.termCount(); ++id) s.intern(reference.term(TermId{static_cast<std::uint32_t>(id)}));
    for (const auto& t : order) s.insert(t);
    return s;
  };

  auto shuffled = rows;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto doubled = shuffled;
  doubled.insert(doubled.end(), rows.begin(), rows.end());  // every triple twice

  TripleStore a = rebuild(shuffled);
  TripleStore b = rebuild(doubled);
  CHECK(a.tripleCount() == rows.size());
  CHECK(b.tripleCount() == rows.size());
  CHECK(a.triples() == rows);
  CHECK(b.triples() == rows);

  // Each index is a permutation of SPO.
  std::vector<Triple> spo, pos, osp;
  a.scanSpo([&](const Triple& t) { spo.push_back(t); });
  a.scanPos([&](const Triple& t) { pos.push_back(t); });
  a.scanOsp([&](const Triple& t) { osp.push_back(t); });
  CHECK(spo.size() == pos.size());
  CHECK(spo.size() == osp.size());
  std::sort(pos.begin(), pos.end());
  std::sort(osp.begin(), osp.end());
  CHECK(spo == pos);  // spo scan already sorted
  CHECK(spo == osp);
}

TEST_CASE("forEachMatch honors the early-stop signal and picks the right index") {
  TripleStore store;
  const auto s = store.intern(Term::iri("http://example.org/s"));
  const auto p = store.intern(Term::iri("http://example.org/p"));
  for (int i = 0; i < 10; ++i) {
    store.insert({s, p, store.intern(Term::literal(std::to_string(i)))});
  }

  int seen = 0;
  store.forEachMatch({s, {}, {}}, [&](const Triple&) { return ++seen < 3; });
  CHECK(seen == 3);

  CHECK(std::string(store.indexFor({s, {}, {}})) == "SPO");
  CHECK(std::string(store.indexFor({s, p, {}})) == "SPO");
  CHECK(std::string(store.indexFor({{}, p, {}})) == "POS");
  const auto o = store.intern(Term::literal("1"));
  CHECK(std::string(store.indexFor({{}, {}, o})) == "OSP");
  CHECK(std::string(store.indexFor({{}, {}, {}})) == "SPO-scan");
}

TEST_CASE("concurrent readers see a stable snapshot between writes") {
  std::mt19937_64 rng(23);
  TripleStore store = testutil::randomRuleStore(rng, 300);
  const auto expected = store.triples().size();

  std::vector<std::thread> readers;
  std::vector<std::size_t> counts(4, 0);
  for (int i = 0; i < 4; ++i) {
    readers.emplace_back([&store, &counts, i] {
      for (int round = 0; round < 50; ++round) {
        counts[static_cast<std::size_t>(i)] = store.match({}).size();
      }
    });
  }
  for (auto& t : readers) t.join();
  for (auto c : counts) CHECK(c == expected);
}
