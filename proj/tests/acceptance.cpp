#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "spstore/bench.hpp"
#include "spstore/errors.hpp"
#include "spstore/generator.hpp"
#include "spstore/ntriples.hpp"
#include "spstore/query.hpp"
#include "spstore/reasoner.hpp"
#include "spstore/singleton.hpp"
#include "testutil.hpp"

// Each case prints one verdict line. REQUIRE is used throughout so any
// failure unwinds past the guard and flips the verdict.

using namespace spstore;

namespace {

struct Criterion {
  std::string id;
  std::string note;
  bool passed = false;

  explicit Criterion(std::string id_) : id(std::move(id_)) {}
  void pass(std::string n = {}) {
    note = std::move(n);
    passed = true;
  }
  ~Criterion() {
    std::printf("%s %s%s%s\n", id.c_str(), passed ? "PASS" : "FAIL", note.empty() ? "" : " ", note.c_str());
    std::fflush(stdout);
  }
};

double msSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

TripleStore loadFixture(const std::string& name) {
  TripleStore store;
  REQUIRE_FALSE(parseNTriplesFile(testutil::fixturePath(name), store).hasErrors());
  return store;
}

TripleStore copyStore(const TripleStore& from) {
  TripleStore to;
  for (const auto& t : from.triples()) {
    to.insert({to.intern(from.term(t.s)), to.intern(from.term(t.p)), to.intern(from.term(t.o))});
  }
  return to;
}

bool has(TripleStore& store, const std::string& text) {
  return store.contains(parseTripleText(text, store));
}

const std::string kEx = "<http://example.org/";
const std::string kSubProp = "<http://www.w3.org/2000/01/rdf-schema#subPropertyOf>";
const std::string kTypeIri = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
const std::string kSpClass = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#SingletonProperty>";

}  // namespace

TEST_CASE("c01 worked-example closure matches the frozen golden set") {
  Criterion crit("C1");

  TripleStore store = loadFixture("table2.nt");

  // Reference closure, computed at the string level before consulting the
  // engine, then cross-checked against the checked-in golden file.
  auto expected = testutil::renderStore(store);
  const auto vocabulary = SpVocabulary::standard();
  for (const auto& g : vocabulary.primitiveTriples())
    expected.insert({"<" + g[0] + ">", "<" + g[1] + ">", "<" + g[2] + ">"});
  const auto axiom = vocabulary.metaAxiom();
  expected.insert({"<" + axiom[0] + ">", "<" + axiom[1] + ">", "<" + axiom[2] + ">"});
  expected = testutil::bruteRdfsClosure(expected);

  TripleStore goldenStore = loadFixture("table2_closure.nt");
  const auto golden = testutil::renderStore(goldenStore);
  REQUIRE(expected == golden);

  const auto start = std::chrono::steady_clock::now();
  materialize(store, Ruleset::rdfsDefault());
  const double elapsed = msSince(start);

  REQUIRE(testutil::renderStore(store) == golden);
  REQUIRE(store.tripleCount() == golden.size());

  // The recovered statements and their support.
  REQUIRE(has(store, kEx + "ProfessorA> " + kEx + "worksFor> " + kEx + "University1>"));
  REQUIRE(has(store, kEx + "ProfessorA> " + kEx + "worksFor> " + kEx + "University2>"));
  REQUIRE(has(store, kEx + "StudentB> " + kEx + "hasAdvisor> " + kEx + "ProfessorA>"));
  REQUIRE(has(store, kEx + "worksFor#1> " + kSubProp + " " + kEx + "worksFor>"));
  REQUIRE(has(store, kEx + "worksFor#2> " + kSubProp + " " + kEx + "worksFor>"));
  REQUIRE(has(store, kEx + "hasAdvisor#3> " + kSubProp + " " + kEx + "hasAdvisor>"));
  REQUIRE(has(store, kEx + "ProfessorA> " + kEx + "memberOf> " + kEx + "University1>"));
  REQUIRE(has(store, kEx + "ProfessorA> " + kEx + "memberOf> " + kEx + "University2>"));
  REQUIRE(has(store, kEx + "worksFor#1> " + kTypeIri + " " + kSpClass));
  REQUIRE(has(store, kEx + "worksFor#2> " + kTypeIri + " " + kSpClass));
  REQUIRE(has(store, kEx + "hasAdvisor#3> " + kTypeIri + " " + kSpClass));

  REQUIRE(elapsed < 1000.0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "closure of %zu triples reproduced in %.1f ms", store.tripleCount(), elapsed);
  crit.pass(buf);
}

TEST_CASE("c02 without the meta axiom no data triple is recovered") {
  Criterion crit("C2");

  TripleStore store = loadFixture("table2.nt");
  materialize(store, Ruleset::rdfsDefault(SpVocabulary::standard(), false));
  REQUIRE_FALSE(has(store, kEx + "ProfessorA> " + kEx + "worksFor> " + kEx + "University1>"));
  REQUIRE_FALSE(has(store, kEx + "ProfessorA> " + kEx + "worksFor> " + kEx + "University2>"));
  REQUIRE_FALSE(has(store, kEx + "StudentB> " + kEx + "hasAdvisor> " + kEx + "ProfessorA>"));
  REQUIRE_FALSE(has(store, kEx + "ProfessorA> " + kEx + "memberOf> " + kEx + "University1>"));
  // The class-level consequences still hold.
  REQUIRE(has(store, kEx + "worksFor#1> " + kTypeIri + " " + kSpClass));

  crit.pass("negative control holds");
}

TEST_CASE("c03 a thousand randomized reify/extract round-trips") {
  Criterion crit("C3");

  std::mt19937_64 rng(33033);
  TripleStore store;
  SingletonMinter minter;
  std::vector<TermId> props;
  for (int i = 0; i < 10; ++i) {
    props.push_back(store.intern(Term::iri("http://example.org/meta" + std::to_string(i))));
  }

  for (int round = 0; round < 1000; ++round) {
    const Triple data{store.intern(testutil::randomTerm(rng, true, false)),
                      store.intern(testutil::randomTerm(rng, false, true)),
                      store.intern(testutil::randomTerm(rng, false, false))};
    auto shuffled = props;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::pair<TermId, TermId>> meta;
    const auto n = static_cast<std::size_t>(testutil::randInt(rng, 0, 5));
    for (std::size_t i = 0; i < n; ++i) {
      meta.emplace_back(shuffled[i], store.intern(testutil::randomTerm(rng, false, false)));
    }

    const auto before = store.tripleCount();
    const auto d = reify(store, data, meta, minter);
    REQUIRE(store.tripleCount() == before + 2 + meta.size());

    const auto back = extract(store, d.sp);
    REQUIRE(back.subject == data.s);
    REQUIRE(back.generic == data.p);
    REQUIRE(back.object == data.o);
    auto sorted = [](std::vector<std::pair<TermId, TermId>> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    REQUIRE(sorted(back.meta) == sorted(meta));
  }
  REQUIRE(minter.counter() == 1001);

  crit.pass("1000 round-trips, size law 2+n held");
}

TEST_CASE("c04 naive and semi-naive closures coincide on random stores") {
  Criterion crit("C4");

  std::mt19937_64 rng(4242);
  const auto start = std::chrono::steady_clock::now();
  for (int round = 0; round < 100; ++round) {
    TripleStore a = testutil::randomRuleStore(rng, 500);
    TripleStore b = copyStore(a);
    MaterializeOptions semi;
    semi.strategy = Strategy::SemiNaive;
    MaterializeOptions naive;
    naive.strategy = Strategy::Naive;
    const auto ra = materialize(a, Ruleset::rdfsDefault(), semi);
    const auto rb = materialize(b, Ruleset::rdfsDefault(), naive);
    REQUIRE(ra.inferredCount == rb.inferredCount);
    REQUIRE(testutil::renderStore(a) == testutil::renderStore(b));
  }
  const double elapsed = msSince(start);
  REQUIRE(elapsed < 60000.0);

  char buf[96];
  std::snprintf(buf, sizeof buf, "100 stores agreed in %.1f ms", elapsed);
  crit.pass(buf);
}

TEST_CASE("c05 plain and singleton stores answer the data queries identically") {
  Criterion crit("C5");

  std::size_t comparisons = 0;
  for (std::size_t u : {std::size_t{1}, std::size_t{5}}) {
    GenConfig config;
    config.universities = u;
    auto pair = generatePair(config);
    materialize(pair.plain, Ruleset::rdfsDefault());
    materialize(pair.sp, Ruleset::rdfsDefault());

    std::size_t nonEmpty = 0;
    for (const auto& [name, text] : shippedQueries()) {
      if (name.front() != 'q') continue;  // mixed queries have no plain counterpart
      const auto q = parseQuery(text);
      const auto plainRows = testutil::renderRows(pair.plain, evaluate(pair.plain, q));
      const auto spRows = testutil::renderRows(pair.sp, evaluate(pair.sp, q));
      REQUIRE(plainRows == spRows);
      ++comparisons;
      if (!plainRows.empty()) ++nonEmpty;
    }
    REQUIRE(nonEmpty >= 8);  // the agreement must not be vacuous
  }

  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu query comparisons equal at scales 1 and 5", comparisons);
  crit.pass(buf);
}

TEST_CASE("c06 the size ratio follows the count formula and lands in band") {
  Criterion crit("C6");

  GenConfig config;
  const auto pair = generatePair(config);
  const auto& r = pair.report;

  std::map<std::string, int> arity;
  for (const auto& rel : config.spRelations) arity[rel.iri] = rel.temporalArity;
  std::size_t weighted = 0;
  REQUIRE(r.relationCounts.size() == 10);
  for (const auto& [iri, count] : r.relationCounts) {
    REQUIRE(count > 0);
    weighted += count * static_cast<std::size_t>(1 + arity.at(iri));
  }
  REQUIRE(r.spTripleCount == r.plainTripleCount + weighted);
  REQUIRE(r.ratio == static_cast<double>(r.spTripleCount) / static_cast<double>(r.plainTripleCount));
  REQUIRE(r.ratio >= 1.9);
  REQUIRE(r.ratio <= 2.1);

  char buf[96];
  std::snprintf(buf, sizeof buf, "ratio %.4f from %zu plain / %zu sp triples", r.ratio, r.plainTripleCount,
                r.spTripleCount);
  crit.pass(buf);
}

TEST_CASE("c07 materialization yields strictly more in the singleton store") {
  Criterion crit("C7");

  std::string note = "inferred sp/plain:";
  for (std::size_t u : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
    GenConfig config;
    config.universities = u;
    auto pair = generatePair(config);
    const auto plainResult = materialize(pair.plain, Ruleset::rdfsDefault());
    const auto spResult = materialize(pair.sp, Ruleset::rdfsDefault());
    REQUIRE(spResult.inferredCount > plainResult.inferredCount);
    note += " u" + std::to_string(u) + "=" + std::to_string(spResult.inferredCount) + "/" +
            std::to_string(plainResult.inferredCount);
  }
  crit.pass(note);
}

TEST_CASE("c08 query evaluation matches brute-force nested loops") {
  Criterion crit("C8");

  std::mt19937_64 rng(8088);
  const auto start = std::chrono::steady_clock::now();
  std::size_t nonEmpty = 0;
  for (int round = 0; round < 200; ++round) {
    TripleStore store = testutil::randomRuleStore(rng, 60);
    const Query q = testutil::randomQuery(rng, store);
    const auto expected = testutil::bruteEvaluate(store, q);
    const auto got = testutil::renderRows(store, evaluate(store, q));
    REQUIRE(got == expected);
    if (!expected.empty()) ++nonEmpty;
  }
  const double elapsed = msSince(start);
  REQUIRE(elapsed < 60000.0);
  REQUIRE(nonEmpty >= 35);

  char buf[96];
  std::snprintf(buf, sizeof buf, "200 instances (%zu nonempty) agreed in %.1f ms", nonEmpty, elapsed);
  crit.pass(buf);
}

TEST_CASE("c09 serialization round-trips and is insertion-order independent") {
  Criterion crit("C9");

  std::mt19937_64 rng(909);
  for (int round = 0; round < 300; ++round) {
    TripleStore original = testutil::randomTermStore(rng, 60);
    const std::string out = writeNTriples(original);

    TripleStore reparsed;
    const auto parsed = parseNTriples(out, reparsed);
    REQUIRE_FALSE(parsed.hasErrors());
    REQUIRE(testutil::renderStore(reparsed) == testutil::renderStore(original));
    REQUIRE(writeNTriples(reparsed) == out);

    // Same triples inserted backwards serialize to the same bytes.
    const auto rows = original.triples();
    TripleStore reversed;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      reversed.insert({reversed.intern(original.term(it->s)), reversed.intern(original.term(it->p)),
                       reversed.intern(original.term(it->o))});
    }
    REQUIRE(writeNTriples(reversed) == out);
  }

  crit.pass("300 fuzzed stores round-tripped byte-identically");
}

TEST_CASE("c10 singleton overhead on the benchmark queries (soft)") {
  Criterion crit("C10");

  const auto dir = testutil::freshTmpDir("accept-bench");
  GenConfig config;
  config.universities = 5;
  config.outDir = dir.string();
  generate(config);

  BenchOptions options;
  const auto plain = runBench(StoreMode::Plain, (dir / "plain.nt").string(), (dir / "queries").string(), options);
  const auto sp = runBench(StoreMode::Sp, (dir / "sp.nt").string(), (dir / "queries").string(), options);
  std::filesystem::remove_all(dir);

  REQUIRE(plain.loadStatus == "ok");
  REQUIRE(plain.materializeStatus == "ok");
  REQUIRE(sp.loadStatus == "ok");
  REQUIRE(sp.materializeStatus == "ok");
  REQUIRE(plain.queries.size() == 17);
  REQUIRE(sp.queries.size() == 17);
  for (const auto& row : plain.queries) REQUIRE((row.status == "ok" || row.status == "na"));
  for (const auto& row : sp.queries) REQUIRE(row.status == "ok");
  REQUIRE(plain.totalAvgMs > 0.0);

  // Same-query comparison: the three mixed queries have no plain counterpart,
  // so they are left out of both totals.
  double plainData = 0.0, spData = 0.0;
  for (std::size_t i = 0; i < plain.queries.size(); ++i) {
    if (plain.queries[i].status != "ok") continue;
    plainData += plain.queries[i].avgMs;
    spData += sp.queries[i].avgMs;
  }
  const double ratio = spData / plainData;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "soft check: sp/plain data-query time ratio %.3f (threshold 1.5%s); all-query sp total %.1f ms",
                ratio, ratio > 1.5 ? " EXCEEDED, warning only" : "", sp.totalAvgMs);
  crit.pass(buf);
}
