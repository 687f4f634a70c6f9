#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spstore/singleton.hpp"
#include "spstore/store.hpp"

namespace spstore {

// University-domain ontology namespace; entity data lives under kDataNs.
inline constexpr const char* kUnivBenchNs = "http://benchmark.example.org/univ-bench/";
inline constexpr const char* kDataNs = "http://benchmark.example.org/data/";

struct SpRelation {
  std::string iri;
  int temporalArity = 1;  // 1: from only; 2: from and to
};

// The ten relations carried as singleton properties by default: five with two
// temporal properties, five with one.
std::vector<SpRelation> defaultSpRelations();

// All seventeen object relations the schema declares.
std::vector<std::string> schemaRelations();

struct GenConfig {
  std::size_t universities = 1;
  std::uint64_t seed = 42;
  std::vector<SpRelation> spRelations = defaultSpRelations();
  bool emitDataTriples = false;  // also assert reified data triples in the sp store
  bool emitQueries = true;
  std::string outDir;  // empty: in-memory only, no files written

  void validate() const;  // throws ConfigError
};

struct GenReport {
  std::size_t plainTripleCount = 0;
  // Triples in the sp store minus the singleton vocabulary block, so that
  // ratio = (N + sum over relations of count*(1+arity)) / N holds exactly.
  std::size_t spTripleCount = 0;
  std::size_t vocabularyTripleCount = 0;
  std::size_t spCount = 0;
  double ratio = 0.0;
  std::map<std::string, std::size_t> relationCounts;  // reified triples per generic IRI
};

struct GeneratedPair {
  TripleStore plain;
  TripleStore sp;
  GenReport report;
};

// Builds the paired stores: same information, one with plain data triples,
// one with each sp-relation triple replaced by its singleton graph plus
// temporal metadata. Deterministic for a fixed config.
GeneratedPair generatePair(const GenConfig& config);

// generatePair plus file output when outDir is set: plain.nt, sp.nt,
// gen-report.json and (optionally) queries/.
GenReport generate(const GenConfig& config);

std::string reportToJson(const GenConfig& config, const GenReport& report);

// The shipped query set: 14 data-pattern queries (q01..q14) and 3 mixed
// singleton/temporal queries (m01..m03), as (filename, text) pairs.
std::vector<std::pair<std::string, std::string>> shippedQueries();

// Recomputes a report from loaded stores; used by the audit subcommand to
// cross-check gen-report.json against the emitted files.
GenReport auditPair(const TripleStore& plain, const TripleStore& sp);

}  // namespace spstore
