#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "spstore/query.hpp"
#include "spstore/reasoner.hpp"
#include "spstore/store.hpp"

namespace spstore {

enum class StoreMode { Plain, Sp };

const char* storeModeName(StoreMode mode);

struct BenchOptions {
  std::size_t repetitions = 3;
  std::optional<std::chrono::milliseconds> queryBudget;
  Strategy strategy = Strategy::SemiNaive;
};

struct QueryBenchRow {
  std::string query;  // file name
  std::vector<double> runMs;
  double avgMs = 0.0;
  std::size_t resultCount = 0;
  std::string status;  // ok | timeout | na | error
  std::string message;
};

struct BenchReport {
  StoreMode mode = StoreMode::Plain;
  std::string dataset;
  std::string loadStatus = "skipped";
  std::string materializeStatus = "skipped";
  std::string error;
  double loadMs = 0.0;
  double materializeMs = 0.0;
  std::size_t tripleCount = 0;
  std::size_t inferredCount = 0;
  std::vector<QueryBenchRow> queries;
  double totalAvgMs = 0.0;  // ok queries only; na and timeout excluded
};

// A query is mixed when it constrains some variable with the
// singletonPropertyOf predicate; such queries cannot match in a plain store
// and are reported N/A there.
bool isMixedQuery(const Query& query);

// load -> materialize -> each query x repetitions, averaged. A failed phase
// is recorded and the dependent phases are skipped.
BenchReport runBench(StoreMode mode, const std::string& datasetFile, const std::string& queryDir,
                     const BenchOptions& options = {});

// Rows: phase,dataset,mode,query,run,wall_ms,result_count,status
std::string benchCsv(const std::vector<BenchReport>& reports);
std::string benchTable(const BenchReport& report);

}  // namespace spstore
