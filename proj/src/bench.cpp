#include "spstore/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "spstore/errors.hpp"
#include "spstore/ntriples.hpp"
#include "spstore/singleton.hpp"

namespace spstore {

const char* storeModeName(StoreMode mode) { return mode == StoreMode::Plain ? "plain" : "sp"; }

bool isMixedQuery(const Query& query) {
  const std::string spo = SpVocabulary::standard().singletonPropertyOf();
  for (const TriplePattern& pat : query.bgp) {
    for (const PatternTerm* t : {&pat.s, &pat.p, &pat.o}) {
      if (const auto* term = std::get_if<Term>(t)) {
        if (term->isIri() && term->lexical == spo) return true;
      }
    }
  }
  return false;
}

namespace {

double elapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> queryFiles(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rq") {
      names.push_back(entry.path().filename().string());
    }
  }
  if (ec) throw StoreError(ErrorCode::IoError, "cannot read query dir " + dir + ": " + ec.message());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

BenchReport runBench(StoreMode mode, const std::string& datasetFile, const std::string& queryDir,
                     const BenchOptions& options) {
  BenchReport report;
  report.mode = mode;
  report.dataset = datasetFile;

  TripleStore store;
  auto start = std::chrono::steady_clock::now();
  try {
    ParseResult parsed = parseNTriplesFile(datasetFile, store);
    report.loadMs = elapsedMs(start);
    if (parsed.hasErrors()) {
      const ParseDiagnostic* first = nullptr;
      for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::Error) {
          first = &d;
          break;
        }
      }
      report.loadStatus = "error";
      report.error = datasetFile + ":" + std::to_string(first->line) + ": " + first->message;
      return report;
    }
    report.loadStatus = "ok";
    report.tripleCount = store.tripleCount();
  } catch (const StoreError& e) {
    report.loadMs = elapsedMs(start);
    report.loadStatus = "error";
    report.error = e.what();
    return report;
  }

  start = std::chrono::steady_clock::now();
  try {
    MaterializeOptions mo;
    mo.strategy = options.strategy;
    MaterializeResult result = materialize(store, Ruleset::rdfsDefault(), mo);
    report.materializeMs = elapsedMs(start);
    report.materializeStatus = "ok";
    report.inferredCount = result.inferredCount;
    report.tripleCount = store.tripleCount();
  } catch (const StoreError& e) {
    report.materializeMs = elapsedMs(start);
    report.materializeStatus = "error";
    report.error = e.what();
    return report;
  }

  QueryOptions qo;
  qo.budget = options.queryBudget;

  for (const std::string& name : queryFiles(queryDir)) {
    QueryBenchRow row;
    row.query = name;
    try {
      Query query = parseQueryFile((std::filesystem::path(queryDir) / name).string());
      if (mode == StoreMode::Plain && isMixedQuery(query)) {
        row.status = "na";
        report.queries.push_back(std::move(row));
        continue;
      }
      row.status = "ok";
      for (std::size_t run = 0; run < options.repetitions; ++run) {
        auto qStart = std::chrono::steady_clock::now();
        QueryResult result = evaluate(store, query, qo);
        row.runMs.push_back(elapsedMs(qStart));
        row.resultCount = result.rows.size();
      }
      for (double ms : row.runMs) row.avgMs += ms;
      row.avgMs /= static_cast<double>(row.runMs.size());
    } catch (const StoreError& e) {
      if (e.code() == ErrorCode::QueryTimeout) {
        row.status = "timeout";
      } else {
        row.status = "error";
        row.message = e.what();
      }
      row.avgMs = 0.0;
      row.resultCount = 0;
    }
    report.queries.push_back(std::move(row));
  }

  for (const QueryBenchRow& row : report.queries) {
    if (row.status == "ok") report.totalAvgMs += row.avgMs;
  }
  return report;
}

namespace {

std::string formatMs(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

void csvRow(std::string& out, const std::string& phase, const std::string& dataset, const char* mode,
            const std::string& query, const std::string& run, double wallMs, std::size_t resultCount,
            const std::string& status) {
  out += phase;
  out.push_back(',');
  out += dataset;
  out.push_back(',');
  out += mode;
  out.push_back(',');
  out += query;
  out.push_back(',');
  out += run;
  out.push_back(',');
  out += formatMs(wallMs);
  out.push_back(',');
  out += std::to_string(resultCount);
  out.push_back(',');
  out += status;
  out.push_back('\n');
}

}  // namespace

std::string benchCsv(const std::vector<BenchReport>& reports) {
  std::string out = "phase,dataset,mode,query,run,wall_ms,result_count,status\n";
  for (const BenchReport& report : reports) {
    const char* mode = storeModeName(report.mode);
    csvRow(out, "load", report.dataset, mode, "", "0", report.loadMs, report.tripleCount, report.loadStatus);
    if (report.loadStatus != "ok") continue;
    csvRow(out, "materialize", report.dataset, mode, "", "0", report.materializeMs, report.inferredCount,
           report.materializeStatus);
    if (report.materializeStatus != "ok") continue;
    for (const QueryBenchRow& row : report.queries) {
      for (std::size_t i = 0; i < row.runMs.size(); ++i) {
        csvRow(out, "query", report.dataset, mode, row.query, std::to_string(i + 1), row.runMs[i], row.resultCount,
               row.status);
      }
      csvRow(out, "query", report.dataset, mode, row.query, "avg", row.avgMs, row.resultCount, row.status);
    }
    csvRow(out, "total", report.dataset, mode, "", "avg", report.totalAvgMs, 0, "ok");
  }
  return out;
}

std::string benchTable(const BenchReport& report) {
  std::ostringstream out;
  out << "dataset " << report.dataset << " (" << storeModeName(report.mode) << " mode)\n";
  out << "  load         " << std::setw(10) << formatMs(report.loadMs) << " ms  " << report.loadStatus;
  if (report.loadStatus == "ok") out << "  (" << report.tripleCount << " triples after materialization)";
  out << "\n";
  if (report.loadStatus != "ok") {
    out << "  error: " << report.error << "\n";
    return out.str();
  }
  out << "  materialize  " << std::setw(10) << formatMs(report.materializeMs) << " ms  " << report.materializeStatus;
  if (report.materializeStatus == "ok") out << "  (" << report.inferredCount << " inferred)";
  out << "\n";
  if (report.materializeStatus != "ok") {
    out << "  error: " << report.error << "\n";
    return out.str();
  }
  out << "  query          avg_ms      results  status\n";
  for (const QueryBenchRow& row : report.queries) {
    out << "    " << std::left << std::setw(12) << row.query << std::right << std::setw(9) << formatMs(row.avgMs)
        << "  " << std::setw(11) << row.resultCount << "  " << row.status;
    if (!row.message.empty()) out << "  " << row.message;
    out << "\n";
  }
  out << "  total (ok queries) " << formatMs(report.totalAvgMs) << " ms\n";
  return out.str();
}

}  // namespace spstore
