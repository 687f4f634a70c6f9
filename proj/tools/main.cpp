#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spstore/bench.hpp"
#include "spstore/errors.hpp"
#include "spstore/generator.hpp"
#include "spstore/ntriples.hpp"
#include "spstore/query.hpp"
#include "spstore/reasoner.hpp"
#include "spstore/singleton.hpp"
#include "spstore/store.hpp"

namespace {

using namespace spstore;

struct CommonLoad {
  std::vector<std::string> dataFiles;
};

void addDataOption(CLI::App* cmd, CommonLoad& common) {
  cmd->add_option("--data", common.dataFiles, "N-Triples file(s) to load")->required()->expected(-1);
}

TripleStore loadFiles(const std::vector<std::string>& files) {
  TripleStore store;
  for (const std::string& file : files) {
    ParseResult parsed = parseNTriplesFile(file, store);
    for (const ParseDiagnostic& d : parsed.diagnostics) {
      if (d.severity == Severity::Error) {
        throw StoreError(ErrorCode::SyntaxError,
                         file + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message);
      }
    }
  }
  return store;
}

Strategy strategyFromName(const std::string& name) {
  if (name == "naive") return Strategy::Naive;
  if (name == "seminaive") return Strategy::SemiNaive;
  throw StoreError(ErrorCode::ConfigError, "unknown strategy " + name);
}

Ruleset buildRuleset(const std::string& rulesCsv, bool noMetaAxiom) {
  Ruleset rs = Ruleset::rdfsDefault(SpVocabulary::standard(), !noMetaAxiom);
  if (!rulesCsv.empty()) {
    std::vector<std::string> names;
    std::stringstream ss(rulesCsv);
    for (std::string name; std::getline(ss, name, ',');) {
      if (!name.empty()) names.push_back(name);
    }
    rs.rules = Ruleset::byNames(names).rules;
  }
  return rs;
}

std::vector<SpRelation> parseSpRelationArgs(const std::vector<std::string>& args) {
  std::vector<SpRelation> out;
  for (const std::string& arg : args) {
    auto colon = arg.rfind(':');
    if (colon == std::string::npos || colon + 1 >= arg.size()) {
      throw StoreError(ErrorCode::ConfigError, "expected NAME:ARITY, got " + arg);
    }
    SpRelation rel;
    rel.iri = arg.substr(0, colon);
    if (rel.iri.find('/') == std::string::npos) rel.iri = std::string(kUnivBenchNs) + rel.iri;
    rel.temporalArity = std::stoi(arg.substr(colon + 1));
    out.push_back(rel);
  }
  return out;
}

int cmdGenerate(const GenConfig& config) {
  GenReport report = generate(config);
  std::cout << reportToJson(config, report);
  return 0;
}

int cmdLoadCheck(const std::vector<std::string>& files) {
  bool failed = false;
  for (const std::string& file : files) {
    TripleStore store;
    ParseResult parsed;
    try {
      parsed = parseNTriplesFile(file, store);
    } catch (const StoreError& e) {
      std::cerr << file << ": " << e.what() << "\n";
      failed = true;
      continue;
    }
    for (const ParseDiagnostic& d : parsed.diagnostics) {
      std::cerr << file << ":" << d.line << ":" << d.column << ": "
                << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message << "\n";
      if (d.severity == Severity::Error) failed = true;
    }
    TripleStore::Stats stats = store.stats();
    std::cout << file << ": " << stats.tripleCount << " triples, " << stats.termCount << " terms\n";
  }
  return failed ? 1 : 0;
}

int cmdMaterialize(const CommonLoad& common, const std::string& outFile, const std::string& originName,
                   const std::string& strategyName, const std::string& rulesCsv, bool noMetaAxiom) {
  TripleStore store = loadFiles(common.dataFiles);
  Ruleset rs = buildRuleset(rulesCsv, noMetaAxiom);
  MaterializeOptions options;
  options.strategy = strategyFromName(strategyName);
  MaterializeResult result = materialize(store, rs, options);
  std::cerr << "materialized in " << result.rounds << " rounds, " << result.inferredCount << " inferred, "
            << store.tripleCount() << " total\n";

  OriginFilter filter = OriginFilter::All;
  if (originName == "base") filter = OriginFilter::Base;
  else if (originName == "inferred") filter = OriginFilter::Inferred;
  else if (originName != "all") throw StoreError(ErrorCode::ConfigError, "unknown origin filter " + originName);

  if (outFile.empty() || outFile == "-") {
    std::cout << writeNTriples(store, filter);
  } else {
    writeNTriplesFile(outFile, store, filter);
  }
  return 0;
}

int cmdQuery(const CommonLoad& common, const std::string& queryFile, const std::string& queryText,
             bool materializeFirst, const std::string& format, std::optional<std::uint64_t> budgetMs,
             const std::string& strategyName, bool noMetaAxiom) {
  TripleStore store = loadFiles(common.dataFiles);
  if (materializeFirst) {
    MaterializeOptions options;
    options.strategy = strategyFromName(strategyName);
    materialize(store, buildRuleset("", noMetaAxiom), options);
  }
  Query query = queryText.empty() ? parseQueryFile(queryFile) : parseQuery(queryText);
  QueryOptions qo;
  if (budgetMs) qo.budget = std::chrono::milliseconds(*budgetMs);
  QueryResult result = evaluate(store, query, qo);
  if (format == "json") {
    std::cout << toJson(store, result);
  } else if (format == "tsv") {
    std::cout << toTsv(store, result);
  } else {
    throw StoreError(ErrorCode::ConfigError, "unknown format " + format);
  }
  return 0;
}

int cmdBench(const std::string& plainFile, const std::string& spFile, const std::string& queryDir,
             std::size_t repetitions, std::optional<std::uint64_t> budgetMs, const std::string& csvFile,
             const std::string& strategyName) {
  BenchOptions options;
  options.repetitions = repetitions;
  options.strategy = strategyFromName(strategyName);
  if (budgetMs) options.queryBudget = std::chrono::milliseconds(*budgetMs);

  std::vector<BenchReport> reports;
  if (!plainFile.empty()) reports.push_back(runBench(StoreMode::Plain, plainFile, queryDir, options));
  if (!spFile.empty()) reports.push_back(runBench(StoreMode::Sp, spFile, queryDir, options));

  for (const BenchReport& report : reports) std::cout << benchTable(report) << "\n";

  if (reports.size() == 2) {
    double plainTotal = reports[0].totalAvgMs;
    double spTotal = reports[1].totalAvgMs;
    if (plainTotal > 0.0) {
      double ratio = spTotal / plainTotal;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", ratio);
      std::cout << "sp/plain total query time ratio: " << buf << " (soft threshold 1.5)\n";
      if (ratio > 1.5) {
        std::cout << "warning: ratio exceeds the soft threshold; hardware-dependent, not a failure\n";
      }
    } else {
      std::cout << "sp/plain total query time ratio: n/a (plain total is zero)\n";
    }
  }

  if (!csvFile.empty()) {
    std::ofstream out(csvFile, std::ios::binary);
    if (!out) throw StoreError(ErrorCode::IoError, "cannot write " + csvFile);
    out << benchCsv(reports);
  }

  for (const BenchReport& report : reports) {
    if (report.loadStatus != "ok" || report.materializeStatus != "ok") return 1;
  }
  return 0;
}

int cmdExplain(const CommonLoad& common, const std::string& tripleText, const std::string& strategyName,
               bool noMetaAxiom) {
  TripleStore store = loadFiles(common.dataFiles);
  MaterializeOptions options;
  options.strategy = strategyFromName(strategyName);
  options.trace = true;
  MaterializeResult result = materialize(store, buildRuleset("", noMetaAxiom), options);

  Triple triple = parseTripleText(tripleText, store);
  std::vector<Derivation> chain = explain(*result.trace, store, triple);
  for (const Derivation& d : chain) {
    std::cout << formatDerivation(store, d) << "\n";
  }
  return 0;
}

int cmdAudit(const std::string& dir) {
  namespace fs = std::filesystem;
  TripleStore plain, sp;
  ParseResult plainParsed = parseNTriplesFile((fs::path(dir) / "plain.nt").string(), plain);
  ParseResult spParsed = parseNTriplesFile((fs::path(dir) / "sp.nt").string(), sp);
  if (plainParsed.hasErrors() || spParsed.hasErrors()) {
    std::cerr << "audit: dataset files have parse errors\n";
    return 1;
  }

  std::ifstream in(fs::path(dir) / "gen-report.json", std::ios::binary);
  if (!in) throw StoreError(ErrorCode::IoError, "cannot open gen-report.json in " + dir);
  nlohmann::json stored = nlohmann::json::parse(in);

  GenReport recomputed = auditPair(plain, sp);

  bool ok = true;
  auto check = [&](const char* field, std::uint64_t expected, std::uint64_t actual) {
    if (expected != actual) {
      std::cout << "mismatch " << field << ": report says " << expected << ", files say " << actual << "\n";
      ok = false;
    }
  };
  check("plain_triple_count", stored["plain_triple_count"].get<std::uint64_t>(), recomputed.plainTripleCount);
  check("sp_triple_count", stored["sp_triple_count"].get<std::uint64_t>(), recomputed.spTripleCount);
  check("sp_count", stored["sp_count"].get<std::uint64_t>(), recomputed.spCount);
  check("vocabulary_triple_count", stored["vocabulary_triple_count"].get<std::uint64_t>(),
        recomputed.vocabularyTripleCount);
  for (const auto& [iri, count] : stored["relation_counts"].items()) {
    auto it = recomputed.relationCounts.find(iri);
    check(("relation_counts[" + iri + "]").c_str(), count.get<std::uint64_t>(),
          it == recomputed.relationCounts.end() ? 0 : it->second);
  }
  if (recomputed.relationCounts.size() != stored["relation_counts"].size()) {
    std::cout << "mismatch relation_counts: different relation sets\n";
    ok = false;
  }

  double storedRatio = stored["ratio"].get<double>();
  if (storedRatio != recomputed.ratio) {
    std::cout << "mismatch ratio: report says " << storedRatio << ", files say " << recomputed.ratio << "\n";
    ok = false;
  }

  std::cout << (ok ? "audit ok" : "audit failed") << ": " << recomputed.plainTripleCount << " plain, "
            << recomputed.spTripleCount << " sp (+ " << recomputed.vocabularyTripleCount << " vocabulary), "
            << recomputed.spCount << " singletons, ratio " << recomputed.ratio << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple store with singleton-property reasoning: generator, reasoner and benchmark harness"};
  app.require_subcommand(1);
  // CLI11 only reads config files on the root app, so the option lives here;
  // generate gets fallthrough so `generate --config f.ini` reaches it too.
  app.set_config("--config", "", "INI-style options file; generate options go under a [generate] section");

  // generate
  GenConfig genConfig;
  std::vector<std::string> spRelationArgs;
  bool noQueries = false;
  auto* gen = app.add_subcommand("generate", "Generate a paired plain/singleton dataset");
  gen->add_option("--universities", genConfig.universities, "University count")->capture_default_str();
  gen->add_option("--seed", genConfig.seed, "PRNG seed")->capture_default_str();
  gen->add_option("--out", genConfig.outDir, "Output directory")->required();
  gen->add_flag("--emit-data-triples", genConfig.emitDataTriples,
                "Also assert the reified data triples in the sp file");
  gen->add_flag("--no-queries", noQueries, "Skip writing the query set");
  gen->add_option("--sp-relation", spRelationArgs,
                  "Override the singleton relation set; NAME:ARITY, repeatable (arity 1 or 2)");
  gen->fallthrough();

  // load-check
  std::vector<std::string> checkFiles;
  auto* check = app.add_subcommand("load-check", "Parse N-Triples files and report diagnostics and stats");
  check->add_option("files", checkFiles, "Files to check")->required()->expected(-1);

  // materialize
  CommonLoad matLoad;
  std::string matOut, matOrigin = "all", matStrategy = "seminaive", matRules;
  bool matNoMetaAxiom = false;
  auto* mat = app.add_subcommand("materialize", "Compute the RDFS closure and dump it");
  addDataOption(mat, matLoad);
  mat->add_option("--out", matOut, "Output file ('-' for stdout)");
  mat->add_option("--origin", matOrigin, "Dump filter: all, base or inferred")->capture_default_str();
  mat->add_option("--strategy", matStrategy, "naive or seminaive")->capture_default_str();
  mat->add_option("--rules", matRules, "Comma-separated rule subset (default: all six)");
  mat->add_flag("--no-meta-axiom", matNoMetaAxiom, "Install the vocabulary without the singleton meta axiom");

  // query
  CommonLoad queryLoad;
  std::string queryFile, queryText, queryFormat = "tsv", queryStrategy = "seminaive";
  std::optional<std::uint64_t> queryBudget;
  bool queryMaterialize = false, queryNoMetaAxiom = false;
  auto* qry = app.add_subcommand("query", "Evaluate a SELECT query against N-Triples data");
  addDataOption(qry, queryLoad);
  auto* qfOpt = qry->add_option("--query", queryFile, "Query file (.rq)");
  qry->add_option("--text", queryText, "Inline query text")->excludes(qfOpt);
  qry->add_flag("--materialize", queryMaterialize,
                "Materialize before evaluating (without this, derivable-only facts yield empty results)");
  qry->add_option("--format", queryFormat, "tsv or json")->capture_default_str();
  qry->add_option("--budget-ms", queryBudget, "Per-query wall-clock budget in milliseconds");
  qry->add_option("--strategy", queryStrategy, "naive or seminaive")->capture_default_str();
  qry->add_flag("--no-meta-axiom", queryNoMetaAxiom, "Materialize without the singleton meta axiom");

  // bench
  std::string benchPlain, benchSp, benchQueries, benchCsvFile, benchStrategy = "seminaive";
  std::size_t benchReps = 3;
  std::optional<std::uint64_t> benchBudget;
  auto* bench = app.add_subcommand("bench", "Load, materialize and time the query set");
  bench->add_option("--plain", benchPlain, "Plain-mode dataset file");
  bench->add_option("--sp", benchSp, "Singleton-mode dataset file");
  bench->add_option("--queries", benchQueries, "Directory of .rq files")->required();
  bench->add_option("--repetitions", benchReps, "Runs per query")->capture_default_str();
  bench->add_option("--budget-ms", benchBudget, "Per-query wall-clock budget in milliseconds");
  bench->add_option("--csv", benchCsvFile, "Write the report rows as CSV to this file");
  bench->add_option("--strategy", benchStrategy, "naive or seminaive")->capture_default_str();

  // explain
  CommonLoad explainLoad;
  std::string explainTriple, explainStrategy = "seminaive";
  bool explainNoMetaAxiom = false;
  auto* expl = app.add_subcommand("explain", "Show the derivation chain for an inferred triple");
  addDataOption(expl, explainLoad);
  expl->add_option("--triple", explainTriple, "The triple, in N-Triples syntax")->required();
  expl->add_option("--strategy", explainStrategy, "naive or seminaive")->capture_default_str();
  expl->add_flag("--no-meta-axiom", explainNoMetaAxiom, "Materialize without the singleton meta axiom");

  // audit
  std::string auditDir;
  auto* audit = app.add_subcommand("audit", "Cross-check gen-report.json against the emitted dataset files");
  audit->add_option("--dir", auditDir, "Directory written by generate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      genConfig.emitQueries = !noQueries;
      if (!spRelationArgs.empty()) genConfig.spRelations = parseSpRelationArgs(spRelationArgs);
      return cmdGenerate(genConfig);
    }
    if (check->parsed()) return cmdLoadCheck(checkFiles);
    if (mat->parsed()) return cmdMaterialize(matLoad, matOut, matOrigin, matStrategy, matRules, matNoMetaAxiom);
    if (qry->parsed()) {
      if (queryFile.empty() && queryText.empty()) {
        std::cerr << "query: one of --query or --text is required\n";
        return 2;
      }
      return cmdQuery(queryLoad, queryFile, queryText, queryMaterialize, queryFormat, queryBudget, queryStrategy,
                      queryNoMetaAxiom);
    }
    if (bench->parsed()) {
      if (benchPlain.empty() && benchSp.empty()) {
        std::cerr << "bench: at least one of --plain or --sp is required\n";
        return 2;
      }
      return cmdBench(benchPlain, benchSp, benchQueries, benchReps, benchBudget, benchCsvFile, benchStrategy);
    }
    if (expl->parsed()) return cmdExplain(explainLoad, explainTriple, explainStrategy, explainNoMetaAxiom);
    if (audit->parsed()) return cmdAudit(auditDir);
  } catch (const StoreError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
