#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spstore/store.hpp"
#include "spstore/term.hpp"

namespace spstore {

// One position of a basic graph pattern: a variable name (without '?') or a
// concrete term.
using PatternTerm = std::variant<std::string, Term>;

struct TriplePattern {
  PatternTerm s, p, o;
};

struct Query {
  std::vector<std::string> projection;  // empty + star: all variables in order of first use
  bool star = false;
  bool distinct = false;
  std::vector<TriplePattern> bgp;

  std::vector<std::string> variables() const;  // projected variables after star expansion
};

Query parseQuery(std::string_view text);
Query parseQueryFile(const std::string& path);

struct PlannedPattern {
  std::size_t patternIndex;  // position in Query::bgp
  std::size_t estimate;      // countMatches on constant positions
  std::string index;         // index the store would pick
};

// Greedy cardinality order; ties keep written order.
std::vector<PlannedPattern> plan(const TripleStore& store, const Query& query);

struct QueryOptions {
  std::optional<std::chrono::milliseconds> budget;
};

struct Solution {
  std::vector<TermId> values;  // one per projected variable
};

struct QueryResult {
  std::vector<std::string> variables;
  std::vector<Solution> rows;  // sorted by rendered term tuples; bag semantics unless distinct
};

QueryResult evaluate(const TripleStore& store, const Query& query, const QueryOptions& options = {});

std::string toTsv(const TripleStore& store, const QueryResult& result);
std::string toJson(const TripleStore& store, const QueryResult& result);

}  // namespace spstore
