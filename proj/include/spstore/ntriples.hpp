#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spstore/store.hpp"

namespace spstore {

enum class Severity : std::uint8_t { Error, Warning };

struct ParseDiagnostic {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::size_t triplesAdded = 0;
  std::vector<ParseDiagnostic> diagnostics;

  bool hasErrors() const {
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::Error) return true;
    }
    return false;
  }
};

// Line-oriented N-Triples parser. Malformed lines are skipped and reported;
// every other line yields one insert (duplicates become warnings).
ParseResult parseNTriples(std::string_view text, TripleStore& store, Origin origin = Origin::Base);
ParseResult parseNTriplesFile(const std::string& path, TripleStore& store, Origin origin = Origin::Base);

// Parses a single "<s> <p> <o>" fragment, trailing dot optional. Throws
// StoreError(SyntaxError) on malformed input. Terms are interned.
Triple parseTripleText(std::string_view text, TripleStore& store);

// One N-Triples token for the term (angle-bracketed IRI, _:label, or quoted
// literal with optional ^^/@ suffix).
std::string renderTerm(const Term& term);

std::string renderTriple(const TripleStore& store, const Triple& t);

// Canonical serialization: one line per triple, sorted by the rendered
// (subject, predicate, object) tuple, "\n" line ends. Byte-deterministic for
// equal stores.
std::string writeNTriples(const TripleStore& store, OriginFilter filter = OriginFilter::All);
void writeNTriples(std::ostream& out, const TripleStore& store, OriginFilter filter = OriginFilter::All);
void writeNTriplesFile(const std::string& path, const TripleStore& store, OriginFilter filter = OriginFilter::All);

}  // namespace spstore
