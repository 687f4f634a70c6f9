#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace spstore {

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

// An RDF term. IRIs are opaque strings compared byte-wise, no normalization.
// A literal carries at most one of datatype/language; when a language tag is
// present the datatype is implicitly rdf:langString and the field stays empty.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;
  std::string datatype;
  std::string language;

  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string value);
  static Term typedLiteral(std::string value, std::string datatypeIri);
  static Term langLiteral(std::string value, std::string languageTag);

  bool isIri() const { return kind == TermKind::Iri; }
  bool isBlank() const { return kind == TermKind::Blank; }
  bool isLiteral() const { return kind == TermKind::Literal; }

  // Empty when no invariant is violated, else a description of the problem.
  std::string validationError() const;

  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

// Dense handle for an interned Term; valid only within the store that minted it.
struct TermId {
  std::uint32_t value = 0;
  bool operator==(const TermId&) const = default;
  auto operator<=>(const TermId&) const = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const;
};

// Well-known RDF/RDFS vocabulary IRIs.
namespace vocab {
inline constexpr const char* kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kRdfProperty = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
inline constexpr const char* kRdfResource = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Resource";
inline constexpr const char* kRdfLangString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr const char* kRdfsClass = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr const char* kRdfsDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr const char* kRdfsRange = "http://www.w3.org/2000/01/rdf-schema#range";
inline constexpr const char* kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr const char* kRdfsSubPropertyOf = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
}  // namespace vocab

}  // namespace spstore

template <>
struct std::hash<spstore::TermId> {
  std::size_t operator()(const spstore::TermId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
