#include "spstore/term.hpp"

namespace spstore {

Term Term::iri(std::string value) {
  Term t;
  t.kind = TermKind::Iri;
  t.lexical = std::move(value);
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind = TermKind::Blank;
  t.lexical = std::move(label);
  return t;
}

Term Term::literal(std::string value) {
  Term t;
  t.kind = TermKind::Literal;
  t.lexical = std::move(value);
  return t;
}

Term Term::typedLiteral(std::string value, std::string datatypeIri) {
  Term t = literal(std::move(value));
  t.datatype = std::move(datatypeIri);
  return t;
}

Term Term::langLiteral(std::string value, std::string languageTag) {
  Term t = literal(std::move(value));
  t.language = std::move(languageTag);
  return t;
}

static bool isBlankLabelChar(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

static bool isLanguageTagShaped(const std::string& tag) {
  if (tag.empty()) return false;
  bool inFirstPart = true;
  bool partEmpty = true;
  for (char c : tag) {
    if (c == '-') {
      if (partEmpty) return false;
      inFirstPart = false;
      partEmpty = true;
      continue;
    }
    bool alpha = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    bool digit = (c >= '0' && c <= '9');
    if (inFirstPart ? !alpha : !(alpha || digit)) return false;
    partEmpty = false;
  }
  return !partEmpty;
}

std::string Term::validationError() const {
  switch (kind) {
    case TermKind::Iri:
      if (lexical.empty()) return "IRI must be non-empty";
      if (!datatype.empty() || !language.empty()) return "IRI carries literal fields";
      return {};
    case TermKind::Blank:
      if (lexical.empty()) return "blank node label must be non-empty";
      for (char c : lexical) {
        if (!isBlankLabelChar(c)) return "blank node label must match [A-Za-z0-9_]+";
      }
      if (!datatype.empty() || !language.empty()) return "blank node carries literal fields";
      return {};
    case TermKind::Literal:
      if (!datatype.empty() && !language.empty()) return "literal has both datatype and language tag";
      if (!language.empty() && !isLanguageTagShaped(language)) return "malformed language tag";
      return {};
  }
  return "unknown term kind";
}

std::size_t TermHash::operator()(const Term& t) const {
  std::size_t h = std::hash<std::string>{}(t.lexical);
  h = h * 31 + static_cast<std::size_t>(t.kind);
  if (!t.datatype.empty()) h = h * 31 + std::hash<std::string>{}(t.datatype);
  if (!t.language.empty()) h = h * 31 + std::hash<std::string>{}(t.language);
  return h;
}

}  // namespace spstore
