#include "spstore/ntriples.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spstore/errors.hpp"

namespace spstore {

namespace {

struct LineError {
  std::size_t column;
  std::string message;
};

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Scans one physical line of N-Triples.
class LineScanner {
 public:
  explicit LineScanner(std::string_view line) : line_(line) {}

  [[noreturn]] void fail(const std::string& message) const { throw LineError{pos_ + 1, message}; }

  bool atEnd() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  std::size_t column() const { return pos_ + 1; }

  void skipWhitespace() {
    while (!atEnd() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  bool commentOrEnd() {
    skipWhitespace();
    return atEnd() || peek() == '#';
  }

  void expect(char c, const char* what) {
    if (atEnd() || peek() != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  std::uint32_t hexEscape(std::size_t digits) {
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      if (atEnd()) fail("truncated \\u escape");
      char c = peek();
      std::uint32_t v;
      if (c >= '0' && c <= '9') v = static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') v = static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v = static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in \\u escape");
      cp = (cp << 4) | v;
      ++pos_;
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
    return cp;
  }

  // UCHAR: \uXXXX or \UXXXXXXXX. Caller consumed the backslash.
  std::uint32_t ucharEscape() {
    if (atEnd()) fail("truncated escape");
    char kind = peek();
    ++pos_;
    if (kind == 'u') return hexEscape(4);
    if (kind == 'U') return hexEscape(8);
    fail("only \\u/\\U escapes are allowed here");
  }

  std::string iriRef() {
    expect('<', "'<'");
    std::string out;
    while (true) {
      if (atEnd()) fail("unterminated IRI");
      char c = peek();
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        appendUtf8(out, ucharEscape());
        continue;
      }
      unsigned char uc = static_cast<unsigned char>(c);
      if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        fail("character not allowed unescaped in IRI");
      }
      out.push_back(c);
      ++pos_;
    }
    if (out.empty()) fail("IRI must be non-empty");
    return out;
  }

  std::string blankLabel() {
    expect('_', "'_:'");
    expect(':', "'_:'");
    std::string out;
    while (!atEnd()) {
      char c = peek();
      bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) break;
      out.push_back(c);
      ++pos_;
    }
    if (out.empty()) fail("empty blank node label");
    return out;
  }

  std::string quotedString() {
    expect('"', "'\"'");
    std::string out;
    while (true) {
      if (atEnd()) fail("unterminated literal");
      char c = peek();
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        ++pos_;
        if (atEnd()) fail("truncated escape");
        char e = peek();
        switch (e) {
          case 't': out.push_back('\t'); ++pos_; break;
          case 'b': out.push_back('\b'); ++pos_; break;
          case 'n': out.push_back('\n'); ++pos_; break;
          case 'r': out.push_back('\r'); ++pos_; break;
          case 'f': out.push_back('\f'); ++pos_; break;
          case '"': out.push_back('"'); ++pos_; break;
          case '\'': out.push_back('\''); ++pos_; break;
          case '\\': out.push_back('\\'); ++pos_; break;
          case 'u':
          case 'U': appendUtf8(out, ucharEscape()); break;
          default: fail("unknown escape sequence");
        }
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
  }

  std::string languageTag() {
    // '@' consumed by the caller.
    std::string out;
    while (!atEnd()) {
      char c = peek();
      bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
      if (!ok) break;
      out.push_back(c);
      ++pos_;
    }
    if (out.empty()) fail("empty language tag");
    return out;
  }

  Term object() {
    if (atEnd()) fail("expected object term");
    char c = peek();
    if (c == '<') return Term::iri(iriRef());
    if (c == '_') return Term::blank(blankLabel());
    if (c == '"') {
      std::string value = quotedString();
      if (!atEnd() && peek() == '^') {
        ++pos_;
        expect('^', "'^^'");
        return Term::typedLiteral(std::move(value), iriRef());
      }
      if (!atEnd() && peek() == '@') {
        ++pos_;
        return Term::langLiteral(std::move(value), languageTag());
      }
      return Term::literal(std::move(value));
    }
    fail("expected '<', '_:' or '\"'");
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
};

void parseLine(std::string_view line, std::size_t lineNo, TripleStore& store, Origin origin, ParseResult& result) {
  LineScanner sc(line);
  if (sc.commentOrEnd()) return;

  Term subject = sc.peek() == '_' ? Term::blank(sc.blankLabel()) : Term::iri(sc.iriRef());
  sc.skipWhitespace();
  std::size_t predicateCol = sc.column();
  Term predicate = Term::iri(sc.iriRef());
  sc.skipWhitespace();
  Term object = sc.object();
  sc.skipWhitespace();
  sc.expect('.', "'.' terminator");
  if (!sc.commentOrEnd()) sc.fail("trailing content after '.'");

  for (const Term* t : {&subject, &predicate, &object}) {
    std::string problem = t->validationError();
    if (!problem.empty()) throw LineError{t == &predicate ? predicateCol : 1, problem};
  }

  Triple triple{store.intern(subject), store.intern(predicate), store.intern(object)};
  if (store.insert(triple, origin)) {
    ++result.triplesAdded;
  } else {
    result.diagnostics.push_back({lineNo, 1, "duplicate triple", Severity::Warning});
  }
}

}  // namespace

ParseResult parseNTriples(std::string_view text, TripleStore& store, Origin origin) {
  ParseResult result;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    if (start == text.size() && lineNo > 0) break;
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineNo;
    try {
      parseLine(line, lineNo, store, origin, result);
    } catch (const LineError& e) {
      result.diagnostics.push_back({lineNo, e.column, e.message, Severity::Error});
    } catch (const StoreError& e) {
      result.diagnostics.push_back({lineNo, 1, e.what(), Severity::Error});
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return result;
}

ParseResult parseNTriplesFile(const std::string& path, TripleStore& store, Origin origin) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseNTriples(buf.str(), store, origin);
}

Triple parseTripleText(std::string_view text, TripleStore& store) {
  std::string line(text);
  // Accept the fragment with or without the final dot.
  auto lastNonSpace = line.find_last_not_of(" \t");
  if (lastNonSpace == std::string::npos) throw StoreError(ErrorCode::SyntaxError, "empty triple text");
  if (line[lastNonSpace] != '.') line += " .";

  TripleStore probe;
  ParseResult probeResult = parseNTriples(line, probe);
  if (probeResult.hasErrors() || probe.tripleCount() != 1) {
    std::string message = "malformed triple";
    for (const auto& d : probeResult.diagnostics) {
      if (d.severity == Severity::Error) {
        message += ": col " + std::to_string(d.column) + " " + d.message;
        break;
      }
    }
    throw StoreError(ErrorCode::SyntaxError, message);
  }
  Triple t = probe.triples().front();
  return Triple{store.intern(probe.term(t.s)), store.intern(probe.term(t.p)), store.intern(probe.term(t.o))};
}

namespace {

void appendHexEscape(std::string& out, std::uint32_t cp) {
  char buf[16];
  if (cp <= 0xFFFF) {
    std::snprintf(buf, sizeof buf, "\\u%04X", cp);
  } else {
    std::snprintf(buf, sizeof buf, "\\U%08X", cp);
  }
  out += buf;
}

void renderIriInto(std::string& out, const std::string& iri) {
  out.push_back('<');
  for (char c : iri) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\') {
      appendHexEscape(out, uc);
    } else {
      out.push_back(c);
    }
  }
  out.push_back('>');
}

void renderLiteralBody(std::string& out, const std::string& value) {
  out.push_back('"');
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

}  // namespace

std::string renderTerm(const Term& term) {
  std::string out;
  switch (term.kind) {
    case TermKind::Iri:
      renderIriInto(out, term.lexical);
      break;
    case TermKind::Blank:
      out = "_:" + term.lexical;
      break;
    case TermKind::Literal:
      renderLiteralBody(out, term.lexical);
      if (!term.language.empty()) {
        out.push_back('@');
        out += term.language;
      } else if (!term.datatype.empty()) {
        out += "^^";
        renderIriInto(out, term.datatype);
      }
      break;
  }
  return out;
}

std::string renderTriple(const TripleStore& store, const Triple& t) {
  return renderTerm(store.term(t.s)) + " " + renderTerm(store.term(t.p)) + " " + renderTerm(store.term(t.o));
}

std::string writeNTriples(const TripleStore& store, OriginFilter filter) {
  std::vector<std::array<std::string, 3>> rows;
  for (const Triple& t : store.triples(filter)) {
    rows.push_back({renderTerm(store.term(t.s)), renderTerm(store.term(t.p)), renderTerm(store.term(t.o))});
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& row : rows) {
    out += row[0];
    out.push_back(' ');
    out += row[1];
    out.push_back(' ');
    out += row[2];
    out += " .\n";
  }
  return out;
}

void writeNTriples(std::ostream& out, const TripleStore& store, OriginFilter filter) {
  out << writeNTriples(store, filter);
}

void writeNTriplesFile(const std::string& path, const TripleStore& store, OriginFilter filter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StoreError(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << writeNTriples(store, filter);
  if (!out) throw StoreError(ErrorCode::IoError, "write failed on " + path);
}

}  // namespace spstore
