#include "spstore/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "spstore/errors.hpp"
#include "spstore/ntriples.hpp"

namespace spstore {

std::vector<std::string> Query::variables() const {
  if (!star) return projection;
  std::vector<std::string> out;
  for (const TriplePattern& pat : bgp) {
    for (const PatternTerm* t : {&pat.s, &pat.p, &pat.o}) {
      if (const auto* name = std::get_if<std::string>(t)) {
        if (std::find(out.begin(), out.end(), *name) == out.end()) out.push_back(*name);
      }
    }
  }
  return out;
}

namespace {

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

bool isNameChar(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Character cursor over the whole query text; tracks line and column for
// error positions.
class QueryScanner {
 public:
  explicit QueryScanner(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw QuerySyntaxError(ErrorCode::SyntaxError, line_, col_, message);
  }
  [[noreturn]] void failAt(std::size_t line, std::size_t col, ErrorCode code, const std::string& message) const {
    throw QuerySyntaxError(code, line, col, message);
  }

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipSpace() {
    while (!atEnd()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!atEnd() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void expect(char c, const char* what) {
    if (atEnd() || peek() != c) fail(std::string("expected ") + what);
    advance();
  }

  bool tryConsume(char c) {
    if (!atEnd() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  // Bare word (keyword or prefix label start). Empty if next char is not a letter.
  std::string word() {
    std::string out;
    while (!atEnd()) {
      char c = peek();
      if (!(isNameChar(c) || c == '-')) break;
      out.push_back(c);
      advance();
    }
    return out;
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
      advance();
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
    return cp;
  }

  std::uint32_t ucharEscape() {
    if (atEnd()) fail("truncated escape");
    char kind = peek();
    advance();
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
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        appendUtf8(out, ucharEscape());
        continue;
      }
      unsigned char uc = static_cast<unsigned char>(c);
      if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        fail("character not allowed unescaped in IRI");
      }
      out.push_back(c);
      advance();
    }
    if (out.empty()) fail("IRI must be non-empty");
    return out;
  }

  std::string quotedString() {
    expect('"', "'\"'");
    std::string out;
    while (true) {
      if (atEnd()) fail("unterminated literal");
      char c = peek();
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\n') fail("newline inside literal");
      if (c == '\\') {
        advance();
        if (atEnd()) fail("truncated escape");
        char e = peek();
        switch (e) {
          case 't': out.push_back('\t'); advance(); break;
          case 'b': out.push_back('\b'); advance(); break;
          case 'n': out.push_back('\n'); advance(); break;
          case 'r': out.push_back('\r'); advance(); break;
          case 'f': out.push_back('\f'); advance(); break;
          case '"': out.push_back('"'); advance(); break;
          case '\'': out.push_back('\''); advance(); break;
          case '\\': out.push_back('\\'); advance(); break;
          case 'u':
          case 'U': appendUtf8(out, ucharEscape()); break;
          default: fail("unknown escape sequence");
        }
        continue;
      }
      out.push_back(c);
      advance();
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : sc_(text) {}

  Query parse() {
    Query q;
    prologue();
    expectKeyword("SELECT");
    sc_.skipSpace();
    if (matchKeyword("DISTINCT")) q.distinct = true;
    projection(q);
    expectKeyword("WHERE");
    sc_.skipSpace();
    std::size_t braceLine = sc_.line(), braceCol = sc_.col();
    sc_.expect('{', "'{'");
    groupGraphPattern(q);
    sc_.skipSpace();
    if (!sc_.atEnd()) sc_.fail("trailing content after '}'");
    if (q.bgp.empty()) {
      sc_.failAt(braceLine, braceCol, ErrorCode::SyntaxError, "empty graph pattern");
    }
    checkProjection(q);
    return q;
  }

 private:
  void prologue() {
    while (true) {
      sc_.skipSpace();
      if (!peekKeyword("PREFIX")) break;
      sc_.word();
      sc_.skipSpace();
      std::string label = sc_.word();
      sc_.expect(':', "':' after prefix label");
      sc_.skipSpace();
      prefixes_[label] = sc_.iriRef();
    }
  }

  bool peekKeyword(const char* kw) {
    // Case-insensitive; only looks, never consumes.
    QueryScanner probe = sc_;
    std::string w = probe.word();
    return sameKeyword(w, kw);
  }

  static bool sameKeyword(const std::string& w, const char* kw) {
    if (w.size() != std::string_view(kw).size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(w[i])) != kw[i]) return false;
    }
    return true;
  }

  bool matchKeyword(const char* kw) {
    if (!peekKeyword(kw)) return false;
    sc_.word();
    return true;
  }

  void expectKeyword(const char* kw) {
    sc_.skipSpace();
    if (!matchKeyword(kw)) sc_.fail(std::string("expected ") + kw);
  }

  void projection(Query& q) {
    sc_.skipSpace();
    if (sc_.tryConsume('*')) {
      q.star = true;
      return;
    }
    while (true) {
      sc_.skipSpace();
      if (sc_.atEnd() || sc_.peek() != '?') break;
      q.projection.push_back(variable());
    }
    if (q.projection.empty()) sc_.fail("expected '*' or at least one ?variable");
  }

  std::string variable() {
    sc_.expect('?', "'?'");
    std::string name;
    while (!sc_.atEnd() && isNameChar(sc_.peek())) {
      name.push_back(sc_.peek());
      sc_.advance();
    }
    if (name.empty()) sc_.fail("empty variable name");
    return name;
  }

  Term prefixedName() {
    std::size_t line = sc_.line(), col = sc_.col();
    std::string label;
    while (!sc_.atEnd() && (isNameChar(sc_.peek()) || sc_.peek() == '-')) {
      label.push_back(sc_.peek());
      sc_.advance();
    }
    sc_.expect(':', "':' in prefixed name");
    std::string local;
    while (!sc_.atEnd() && (isNameChar(sc_.peek()) || sc_.peek() == '-')) {
      local.push_back(sc_.peek());
      sc_.advance();
    }
    auto it = prefixes_.find(label);
    if (it == prefixes_.end()) {
      sc_.failAt(line, col, ErrorCode::UnknownPrefix, "unknown prefix '" + label + ":'");
    }
    if (local.empty()) sc_.fail("empty local part in prefixed name");
    return Term::iri(it->second + local);
  }

  Term datatypeIri() {
    if (!sc_.atEnd() && sc_.peek() == '<') return Term::iri(sc_.iriRef());
    return prefixedName();
  }

  PatternTerm patternTerm() {
    sc_.skipSpace();
    if (sc_.atEnd()) sc_.fail("expected a term");
    char c = sc_.peek();
    if (c == '?') return variable();
    if (c == '<') return Term::iri(sc_.iriRef());
    if (c == '_') {
      sc_.advance();
      sc_.expect(':', "':' after '_'");
      std::string labelText;
      while (!sc_.atEnd() && isNameChar(sc_.peek())) {
        labelText.push_back(sc_.peek());
        sc_.advance();
      }
      if (labelText.empty()) sc_.fail("empty blank node label");
      return Term::blank(labelText);
    }
    if (c == '"') {
      std::string value = sc_.quotedString();
      if (!sc_.atEnd() && sc_.peek() == '^') {
        sc_.advance();
        sc_.expect('^', "'^^'");
        return Term::typedLiteral(std::move(value), datatypeIri().lexical);
      }
      if (!sc_.atEnd() && sc_.peek() == '@') {
        sc_.advance();
        std::string tag;
        while (!sc_.atEnd() && (isNameChar(sc_.peek()) || sc_.peek() == '-')) {
          tag.push_back(sc_.peek());
          sc_.advance();
        }
        if (tag.empty()) sc_.fail("empty language tag");
        return Term::langLiteral(std::move(value), tag);
      }
      return Term::literal(std::move(value));
    }
    if (isNameChar(c) || c == ':') return prefixedName();
    sc_.fail("expected a variable, IRI, prefixed name, literal or blank node");
  }

  void groupGraphPattern(Query& q) {
    while (true) {
      sc_.skipSpace();
      if (sc_.atEnd()) sc_.fail("unterminated graph pattern, expected '}'");
      if (sc_.tryConsume('}')) return;

      PatternTerm s = patternTerm();
      sc_.skipSpace();
      std::size_t pLine = sc_.line(), pCol = sc_.col();
      PatternTerm p = patternTerm();
      if (const auto* term = std::get_if<Term>(&p); term && !term->isIri()) {
        sc_.failAt(pLine, pCol, ErrorCode::SyntaxError, "predicate must be a variable or IRI");
      }
      PatternTerm o = patternTerm();
      q.bgp.push_back(TriplePattern{std::move(s), std::move(p), std::move(o)});

      sc_.skipSpace();
      bool dot = sc_.tryConsume('.');
      sc_.skipSpace();
      if (!sc_.atEnd() && sc_.peek() == '}') continue;
      if (!dot) sc_.fail("expected '.' between patterns or '}'");
    }
  }

  void checkProjection(const Query& q) {
    if (q.star) return;
    std::vector<std::string> inBgp;
    for (const TriplePattern& pat : q.bgp) {
      for (const PatternTerm* t : {&pat.s, &pat.p, &pat.o}) {
        if (const auto* name = std::get_if<std::string>(t)) inBgp.push_back(*name);
      }
    }
    for (const std::string& v : q.projection) {
      if (std::find(inBgp.begin(), inBgp.end(), v) == inBgp.end()) {
        throw QuerySyntaxError(ErrorCode::SyntaxError, 1, 1, "projected variable ?" + v + " not used in the pattern");
      }
    }
  }

  QueryScanner sc_;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace

Query parseQuery(std::string_view text) { return QueryParser(text).parse(); }

Query parseQueryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseQuery(buf.str());
}

namespace {

constexpr TermId kUnbound{0xFFFFFFFFu};

// A pattern with constants resolved against one store's dictionary.
// dead: some constant is not interned, so the pattern matches nothing.
struct ResolvedPattern {
  std::optional<TermId> s, p, o;
  int sVar = -1, pVar = -1, oVar = -1;
  bool dead = false;
};

struct ResolvedQuery {
  std::vector<ResolvedPattern> patterns;
  std::map<std::string, int> slots;
  bool dead = false;
};

ResolvedQuery resolve(const TripleStore& store, const Query& query) {
  ResolvedQuery out;
  auto resolveTerm = [&](const PatternTerm& pt, std::optional<TermId>& constant, int& var, bool& dead) {
    if (const auto* name = std::get_if<std::string>(&pt)) {
      auto [it, added] = out.slots.emplace(*name, static_cast<int>(out.slots.size()));
      var = it->second;
      return;
    }
    auto id = store.lookup(std::get<Term>(pt));
    if (id) constant = *id;
    else dead = true;
  };
  for (const TriplePattern& pat : query.bgp) {
    ResolvedPattern rp;
    resolveTerm(pat.s, rp.s, rp.sVar, rp.dead);
    resolveTerm(pat.p, rp.p, rp.pVar, rp.dead);
    resolveTerm(pat.o, rp.o, rp.oVar, rp.dead);
    if (rp.dead) out.dead = true;
    out.patterns.push_back(rp);
  }
  return out;
}

IdPattern boundOnly(const ResolvedPattern& rp) { return IdPattern{rp.s, rp.p, rp.o}; }

}  // namespace

std::vector<PlannedPattern> plan(const TripleStore& store, const Query& query) {
  ResolvedQuery rq = resolve(store, query);
  std::vector<PlannedPattern> out;
  for (std::size_t i = 0; i < rq.patterns.size(); ++i) {
    const ResolvedPattern& rp = rq.patterns[i];
    std::size_t estimate = rp.dead ? 0 : store.countMatches(boundOnly(rp));
    out.push_back(PlannedPattern{i, estimate, store.indexFor(boundOnly(rp))});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PlannedPattern& a, const PlannedPattern& b) { return a.estimate < b.estimate; });
  return out;
}

QueryResult evaluate(const TripleStore& store, const Query& query, const QueryOptions& options) {
  QueryResult result;
  result.variables = query.variables();

  ResolvedQuery rq = resolve(store, query);
  if (rq.dead) return result;

  std::vector<PlannedPattern> order = plan(store, query);
  std::vector<TermId> bindings(rq.slots.size(), kUnbound);

  std::vector<int> projectionSlots;
  projectionSlots.reserve(result.variables.size());
  for (const std::string& v : result.variables) projectionSlots.push_back(rq.slots.at(v));

  auto deadline = options.budget ? std::optional(std::chrono::steady_clock::now() + *options.budget) : std::nullopt;
  std::size_t steps = 0;
  auto checkBudget = [&] {
    if (deadline && (++steps & 1023u) == 0 && std::chrono::steady_clock::now() > *deadline) {
      throw StoreError(ErrorCode::QueryTimeout, "query exceeded its time budget");
    }
  };

  std::vector<Solution> rows;

  // Nested-loop join over the planned order. Positions already bound act as
  // constants via the index lookup; the rest bind here.
  auto joinFrom = [&](auto&& self, std::size_t depth) -> void {
    if (depth == order.size()) {
      Solution sol;
      sol.values.reserve(projectionSlots.size());
      for (int slot : projectionSlots) sol.values.push_back(bindings[static_cast<std::size_t>(slot)]);
      rows.push_back(std::move(sol));
      return;
    }
    const ResolvedPattern& rp = rq.patterns[order[depth].patternIndex];
    auto pos = [&](std::optional<TermId> constant, int var) -> std::optional<TermId> {
      if (constant) return constant;
      if (var >= 0 && bindings[static_cast<std::size_t>(var)] != kUnbound) {
        return bindings[static_cast<std::size_t>(var)];
      }
      return std::nullopt;
    };
    IdPattern probe{pos(rp.s, rp.sVar), pos(rp.p, rp.pVar), pos(rp.o, rp.oVar)};
    store.forEachMatch(probe, [&](const Triple& t) {
      checkBudget();
      std::vector<int> boundHere;
      auto bind = [&](int var, std::optional<TermId> constant, TermId value) {
        if (constant) return *constant == value;
        TermId& slot = bindings[static_cast<std::size_t>(var)];
        if (slot == kUnbound) {
          slot = value;
          boundHere.push_back(var);
          return true;
        }
        return slot == value;
      };
      if (bind(rp.sVar, rp.s, t.s) && bind(rp.pVar, rp.p, t.p) && bind(rp.oVar, rp.o, t.o)) {
        self(self, depth + 1);
      }
      for (int var : boundHere) bindings[static_cast<std::size_t>(var)] = kUnbound;
      return true;
    });
  };
  joinFrom(joinFrom, 0);

  // Deterministic order: sort rows by their rendered term tuples.
  std::vector<std::pair<std::string, std::size_t>> keyed;
  keyed.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string key;
    for (TermId id : rows[i].values) {
      key += renderTerm(store.term(id));
      key.push_back('\t');
    }
    keyed.emplace_back(std::move(key), i);
  }
  std::sort(keyed.begin(), keyed.end());

  result.rows.reserve(rows.size());
  for (const auto& [key, i] : keyed) {
    if (query.distinct && !result.rows.empty() && result.rows.back().values == rows[i].values) continue;
    result.rows.push_back(rows[i]);
  }
  return result;
}

std::string toTsv(const TripleStore& store, const QueryResult& result) {
  std::string out;
  for (std::size_t i = 0; i < result.variables.size(); ++i) {
    if (i) out.push_back('\t');
    out.push_back('?');
    out += result.variables[i];
  }
  out.push_back('\n');
  for (const Solution& row : result.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (i) out.push_back('\t');
      out += renderTerm(store.term(row.values[i]));
    }
    out.push_back('\n');
  }
  return out;
}

std::string toJson(const TripleStore& store, const QueryResult& result) {
  nlohmann::json doc;
  doc["variables"] = result.variables;
  nlohmann::json rows = nlohmann::json::array();
  for (const Solution& row : result.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      obj[result.variables[i]] = renderTerm(store.term(row.values[i]));
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace spstore
