#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "spstore/term.hpp"

namespace spstore {

// One fact. Subject is never a literal, predicate is always an IRI.
struct Triple {
  TermId s, p, o;
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::size_t h = t.s.value;
    h = h * 1000003u ^ t.p.value;
    h = h * 1000003u ^ t.o.value;
    return h;
  }
};

enum class Origin : std::uint8_t { Base, Inferred };

enum class OriginFilter : std::uint8_t { All, Base, Inferred };

// Wildcard triple pattern; unset positions match anything.
struct IdPattern {
  std::optional<TermId> s, p, o;
};

// Deduplicating triple set over an interned term dictionary, indexed three
// ways (SPO, POS, OSP). Single writer, any number of readers between writes.
class TripleStore {
 public:
  // Returns the existing id if the term was seen before, else a fresh one.
  // Ids are dense and assigned first-interned-first-numbered.
  TermId intern(const Term& term);

  std::optional<TermId> lookup(const Term& term) const;
  const Term& term(TermId id) const;
  std::size_t termCount() const { return terms_.size(); }

  // True iff the triple was absent. Inserting an existing triple is a no-op,
  // except that a base insert of an inferred triple reflags it as base: a
  // triple both asserted and derived counts once, as asserted data.
  bool insert(const Triple& t, Origin origin = Origin::Base);

  bool contains(const Triple& t) const;
  std::optional<Origin> origin(const Triple& t) const;

  // Visits matches in index order; the visitor returns false to stop early.
  // Index choice: SPO when s is bound, POS when p is bound (s unbound),
  // OSP when only o is bound, full SPO scan otherwise.
  void forEachMatch(const IdPattern& pattern, const std::function<bool(const Triple&)>& visit) const;

  std::vector<Triple> match(const IdPattern& pattern) const;
  std::size_t countMatches(const IdPattern& pattern) const;

  struct Stats {
    std::size_t termCount = 0;
    std::size_t tripleCount = 0;
    std::size_t baseCount = 0;
    std::size_t inferredCount = 0;
  };
  Stats stats() const;

  std::size_t tripleCount() const { return spo_.size(); }

  // All triples matching the origin filter, in SPO order.
  std::vector<Triple> triples(OriginFilter filter = OriginFilter::All) const;

  const char* indexFor(const IdPattern& pattern) const;

  // Direct index walks, for consistency checks.
  template <typename Fn>
  void scanSpo(Fn&& fn) const {
    for (const auto& [t, org] : spo_) fn(t);
  }
  template <typename Fn>
  void scanPos(Fn&& fn) const {
    for (const auto& t : pos_) fn(t);
  }
  template <typename Fn>
  void scanOsp(Fn&& fn) const {
    for (const auto& t : osp_) fn(t);
  }

 private:
  struct PosLess {
    bool operator()(const Triple& a, const Triple& b) const {
      if (a.p != b.p) return a.p < b.p;
      if (a.o != b.o) return a.o < b.o;
      return a.s < b.s;
    }
  };
  struct OspLess {
    bool operator()(const Triple& a, const Triple& b) const {
      if (a.o != b.o) return a.o < b.o;
      if (a.s != b.s) return a.s < b.s;
      return a.p < b.p;
    }
  };

  void checkIds(const Triple& t) const;

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::map<Triple, Origin> spo_;
  std::set<Triple, PosLess> pos_;
  std::set<Triple, OspLess> osp_;
  std::size_t inferredCount_ = 0;
};

}  // namespace spstore
