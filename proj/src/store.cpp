#include "spstore/store.hpp"

#include <limits>

#include "spstore/errors.hpp"

namespace spstore {

TermId TripleStore::intern(const Term& term) {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  std::string problem = term.validationError();
  if (!problem.empty()) throw StoreError(ErrorCode::MalformedTerm, problem);
  if (terms_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw StoreError(ErrorCode::ResourceLimit, "term dictionary full");
  }
  TermId id{static_cast<std::uint32_t>(terms_.size())};
  terms_.push_back(term);
  ids_.emplace(term, id);
  return id;
}

std::optional<TermId> TripleStore::lookup(const Term& term) const {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  return std::nullopt;
}

const Term& TripleStore::term(TermId id) const {
  if (id.value >= terms_.size()) {
    throw StoreError(ErrorCode::UnknownTermId, "no term with id " + std::to_string(id.value));
  }
  return terms_[id.value];
}

void TripleStore::checkIds(const Triple& t) const {
  for (TermId id : {t.s, t.p, t.o}) {
    if (id.value >= terms_.size()) {
      throw StoreError(ErrorCode::UnknownTermId, "triple uses id " + std::to_string(id.value) + " never interned");
    }
  }
}

bool TripleStore::insert(const Triple& t, Origin origin) {
  checkIds(t);
  if (terms_[t.s.value].isLiteral()) {
    throw StoreError(ErrorCode::LiteralSubject, "subject must be an IRI or blank node");
  }
  if (!terms_[t.p.value].isIri()) {
    throw StoreError(ErrorCode::NonIriPredicate, "predicate must be an IRI");
  }
  auto [it, added] = spo_.emplace(t, origin);
  if (!added) {
    if (it->second == Origin::Inferred && origin == Origin::Base) {
      it->second = Origin::Base;
      --inferredCount_;
    }
    return false;
  }
  pos_.insert(t);
  osp_.insert(t);
  if (origin == Origin::Inferred) ++inferredCount_;
  return true;
}

bool TripleStore::contains(const Triple& t) const { return spo_.count(t) > 0; }

std::optional<Origin> TripleStore::origin(const Triple& t) const {
  if (auto it = spo_.find(t); it != spo_.end()) return it->second;
  return std::nullopt;
}

const char* TripleStore::indexFor(const IdPattern& q) const {
  if (q.s) return "SPO";
  if (q.p) return "POS";
  if (q.o) return "OSP";
  return "SPO-scan";
}

namespace {
constexpr TermId kMinId{0};
constexpr TermId kMaxId{std::numeric_limits<std::uint32_t>::max()};
}  // namespace

void TripleStore::forEachMatch(const IdPattern& q, const std::function<bool(const Triple&)>& visit) const {
  auto keep = [&](const Triple& t) {
    return (!q.s || t.s == *q.s) && (!q.p || t.p == *q.p) && (!q.o || t.o == *q.o);
  };

  if (q.s) {
    Triple lo{*q.s, q.p.value_or(kMinId), q.p ? q.o.value_or(kMinId) : kMinId};
    Triple hi{*q.s, q.p.value_or(kMaxId), q.p ? q.o.value_or(kMaxId) : kMaxId};
    for (auto it = spo_.lower_bound(lo), end = spo_.upper_bound(hi); it != end; ++it) {
      if (keep(it->first) && !visit(it->first)) return;
    }
    return;
  }
  if (q.p) {
    Triple lo{kMinId, *q.p, q.o.value_or(kMinId)};
    Triple hi{kMaxId, *q.p, q.o.value_or(kMaxId)};
    for (auto it = pos_.lower_bound(lo), end = pos_.upper_bound(hi); it != end; ++it) {
      if (keep(*it) && !visit(*it)) return;
    }
    return;
  }
  if (q.o) {
    Triple lo{kMinId, kMinId, *q.o};
    Triple hi{kMaxId, kMaxId, *q.o};
    for (auto it = osp_.lower_bound(lo), end = osp_.upper_bound(hi); it != end; ++it) {
      if (keep(*it) && !visit(*it)) return;
    }
    return;
  }
  for (const auto& [t, org] : spo_) {
    if (!visit(t)) return;
  }
}

std::vector<Triple> TripleStore::match(const IdPattern& q) const {
  std::vector<Triple> out;
  forEachMatch(q, [&](const Triple& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::size_t TripleStore::countMatches(const IdPattern& q) const {
  std::size_t n = 0;
  forEachMatch(q, [&](const Triple&) {
    ++n;
    return true;
  });
  return n;
}

TripleStore::Stats TripleStore::stats() const {
  Stats st;
  st.termCount = terms_.size();
  st.tripleCount = spo_.size();
  st.inferredCount = inferredCount_;
  st.baseCount = st.tripleCount - st.inferredCount;
  return st;
}

std::vector<Triple> TripleStore::triples(OriginFilter filter) const {
  std::vector<Triple> out;
  for (const auto& [t, org] : spo_) {
    if (filter == OriginFilter::All || (filter == OriginFilter::Base && org == Origin::Base) ||
        (filter == OriginFilter::Inferred && org == Origin::Inferred)) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace spstore
