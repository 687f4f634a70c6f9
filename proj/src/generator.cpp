#include "spstore/generator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "spstore/errors.hpp"
#include "spstore/ntriples.hpp"

namespace spstore {

std::vector<SpRelation> defaultSpRelations() {
  const std::string ub = kUnivBenchNs;
  return {
      {ub + "worksFor", 2},
      {ub + "headOf", 2},
      {ub + "teachingAssistantOf", 2},
      {ub + "memberOfGroup", 2},
      {ub + "hasAdvisor", 2},
      {ub + "takesCourse", 1},
      {ub + "teacherOf", 1},
      {ub + "publicationAuthor", 1},
      {ub + "undergraduateDegreeFrom", 1},
      {ub + "affiliatedWith", 1},
  };
}

namespace {

const char* const kRelationNames[] = {
    "worksFor",       "headOf",        "takesCourse",     "teachingAssistantOf",
    "memberOfGroup",  "hasAdvisor",    "teacherOf",       "publicationAuthor",
    "undergraduateDegreeFrom", "affiliatedWith", "memberOf", "subOrganizationOf",
    "mastersDegreeFrom", "doctoralDegreeFrom", "collaboratesWith", "coursesOfferedBy",
    "hasAlumnus",
};

}  // namespace

std::vector<std::string> schemaRelations() {
  std::vector<std::string> out;
  for (const char* name : kRelationNames) out.push_back(std::string(kUnivBenchNs) + name);
  return out;
}

void GenConfig::validate() const {
  if (universities == 0) throw StoreError(ErrorCode::ConfigError, "universities must be positive");
  std::vector<std::string> known = schemaRelations();
  std::set<std::string> seen;
  for (const SpRelation& rel : spRelations) {
    if (rel.temporalArity != 1 && rel.temporalArity != 2) {
      throw StoreError(ErrorCode::ConfigError, rel.iri + ": temporal arity must be 1 or 2");
    }
    if (std::find(known.begin(), known.end(), rel.iri) == known.end()) {
      throw StoreError(ErrorCode::ConfigError, rel.iri + " is not a schema relation");
    }
    if (!seen.insert(rel.iri).second) {
      throw StoreError(ErrorCode::ConfigError, rel.iri + " listed twice");
    }
  }
}

namespace {

// Rejection-sampled uniform draw: identical sequences on every platform,
// unlike std::uniform_int_distribution.
std::uint64_t uniformInt(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t range = hi - lo + 1;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t rem = (kMax % range + 1) % range;
  std::uint64_t r;
  do {
    r = rng();
  } while (rem != 0 && r > kMax - rem);
  return lo + r % range;
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(uniformInt(rng, lo, hi));
}

// k distinct indexes from [0, n), in draw order; all of them when k >= n.
std::vector<std::size_t> sampleDistinct(std::mt19937_64& rng, std::size_t k, std::size_t n) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (k >= n) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::set<std::size_t> used;
  while (out.size() < k) {
    std::size_t i = pick(rng, 0, n - 1);
    if (used.insert(i).second) out.push_back(i);
  }
  return out;
}

struct SchemaIds {
  TermId type;
  std::map<std::string, TermId> cls;  // short class name -> id
  std::map<std::string, TermId> rel;  // short relation name -> id
  TermId from, to;
};

// Classes: name, superclass ("" for roots).
const std::pair<const char*, const char*> kClasses[] = {
    {"Organization", ""},
    {"University", "Organization"},
    {"Department", "Organization"},
    {"ResearchGroup", "Organization"},
    {"Person", ""},
    {"Employee", "Person"},
    {"Faculty", "Employee"},
    {"Professor", "Faculty"},
    {"FullProfessor", "Professor"},
    {"AssociateProfessor", "Professor"},
    {"AssistantProfessor", "Professor"},
    {"VisitingProfessor", "Professor"},
    {"Lecturer", "Faculty"},
    {"Student", "Person"},
    {"UndergraduateStudent", "Student"},
    {"GraduateStudent", "Student"},
    {"Course", ""},
    {"GraduateCourse", "Course"},
    {"Publication", ""},
};

// Relations: name, domain class, range class.
const std::array<const char*, 3> kRelationSchema[] = {
    {"worksFor", "Faculty", "Organization"},
    {"headOf", "Professor", "Department"},
    {"takesCourse", "Student", "Course"},
    {"teachingAssistantOf", "GraduateStudent", "Course"},
    {"memberOfGroup", "Person", "ResearchGroup"},
    {"hasAdvisor", "Student", "Professor"},
    {"teacherOf", "Faculty", "Course"},
    {"publicationAuthor", "Publication", "Person"},
    {"undergraduateDegreeFrom", "Person", "University"},
    {"affiliatedWith", "Faculty", "Organization"},
    {"memberOf", "Person", "Organization"},
    {"subOrganizationOf", "Organization", "Organization"},
    {"mastersDegreeFrom", "Person", "University"},
    {"doctoralDegreeFrom", "Faculty", "University"},
    {"collaboratesWith", "Faculty", "Faculty"},
    {"coursesOfferedBy", "Course", "Department"},
    {"hasAlumnus", "University", "Person"},
};

SchemaIds installSchema(TripleStore& store) {
  const std::string ub = kUnivBenchNs;
  SchemaIds ids;
  ids.type = store.intern(Term::iri(vocab::kRdfType));
  TermId propertyId = store.intern(Term::iri(vocab::kRdfProperty));
  TermId classId = store.intern(Term::iri(vocab::kRdfsClass));
  TermId subClassId = store.intern(Term::iri(vocab::kRdfsSubClassOf));
  TermId subPropId = store.intern(Term::iri(vocab::kRdfsSubPropertyOf));
  TermId domainId = store.intern(Term::iri(vocab::kRdfsDomain));
  TermId rangeId = store.intern(Term::iri(vocab::kRdfsRange));

  for (const auto& [name, super] : kClasses) {
    TermId c = store.intern(Term::iri(ub + name));
    ids.cls[name] = c;
    store.insert({c, ids.type, classId});
    if (*super) store.insert({c, subClassId, store.intern(Term::iri(ub + super))});
  }
  for (const auto& [name, domain, range] : kRelationSchema) {
    TermId r = store.intern(Term::iri(ub + name));
    ids.rel[name] = r;
    store.insert({r, ids.type, propertyId});
    store.insert({r, domainId, ids.cls.at(domain)});
    store.insert({r, rangeId, ids.cls.at(range)});
  }
  store.insert({ids.rel.at("worksFor"), subPropId, ids.rel.at("memberOf")});
  store.insert({ids.rel.at("headOf"), subPropId, ids.rel.at("worksFor")});

  ids.from = store.intern(Term::iri(ub + "from"));
  ids.to = store.intern(Term::iri(ub + "to"));
  store.insert({ids.from, ids.type, propertyId});
  store.insert({ids.to, ids.type, propertyId});
  return ids;
}

// Per-entity cardinality ranges. Calibrated so the default sp/plain ratio
// lands near 2.0.
struct Ranges {
  std::size_t deptMin = 3, deptMax = 5;
  std::size_t fullMin = 2, fullMax = 3;
  std::size_t assocMin = 2, assocMax = 4;
  std::size_t asstMin = 2, asstMax = 4;
  std::size_t lecturerMin = 1, lecturerMax = 3;
  std::size_t ugradMin = 12, ugradMax = 20;
  std::size_t gradMin = 5, gradMax = 8;
  std::size_t courseMin = 6, courseMax = 9;
  std::size_t gradCourseMin = 3, gradCourseMax = 5;
  std::size_t groupMin = 1, groupMax = 2;
  std::size_t pubMin = 4, pubMax = 8;
  std::size_t ugradTakesMin = 2, ugradTakesMax = 3;
  std::size_t gradTakesMin = 1, gradTakesMax = 2;
  std::size_t groupMemberMin = 2, groupMemberMax = 4;
  std::size_t pubAuthorMin = 1, pubAuthorMax = 3;
  std::size_t collabMin = 1, collabMax = 2;
};

class InstanceBuilder {
 public:
  InstanceBuilder(TripleStore& store, const SchemaIds& ids, std::mt19937_64& rng)
      : store_(store), ids_(ids), rng_(rng) {}

  void build(std::size_t universities) {
    for (std::size_t u = 0; u < universities; ++u) {
      std::string iri = std::string(kDataNs) + "univ" + std::to_string(u);
      universities_.push_back(entity(iri, "University"));
    }
    for (std::size_t u = 0; u < universities; ++u) buildUniversity(u);
  }

 private:
  TermId entity(const std::string& iri, const char* className) {
    TermId id = store_.intern(Term::iri(iri));
    store_.insert({id, ids_.type, ids_.cls.at(className)});
    return id;
  }

  void relate(TermId s, const char* relation, TermId o) { store_.insert({s, ids_.rel.at(relation), o}); }

  TermId anyUniversity() { return universities_[pick(rng_, 0, universities_.size() - 1)]; }

  void buildUniversity(std::size_t u) {
    std::string base = std::string(kDataNs) + "univ" + std::to_string(u);
    std::size_t depts = pick(rng_, r_.deptMin, r_.deptMax);
    for (std::size_t d = 0; d < depts; ++d) buildDepartment(universities_[u], base + "/dept" + std::to_string(d));
  }

  void buildDepartment(TermId univ, const std::string& base) {
    TermId dept = entity(base, "Department");
    relate(dept, "subOrganizationOf", univ);

    std::vector<TermId> professors, faculty;
    auto addProfessors = [&](const char* className, const char* label, std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) {
        TermId p = entity(base + "/" + label + std::to_string(i), className);
        professors.push_back(p);
        faculty.push_back(p);
      }
    };
    addProfessors("FullProfessor", "fullprof", pick(rng_, r_.fullMin, r_.fullMax));
    addProfessors("AssociateProfessor", "assocprof", pick(rng_, r_.assocMin, r_.assocMax));
    addProfessors("AssistantProfessor", "asstprof", pick(rng_, r_.asstMin, r_.asstMax));
    std::size_t lecturers = pick(rng_, r_.lecturerMin, r_.lecturerMax);
    for (std::size_t i = 0; i < lecturers; ++i) {
      faculty.push_back(entity(base + "/lecturer" + std::to_string(i), "Lecturer"));
    }

    std::vector<TermId> courses, gradCourses, allCourses;
    std::size_t courseCount = pick(rng_, r_.courseMin, r_.courseMax);
    for (std::size_t i = 0; i < courseCount; ++i) {
      TermId c = entity(base + "/course" + std::to_string(i), "Course");
      courses.push_back(c);
      allCourses.push_back(c);
      relate(c, "coursesOfferedBy", dept);
    }
    std::size_t gradCourseCount = pick(rng_, r_.gradCourseMin, r_.gradCourseMax);
    for (std::size_t i = 0; i < gradCourseCount; ++i) {
      TermId c = entity(base + "/gcourse" + std::to_string(i), "GraduateCourse");
      gradCourses.push_back(c);
      allCourses.push_back(c);
      relate(c, "coursesOfferedBy", dept);
    }

    std::vector<TermId> ugrads, grads;
    std::size_t ugradCount = pick(rng_, r_.ugradMin, r_.ugradMax);
    for (std::size_t i = 0; i < ugradCount; ++i) {
      ugrads.push_back(entity(base + "/ugrad" + std::to_string(i), "UndergraduateStudent"));
    }
    std::size_t gradCount = pick(rng_, r_.gradMin, r_.gradMax);
    for (std::size_t i = 0; i < gradCount; ++i) {
      grads.push_back(entity(base + "/grad" + std::to_string(i), "GraduateStudent"));
    }

    std::vector<TermId> groups;
    std::size_t groupCount = pick(rng_, r_.groupMin, r_.groupMax);
    for (std::size_t i = 0; i < groupCount; ++i) {
      TermId g = entity(base + "/group" + std::to_string(i), "ResearchGroup");
      groups.push_back(g);
      relate(g, "subOrganizationOf", dept);
    }

    // The first full professor chairs the department.
    relate(professors[0], "headOf", dept);

    for (TermId f : faculty) {
      relate(f, "worksFor", univ);
      relate(f, "memberOf", dept);
      relate(f, "undergraduateDegreeFrom", anyUniversity());
      relate(f, "mastersDegreeFrom", anyUniversity());
      relate(f, "doctoralDegreeFrom", anyUniversity());
      for (std::size_t i : sampleDistinct(rng_, pick(rng_, r_.collabMin, r_.collabMax), faculty.size())) {
        if (faculty[i] != f) relate(f, "collaboratesWith", faculty[i]);
      }
    }
    for (TermId p : professors) relate(p, "affiliatedWith", anyUniversity());

    for (std::size_t c = 0; c < allCourses.size(); ++c) {
      relate(faculty[pick(rng_, 0, faculty.size() - 1)], "teacherOf", allCourses[c]);
    }

    for (TermId s : ugrads) {
      relate(s, "memberOf", dept);
      for (std::size_t i : sampleDistinct(rng_, pick(rng_, r_.ugradTakesMin, r_.ugradTakesMax), courses.size())) {
        relate(s, "takesCourse", courses[i]);
      }
    }
    for (TermId s : grads) {
      relate(s, "memberOf", dept);
      for (std::size_t i : sampleDistinct(rng_, pick(rng_, r_.gradTakesMin, r_.gradTakesMax), gradCourses.size())) {
        relate(s, "takesCourse", gradCourses[i]);
      }
      relate(s, "teachingAssistantOf", courses[pick(rng_, 0, courses.size() - 1)]);
      relate(s, "hasAdvisor", professors[pick(rng_, 0, professors.size() - 1)]);
      TermId alma = anyUniversity();
      relate(s, "undergraduateDegreeFrom", alma);
      relate(alma, "hasAlumnus", s);
    }

    std::vector<TermId> researchers = faculty;
    researchers.insert(researchers.end(), grads.begin(), grads.end());
    for (TermId g : groups) {
      for (std::size_t i :
           sampleDistinct(rng_, pick(rng_, r_.groupMemberMin, r_.groupMemberMax), researchers.size())) {
        relate(researchers[i], "memberOfGroup", g);
      }
    }

    std::size_t pubCount = pick(rng_, r_.pubMin, r_.pubMax);
    for (std::size_t i = 0; i < pubCount; ++i) {
      TermId pub = entity(base + "/pub" + std::to_string(i), "Publication");
      for (std::size_t a : sampleDistinct(rng_, pick(rng_, r_.pubAuthorMin, r_.pubAuthorMax), researchers.size())) {
        relate(pub, "publicationAuthor", researchers[a]);
      }
    }
  }

  TripleStore& store_;
  const SchemaIds& ids_;
  std::mt19937_64& rng_;
  Ranges r_;
  std::vector<TermId> universities_;
};

}  // namespace

GeneratedPair generatePair(const GenConfig& config) {
  config.validate();
  GeneratedPair out;

  std::mt19937_64 rng(config.seed);
  SchemaIds plainIds = installSchema(out.plain);
  InstanceBuilder(out.plain, plainIds, rng).build(config.universities);

  SchemaIds spIds = installSchema(out.sp);
  out.report.vocabularyTripleCount = installVocabulary(out.sp, true);

  std::map<std::string, int> arityByIri;
  for (const SpRelation& rel : config.spRelations) arityByIri[rel.iri] = rel.temporalArity;

  // Separate stream for temporal values, so tweaking instance cardinalities
  // never shifts the years.
  std::mt19937_64 temporalRng(config.seed ^ 0x9E3779B97F4A7C15ull);
  SingletonMinter minter;

  for (const Triple& t : out.plain.triples()) {
    const Term& p = out.plain.term(t.p);
    Triple copy{out.sp.intern(out.plain.term(t.s)), out.sp.intern(p), out.sp.intern(out.plain.term(t.o))};
    auto arity = arityByIri.find(p.lexical);
    if (arity == arityByIri.end()) {
      out.sp.insert(copy);
      continue;
    }

    std::vector<std::pair<TermId, TermId>> meta;
    std::uint64_t fromYear = uniformInt(temporalRng, 1980, arity->second == 2 ? 2014 : 2015);
    meta.emplace_back(spIds.from, out.sp.intern(Term::literal(std::to_string(fromYear))));
    if (arity->second == 2) {
      std::uint64_t toYear = uniformInt(temporalRng, fromYear + 1, 2015);
      meta.emplace_back(spIds.to, out.sp.intern(Term::literal(std::to_string(toYear))));
    }
    reify(out.sp, copy, meta, minter);
    if (config.emitDataTriples) out.sp.insert(copy);
    ++out.report.relationCounts[p.lexical];
    ++out.report.spCount;
  }

  out.report.plainTripleCount = out.plain.tripleCount();
  out.report.spTripleCount = out.sp.tripleCount() - out.report.vocabularyTripleCount;
  out.report.ratio =
      static_cast<double>(out.report.spTripleCount) / static_cast<double>(out.report.plainTripleCount);
  return out;
}

GenReport generate(const GenConfig& config) {
  GeneratedPair pair = generatePair(config);
  if (!config.outDir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.outDir, ec);
    if (ec) throw StoreError(ErrorCode::IoError, "cannot create " + config.outDir + ": " + ec.message());

    fs::path dir(config.outDir);
    writeNTriplesFile((dir / "plain.nt").string(), pair.plain);
    writeNTriplesFile((dir / "sp.nt").string(), pair.sp);

    std::ofstream report(dir / "gen-report.json", std::ios::binary);
    if (!report) throw StoreError(ErrorCode::IoError, "cannot write gen-report.json");
    report << reportToJson(config, pair.report);

    if (config.emitQueries) {
      fs::create_directories(dir / "queries", ec);
      if (ec) throw StoreError(ErrorCode::IoError, "cannot create queries dir: " + ec.message());
      for (const auto& [name, text] : shippedQueries()) {
        std::ofstream q(dir / "queries" / name, std::ios::binary);
        if (!q) throw StoreError(ErrorCode::IoError, "cannot write query " + name);
        q << text;
      }
    }
  }
  return pair.report;
}

std::string reportToJson(const GenConfig& config, const GenReport& report) {
  nlohmann::ordered_json doc;
  doc["universities"] = config.universities;
  doc["seed"] = config.seed;
  doc["emit_data_triples"] = config.emitDataTriples;
  nlohmann::ordered_json rels = nlohmann::ordered_json::array();
  for (const SpRelation& rel : config.spRelations) {
    rels.push_back({{"iri", rel.iri}, {"temporal_arity", rel.temporalArity}});
  }
  doc["sp_relations"] = std::move(rels);
  doc["plain_triple_count"] = report.plainTripleCount;
  doc["sp_triple_count"] = report.spTripleCount;
  doc["vocabulary_triple_count"] = report.vocabularyTripleCount;
  doc["sp_count"] = report.spCount;
  doc["ratio"] = report.ratio;
  doc["relation_counts"] = report.relationCounts;
  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> shippedQueries() {
  const std::string header = "PREFIX ub: <" + std::string(kUnivBenchNs) +
                             ">\n"
                             "PREFIX rdf: <" +
                             std::string(vocab::kRdfNs) + ">\n";
  auto q = [&](const char* body) { return header + body; };
  return {
      {"q01.rq", q("SELECT ?x WHERE { ?x rdf:type ub:FullProfessor . }\n")},
      {"q02.rq", q("SELECT ?s ?p WHERE { ?s rdf:type ub:GraduateStudent . ?s ub:hasAdvisor ?p . }\n")},
      {"q03.rq", q("SELECT DISTINCT ?x ?o WHERE { ?x ub:memberOf ?o . }\n")},
      {"q04.rq",
       q("SELECT ?s ?c WHERE { ?s ub:hasAdvisor ?p . ?p ub:teacherOf ?c . ?s ub:takesCourse ?c . }\n")},
      {"q05.rq",
       q("SELECT ?p ?u ?d WHERE { ?p ub:worksFor ?u . ?p ub:headOf ?d . ?d ub:subOrganizationOf ?u . }\n")},
      {"q06.rq", q("SELECT ?x WHERE { ?x rdf:type ub:Student . }\n")},
      {"q07.rq", q("SELECT ?pub ?a WHERE { ?pub rdf:type ub:Publication . ?pub ub:publicationAuthor ?a . }\n")},
      {"q08.rq", q("SELECT ?x ?u WHERE { ?x ub:undergraduateDegreeFrom ?u . ?x ub:worksFor ?u . }\n")},
      {"q09.rq", q("SELECT ?g ?c ?d WHERE { ?g ub:teachingAssistantOf ?c . ?c ub:coursesOfferedBy ?d . }\n")},
      {"q10.rq", q("SELECT ?x WHERE { ?x rdf:type ub:VisitingProfessor . }\n")},
      {"q11.rq", q("SELECT ?x ?c WHERE { ?x ub:takesCourse ?c . ?c rdf:type ub:ResearchGroup . }\n")},
      {"q12.rq", q("SELECT ?u ?y WHERE { ?u ub:hasAlumnus ?y . ?y rdf:type ub:UndergraduateStudent . }\n")},
      {"q13.rq", q("SELECT ?x WHERE { ?x ub:collaboratesWith ?x . }\n")},
      {"q14.rq",
       q("SELECT ?p ?u ?d ?g ?c WHERE { ?d ub:subOrganizationOf ?u . ?p ub:worksFor ?u . ?p ub:headOf ?d . "
         "?g ub:hasAdvisor ?p . ?g ub:takesCourse ?c . ?p ub:teacherOf ?c . }\n")},
      {"m01.rq", q("SELECT ?s ?p ?y WHERE { ?s rdf:type ub:GraduateStudent . ?s ?sp ?p . "
                   "?sp rdf:singletonPropertyOf ub:hasAdvisor . ?sp ub:from ?y . }\n")},
      {"m02.rq", q("SELECT ?p ?u ?f ?t WHERE { ?p ?sp ?u . ?sp rdf:singletonPropertyOf ub:worksFor . "
                   "?sp ub:from ?f . ?sp ub:to ?t . }\n")},
      {"m03.rq", q("SELECT ?g ?c ?d ?y WHERE { ?g ?sp ?c . ?sp rdf:singletonPropertyOf ub:teachingAssistantOf . "
                   "?sp ub:to ?y . ?c ub:coursesOfferedBy ?d . }\n")},
  };
}

GenReport auditPair(const TripleStore& plain, const TripleStore& sp) {
  GenReport report;
  report.plainTripleCount = plain.tripleCount();

  SpVocabulary vocabulary;
  auto countGround = [&](const SpVocabulary::GroundTriple& g) {
    auto s = sp.lookup(Term::iri(g[0]));
    auto p = sp.lookup(Term::iri(g[1]));
    auto o = sp.lookup(Term::iri(g[2]));
    if (s && p && o && sp.contains({*s, *p, *o})) ++report.vocabularyTripleCount;
  };
  for (const auto& g : vocabulary.primitiveTriples()) countGround(g);
  countGround(vocabulary.metaAxiom());

  SingletonEnumeration enumeration = enumerateSingletons(sp);
  report.spCount = enumeration.descriptors.size();
  for (const SingletonDescriptor& d : enumeration.descriptors) {
    ++report.relationCounts[sp.term(d.generic).lexical];
  }

  report.spTripleCount = sp.tripleCount() - report.vocabularyTripleCount;
  report.ratio = static_cast<double>(report.spTripleCount) / static_cast<double>(report.plainTripleCount);
  return report;
}

}  // namespace spstore
