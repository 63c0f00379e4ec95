#include "taskbench/catalog.hpp"

#include <fstream>

#include "taskbench/errors.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

void Catalog::add(AtomicEntry entry) {
  if (entry.printed_name.empty()) entry.printed_name = entry.name;
  by_name_[entry.name] = entries_.size();
  if (entry.printed_name != entry.name) by_printed_[entry.printed_name] = entries_.size();
  entries_.push_back(std::move(entry));
}

const AtomicEntry* Catalog::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &entries_[it->second];
}

const AtomicEntry* Catalog::find_printed(const std::string& printed) const {
  auto it = by_printed_.find(printed);
  if (it != by_printed_.end()) return &entries_[it->second];
  return find(printed);
}

std::string Catalog::input_domain(const AtomicEntry& e, const std::string& lang_tag) {
  if (e.internal) return "*";
  if (e.backend == Backend::Factual) return "entity";
  auto arrow = lang_tag.find("->");
  if (arrow != std::string::npos) return lang_tag.substr(0, arrow);
  return lang_tag;
}

std::string Catalog::output_domain(const AtomicEntry& e, const std::string& lang_tag) {
  if (e.kind == TaskKind::Predicate) return "";
  if (e.internal) return "*";
  if (e.backend == Backend::Factual) return "entity";
  auto arrow = lang_tag.find("->");
  if (arrow != std::string::npos) return lang_tag.substr(arrow + 2);
  return lang_tag;
}

namespace {

AtomicEntry lexical_relation(std::string name, std::vector<std::string> tags) {
  AtomicEntry e;
  e.name = std::move(name);
  e.kind = TaskKind::Relation;
  e.backend = Backend::Lexical;
  e.lang_tags = std::move(tags);
  return e;
}

AtomicEntry lexical_predicate(std::string name) {
  AtomicEntry e;
  e.name = std::move(name);
  e.kind = TaskKind::Predicate;
  e.backend = Backend::Lexical;
  e.lang_tags = {"eng"};
  return e;
}

AtomicEntry factual_relation(std::string name, std::string printed, bool invertible = false) {
  AtomicEntry e;
  e.name = std::move(name);
  e.printed_name = std::move(printed);
  e.kind = TaskKind::Relation;
  e.backend = Backend::Factual;
  e.property = e.name;
  e.invertible = invertible;
  return e;
}

AtomicEntry factual_predicate(std::string name, std::string property, std::string value) {
  AtomicEntry e;
  e.name = std::move(name);
  e.kind = TaskKind::Predicate;
  e.backend = Backend::Factual;
  e.property = std::move(property);
  e.value = std::move(value);
  return e;
}

AtomicEntry random_relation(std::string name, std::uint64_t seed) {
  AtomicEntry e;
  e.name = std::move(name);
  e.kind = TaskKind::Relation;
  e.backend = Backend::Random;
  e.lang_tags = {"eng"};
  e.seed = seed;
  return e;
}

void add_internal(Catalog& c) {
  AtomicEntry id;
  id.name = "identity";
  id.kind = TaskKind::Relation;
  id.backend = Backend::Internal;
  id.internal = true;
  c.add(std::move(id));

  AtomicEntry tru;
  tru.name = "const-true";
  tru.kind = TaskKind::Predicate;
  tru.backend = Backend::Internal;
  tru.internal = true;
  c.add(std::move(tru));
}

}  // namespace

Catalog Catalog::minimal() {
  Catalog c;
  add_internal(c);
  return c;
}

Catalog Catalog::builtin() {
  Catalog c;
  add_internal(c);

  // lexical predicates (English only)
  for (const char* n : {"is-POS-noun", "is-POS-verb", "is-POS-adjective", "is-POS-adverb",
                        "is-sentiment-positive", "is-sentiment-negative",
                        "is-sentiment-neutral"})
    c.add(lexical_predicate(n));

  // lexical relations
  for (const char* n : {"synonyms", "antonyms", "hyponyms", "entailments"})
    c.add(lexical_relation(n, {"eng", "spa"}));
  c.add(lexical_relation("translate", {"eng->spa", "spa->eng"}));

  // factual predicates: instance-of / occupation / place-of-birth tests
  for (const char* v : {"human", "film", "book", "city", "taxon"})
    c.add(factual_predicate(std::string("is-instance-") + v, "instance-of", v));
  for (const char* v : {"actor", "politician", "writer", "journalist", "teacher", "composer"})
    c.add(factual_predicate(std::string("is-occupation-") + v, "occupation", v));
  c.add(factual_predicate("is-birthplace-london", "place-of-birth", "london"));
  c.add(factual_predicate("is-birthplace-nyc", "place-of-birth", "new-york-city"));
  c.add(factual_predicate("is-birthplace-la", "place-of-birth", "los-angeles"));
  c.add(factual_predicate("is-birthplace-buenosaires", "place-of-birth", "buenos-aires"));

  // factual relations; the marked ones also exist in inverted form
  c.add(factual_relation("child", "child", true));
  c.add(factual_relation("continent", "continent"));
  c.add(factual_relation("country", "country"));
  c.add(factual_relation("country-of-citizenship", "country of citizenship"));
  c.add(factual_relation("country-of-origin", "country of origin"));
  c.add(factual_relation("creator", "creator", true));
  c.add(factual_relation("developer", "developer"));
  c.add(factual_relation("diplomatic-relation", "diplomatic relation"));
  c.add(factual_relation("father", "father", true));
  c.add(factual_relation("genre", "genre"));
  c.add(factual_relation("has-part", "has part"));
  c.add(factual_relation("head-of-state", "head of state", true));
  c.add(factual_relation("influenced-by", "influenced by"));
  c.add(factual_relation("languages-spoken-written-or-signed",
                         "languages spoken written or signed"));
  c.add(factual_relation("location", "location", true));
  c.add(factual_relation("manufacturer", "manufacturer"));
  c.add(factual_relation("member-of-political-party", "member of political party"));
  c.add(factual_relation("member-of-sports-team", "member of sports team"));
  c.add(factual_relation("mother", "mother", true));
  c.add(factual_relation("named-after", "named after"));
  c.add(factual_relation("native-language", "native language"));
  c.add(factual_relation("occupation", "occupation"));
  c.add(factual_relation("official-language", "official language"));
  c.add(factual_relation("original-language-of-film-or-tv-show",
                         "original language of film or TV show"));
  c.add(factual_relation("owned-by", "owned by"));
  c.add(factual_relation("performer", "performer"));
  c.add(factual_relation("place-of-birth", "place of birth"));
  c.add(factual_relation("place-of-death", "place of death"));
  c.add(factual_relation("position-held", "position held"));
  c.add(factual_relation("position-played-on-team", "position played on team"));
  c.add(factual_relation("record-label", "record label"));
  c.add(factual_relation("sex-or-gender", "sex or gender"));

  for (std::uint64_t i = 0; i < 4; ++i)
    c.add(random_relation("random-seed" + std::to_string(i), i));

  return c;
}

void Catalog::load_extra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open catalog file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() < 4)
      throw DataError("catalog: line " + std::to_string(lineno) + ": need at least 4 columns");
    AtomicEntry e;
    e.name = cols[0];
    e.printed_name = cols[1].empty() ? cols[0] : cols[1];
    if (cols[2] == "relation")
      e.kind = TaskKind::Relation;
    else if (cols[2] == "predicate")
      e.kind = TaskKind::Predicate;
    else
      throw DataError("catalog: line " + std::to_string(lineno) + ": bad kind '" + cols[2] + "'");
    if (cols[3] == "lexical")
      e.backend = Backend::Lexical;
    else if (cols[3] == "factual")
      e.backend = Backend::Factual;
    else if (cols[3] == "random")
      e.backend = Backend::Random;
    else
      throw DataError("catalog: line " + std::to_string(lineno) + ": bad backend '" + cols[3] +
                      "'");
    if (cols.size() > 4 && !cols[4].empty()) e.lang_tags = split_char(cols[4], ';');
    if (cols.size() > 5) e.property = cols[5];
    if (e.backend == Backend::Factual && e.property.empty()) e.property = e.name;
    if (cols.size() > 6) e.value = cols[6];
    if (cols.size() > 7 && !cols[7].empty()) e.seed = std::stoull(cols[7]);
    if (cols.size() > 8) e.invertible = cols[8] == "1" || cols[8] == "true";
    add(std::move(e));
  }
}

}  // namespace taskbench
