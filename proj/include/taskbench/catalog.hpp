#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace taskbench {

enum class TaskKind { Relation, Predicate };
enum class Backend { Lexical, Factual, Random, Internal };

// One registered atomic task. `name` is the DSL identifier without tags
// (hyphenated, e.g. "head-of-state"); `printed_name` is the human form that
// may contain spaces ("head of state") and doubles as a quoted alias in DSL
// source. Language variants of the same base name share one entry listing
// the allowed tags.
struct AtomicEntry {
  std::string name;
  std::string printed_name;
  TaskKind kind = TaskKind::Relation;
  Backend backend = Backend::Lexical;
  // Allowed language tags, e.g. {"eng","spa"} or {"eng->spa"}. Empty for
  // factual tasks, which carry no tag.
  std::vector<std::string> lang_tags;
  // Input/output domains keyed by tag ("" for untagged): "eng", "spa" or
  // "entity". Predicates have no output domain.
  // Factual: the triple property this task reads.
  std::string property;
  // Factual predicates only: the object value that makes the predicate true.
  std::string value;
  // Random relations only.
  std::uint64_t seed = 0;
  // May the [inv] tag be applied?
  bool invertible = false;
  // Internal atomics (identity, const-true) exist for normalization and are
  // excluded from enumeration.
  bool internal = false;
};

class Catalog {
 public:
  void add(AtomicEntry entry);
  const AtomicEntry* find(const std::string& name) const;
  // Resolve a quoted printed name ("head of state") to its DSL entry.
  const AtomicEntry* find_printed(const std::string& printed) const;
  const std::vector<AtomicEntry>& entries() const { return entries_; }

  // Input domain of an atomic under a given tag: language for lexical and
  // random tasks, "entity" for factual ones.
  static std::string input_domain(const AtomicEntry& e, const std::string& lang_tag);
  static std::string output_domain(const AtomicEntry& e, const std::string& lang_tag);

  // Full atomic task registry of the benchmark: lexical relations and
  // predicates for English and Spanish, factual relations and predicates,
  // and four seeded random relations. Includes the internal identity and
  // const-true atomics.
  static Catalog builtin();
  // Only identity/const-true; callers register their own atomics. Useful
  // for toy stores in tests.
  static Catalog minimal();

  // Extend from a TSV file: columns
  //   name<TAB>printed<TAB>kind<TAB>backend<TAB>langs<TAB>property<TAB>value<TAB>seed<TAB>invertible
  // Empty fields allowed. Throws DataError on malformed rows.
  void load_extra(const std::string& path);

 private:
  std::vector<AtomicEntry> entries_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::string, std::size_t> by_printed_;
};

}  // namespace taskbench
