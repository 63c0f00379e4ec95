#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "taskbench/catalog.hpp"

namespace taskbench {

// Frequency-thresholded word list for one language. The threshold is applied
// at load time; everything downstream sees only the surviving words.
class Vocabulary {
 public:
  void load(const std::string& path, std::uint64_t min_count);
  void add_word(std::string word);  // for in-memory construction
  bool contains(const std::string& word) const;
  const std::vector<std::string>& words() const { return words_; }  // sorted unique
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint64_t> counts_;
};

// Relation and predicate tables keyed by the canonical atomic print
// ("synonyms[eng]", "is-POS-noun[eng]", "translate[eng->spa]").
struct LexicalStore {
  using RelTable = std::unordered_map<std::string, std::vector<std::string>>;
  std::map<std::string, RelTable> relations;
  std::map<std::string, RelTable> relations_rev;
  std::map<std::string, std::unordered_map<std::string, bool>> predicates;

  // Missing key lookups return an empty set / false, never an error.
  const std::vector<std::string>& image(const std::string& table, const std::string& word,
                                        bool reverse) const;
  bool predicate(const std::string& table, const std::string& word) const;
};

struct Triple {
  std::string subject, property, object;
};

class TripleStore {
 public:
  void load(const std::string& triples_path, const std::string& labels_path);
  void add(Triple t);
  void add_label(std::string id, std::string label);
  void build_index();

  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<std::string>& objects(const std::string& s, const std::string& p) const;
  const std::vector<std::string>& subjects(const std::string& p, const std::string& o) const;
  bool has(const std::string& s, const std::string& p, const std::string& o) const;

  std::string label(const std::string& id) const;  // falls back to the id itself
  // Entities carrying this label. A string that is itself a known entity id
  // with no label of its own resolves to that entity, so label-less stores
  // keep working.
  std::vector<std::string> ids_for_label(const std::string& label) const;
  // Entities appearing in any triple, sorted. The candidate universe for
  // unconstrained query variables.
  const std::vector<std::string>& all_entities() const { return entities_; }
  // Labels shared by more than one entity; reported, never resolved.
  std::vector<std::pair<std::string, std::vector<std::string>>> label_collisions() const;

 private:
  std::vector<Triple> triples_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> sp_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> po_;
  std::unordered_map<std::string, std::string> label_;
  std::map<std::string, std::vector<std::string>> by_label_;
  std::vector<std::string> entities_;
};

// Aggregate of every backend plus the atomic catalog. Immutable once loaded;
// concurrent readers need no locking.
class KnowledgeStore {
 public:
  // Load from a JSON config file; relative paths resolve against the config
  // file's directory. See README for the schema.
  static KnowledgeStore load(const std::string& config_path);
  static KnowledgeStore from_json_text(const std::string& json_text,
                                       const std::string& base_dir);

  const Catalog& catalog() const { return catalog_; }
  Catalog& catalog() { return catalog_; }
  const Vocabulary* vocab(const std::string& lang) const;
  const LexicalStore& lexical() const { return lexical_; }
  LexicalStore& lexical() { return lexical_; }
  const TripleStore* triples() const { return triples_ ? &*triples_ : nullptr; }
  TripleStore& mutable_triples();

  const std::string& endpoint() const { return endpoint_; }
  const std::string& cache_dir() const { return cache_dir_; }
  std::uint64_t product_cap() const { return product_cap_; }

  // Paths and digests of every file that went into this store, for run
  // manifests.
  const std::vector<std::pair<std::string, std::string>>& input_digests() const {
    return input_digests_;
  }

  void set_catalog(Catalog c) { catalog_ = std::move(c); }
  void add_vocab(const std::string& lang, Vocabulary v);

 private:
  Catalog catalog_ = Catalog::minimal();
  std::map<std::string, Vocabulary> vocabs_;
  LexicalStore lexical_;
  std::optional<TripleStore> triples_;
  std::string endpoint_;
  std::string cache_dir_;
  std::uint64_t product_cap_ = 10000;
  std::vector<std::pair<std::string, std::string>> input_digests_;
};

}  // namespace taskbench
