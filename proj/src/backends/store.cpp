#include "taskbench/store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/util/sha256.hpp"
#include "taskbench/util/tsv.hpp"

namespace taskbench {

namespace {

const std::vector<std::string> kEmpty;

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// "synonyms[eng]" -> eng/eng, "translate[eng->spa]" -> eng/spa, no tag -> ""/""
std::pair<std::string, std::string> table_langs(const std::string& table_key) {
  auto open = table_key.find('[');
  if (open == std::string::npos) return {"", ""};
  auto close = table_key.find(']', open);
  std::string tag = table_key.substr(open + 1, close - open - 1);
  auto arrow = tag.find("->");
  if (arrow != std::string::npos) return {tag.substr(0, arrow), tag.substr(arrow + 2)};
  return {tag, tag};
}

}  // namespace

void Vocabulary::load(const std::string& path, std::uint64_t min_count) {
  for_each_tsv_row(path, [&](std::size_t lineno, const std::vector<std::string>& cols) {
    if (cols.empty() || cols[0].empty())
      throw DataError(path + ":" + std::to_string(lineno) + ": empty word");
    std::uint64_t count = 1;
    if (cols.size() > 1 && !cols[1].empty()) {
      try {
        count = std::stoull(cols[1]);
      } catch (...) {
        throw DataError(path + ":" + std::to_string(lineno) + ": bad count '" + cols[1] + "'");
      }
    }
    if (count >= min_count) {
      counts_[cols[0]] = count;
      words_.push_back(cols[0]);
    }
  });
  sort_unique(words_);
}

void Vocabulary::add_word(std::string word) {
  if (counts_.emplace(word, 1).second) {
    words_.push_back(std::move(word));
    std::sort(words_.begin(), words_.end());
  }
}

bool Vocabulary::contains(const std::string& word) const { return counts_.count(word) > 0; }

const std::vector<std::string>& LexicalStore::image(const std::string& table,
                                                    const std::string& word,
                                                    bool reverse) const {
  const auto& tables = reverse ? relations_rev : relations;
  auto t = tables.find(table);
  if (t == tables.end()) return kEmpty;
  auto w = t->second.find(word);
  return w == t->second.end() ? kEmpty : w->second;
}

bool LexicalStore::predicate(const std::string& table, const std::string& word) const {
  auto t = predicates.find(table);
  if (t == predicates.end()) return false;
  auto w = t->second.find(word);
  return w == t->second.end() ? false : w->second;
}

void TripleStore::load(const std::string& triples_path, const std::string& labels_path) {
  for_each_tsv_row(triples_path, [&](std::size_t lineno, const std::vector<std::string>& cols) {
    if (cols.size() != 3)
      throw DataError(triples_path + ":" + std::to_string(lineno) + ": expected 3 columns");
    triples_.push_back({cols[0], cols[1], cols[2]});
  });
  if (!labels_path.empty()) {
    for_each_tsv_row(labels_path, [&](std::size_t lineno, const std::vector<std::string>& cols) {
      if (cols.size() != 2)
        throw DataError(labels_path + ":" + std::to_string(lineno) + ": expected 2 columns");
      add_label(cols[0], cols[1]);
    });
  }
  build_index();
}

void TripleStore::add(Triple t) { triples_.push_back(std::move(t)); }

void TripleStore::add_label(std::string id, std::string label) {
  by_label_[label].push_back(id);
  label_.emplace(std::move(id), std::move(label));
}

void TripleStore::build_index() {
  sp_.clear();
  po_.clear();
  entities_.clear();
  for (const Triple& t : triples_) {
    sp_[{t.subject, t.property}].push_back(t.object);
    po_[{t.property, t.object}].push_back(t.subject);
    entities_.push_back(t.subject);
    entities_.push_back(t.object);
  }
  for (auto& kv : sp_) sort_unique(kv.second);
  for (auto& kv : po_) sort_unique(kv.second);
  for (auto& kv : by_label_) sort_unique(kv.second);
  sort_unique(entities_);
}

const std::vector<std::string>& TripleStore::objects(const std::string& s,
                                                     const std::string& p) const {
  auto it = sp_.find({s, p});
  return it == sp_.end() ? kEmpty : it->second;
}

const std::vector<std::string>& TripleStore::subjects(const std::string& p,
                                                      const std::string& o) const {
  auto it = po_.find({p, o});
  return it == po_.end() ? kEmpty : it->second;
}

bool TripleStore::has(const std::string& s, const std::string& p, const std::string& o) const {
  const auto& objs = objects(s, p);
  return std::binary_search(objs.begin(), objs.end(), o);
}

std::string TripleStore::label(const std::string& id) const {
  auto it = label_.find(id);
  return it == label_.end() ? id : it->second;
}

std::vector<std::string> TripleStore::ids_for_label(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it != by_label_.end()) return it->second;
  if (std::binary_search(entities_.begin(), entities_.end(), label) && !label_.count(label))
    return {label};
  return {};
}

std::vector<std::pair<std::string, std::vector<std::string>>> TripleStore::label_collisions()
    const {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& kv : by_label_)
    if (kv.second.size() > 1) out.push_back(kv);
  return out;
}

const Vocabulary* KnowledgeStore::vocab(const std::string& lang) const {
  auto it = vocabs_.find(lang);
  return it == vocabs_.end() ? nullptr : &it->second;
}

TripleStore& KnowledgeStore::mutable_triples() {
  if (!triples_) triples_.emplace();
  return *triples_;
}

void KnowledgeStore::add_vocab(const std::string& lang, Vocabulary v) {
  vocabs_[lang] = std::move(v);
}

namespace {

// Ingest relation rows, dropping any whose words fall outside the
// thresholded vocabularies for the table's languages.
void ingest_relations(KnowledgeStore& store, LexicalStore& lex, const std::string& path) {
  for_each_tsv_row(path, [&](std::size_t lineno, const std::vector<std::string>& cols) {
    if (cols.size() != 3)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 3 columns");
    const std::string& table = cols[0];
    auto [src_lang, dst_lang] = table_langs(table);
    const Vocabulary* src = store.vocab(src_lang);
    const Vocabulary* dst = store.vocab(dst_lang);
    if (!src || !dst)
      throw DataError(path + ":" + std::to_string(lineno) + ": no vocabulary loaded for '" +
                      table + "'");
    if (!src->contains(cols[1]) || !dst->contains(cols[2])) return;
    lex.relations[table][cols[1]].push_back(cols[2]);
    lex.relations_rev[table][cols[2]].push_back(cols[1]);
  });
}

void ingest_predicates(KnowledgeStore& store, LexicalStore& lex, const std::string& path) {
  for_each_tsv_row(path, [&](std::size_t lineno, const std::vector<std::string>& cols) {
    if (cols.size() != 3)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 3 columns");
    auto [lang, _] = table_langs(cols[0]);
    const Vocabulary* v = store.vocab(lang);
    if (!v)
      throw DataError(path + ":" + std::to_string(lineno) + ": no vocabulary loaded for '" +
                      cols[0] + "'");
    if (!v->contains(cols[1])) return;
    lex.predicates[cols[0]][cols[1]] = cols[2] == "1" || cols[2] == "true";
  });
}

void finalize_lexical(LexicalStore& lex) {
  for (auto& table : lex.relations)
    for (auto& kv : table.second) sort_unique(kv.second);
  for (auto& table : lex.relations_rev)
    for (auto& kv : table.second) sort_unique(kv.second);
}

}  // namespace

KnowledgeStore KnowledgeStore::load(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open store config: " + config_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text, std::filesystem::path(config_path).parent_path().string());
}

KnowledgeStore KnowledgeStore::from_json_text(const std::string& json_text,
                                              const std::string& base_dir) {
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw DataError(std::string("store config: ") + e.what());
  }

  KnowledgeStore store;
  auto resolve = [&](const std::string& p) -> std::string {
    std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).string();
  };
  auto track = [&](const std::string& path) {
    store.input_digests_.emplace_back(path, sha256_file_hex(path));
  };

  std::string catalog_kind = cfg.value("catalog", "builtin");
  if (catalog_kind == "builtin")
    store.catalog_ = Catalog::builtin();
  else if (catalog_kind == "minimal")
    store.catalog_ = Catalog::minimal();
  else {
    store.catalog_ = Catalog::minimal();
    std::string p = resolve(catalog_kind);
    store.catalog_.load_extra(p);
    track(p);
  }
  if (cfg.contains("catalog_extra")) {
    std::string p = resolve(cfg["catalog_extra"].get<std::string>());
    store.catalog_.load_extra(p);
    track(p);
  }

  if (cfg.contains("vocab")) {
    for (auto& [lang, spec] : cfg["vocab"].items()) {
      std::string p = resolve(spec.at("path").get<std::string>());
      // default thresholds: English keeps words seen more than 5 times,
      // other languages anything seen at least once
      std::uint64_t min_count = spec.value("min_count", lang == "eng" ? 6 : 1);
      Vocabulary v;
      v.load(p, min_count);
      track(p);
      store.vocabs_[lang] = std::move(v);
    }
  }
  for (const auto& key : {"lexical_relations", "lexical_predicates"}) {
    if (!cfg.contains(key)) continue;
    for (const auto& item : cfg[key]) {
      std::string p = resolve(item.get<std::string>());
      if (std::string(key) == "lexical_relations")
        ingest_relations(store, store.lexical_, p);
      else
        ingest_predicates(store, store.lexical_, p);
      track(p);
    }
  }
  finalize_lexical(store.lexical_);

  if (cfg.contains("triples")) {
    std::string tp = resolve(cfg["triples"].get<std::string>());
    std::string lp = cfg.contains("labels") ? resolve(cfg["labels"].get<std::string>()) : "";
    store.triples_.emplace();
    store.triples_->load(tp, lp);
    track(tp);
    if (!lp.empty()) track(lp);
  }

  store.endpoint_ = cfg.value("endpoint", "");
  store.cache_dir_ = cfg.contains("cache_dir") ? resolve(cfg["cache_dir"].get<std::string>()) : "";
  store.product_cap_ = cfg.value("product_cap", 10000);
  return store;
}

}  // namespace taskbench
