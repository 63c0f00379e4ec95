#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

// File layout: one header object, then one example per line. Field order is
// fixed via ordered_json so identical datasets serialize to identical bytes.

namespace {

using ojson = nlohmann::ordered_json;

ojson config_to_json(const GenConfig& cfg) {
  ojson j;
  j["seed"] = cfg.seed;
  j["train_size"] = cfg.train_size;
  j["eval_size"] = cfg.eval_size;
  j["min_samples"] = cfg.min_samples;
  j["seq_len"] = cfg.seq_len;
  if (cfg.seq_keep)
    j["seq_keep"] = *cfg.seq_keep;
  else
    j["seq_keep"] = nullptr;
  j["product_cap"] = cfg.product_cap;
  return j;
}

GenConfig config_from_json(const nlohmann::json& j) {
  GenConfig cfg;
  cfg.seed = j.value("seed", 0);
  cfg.train_size = j.value("train_size", std::size_t{1000});
  cfg.eval_size = j.value("eval_size", std::size_t{500});
  cfg.min_samples = j.value("min_samples", std::size_t{100});
  cfg.seq_len = j.value("seq_len", std::size_t{8});
  if (j.contains("seq_keep") && !j["seq_keep"].is_null())
    cfg.seq_keep = j["seq_keep"].get<std::size_t>();
  cfg.product_cap = j.value("product_cap", std::uint64_t{10000});
  return cfg;
}

}  // namespace

void export_dataset(const Dataset& ds, const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset: " + path);

  ojson header;
  header["type"] = "taskbench-dataset";
  header["version"] = 1;
  header["task"] = ds.task;
  header["config"] = config_to_json(ds.config);
  if (ds.separator)
    header["separator"] = *ds.separator;
  else
    header["separator"] = nullptr;
  out << header.dump() << "\n";

  for (const Example& ex : ds.examples) {
    ojson rec;
    rec["id"] = ex.id;
    rec["split"] = ex.split == Split::Train ? "train" : "eval";
    rec["input"] = render_input(ds, ex);
    ojson spans = ojson::array();
    for (auto [b, e] : word_spans(ex.input_words)) spans.push_back(ojson::array({b, e}));
    rec["spans"] = spans;
    rec["answers"] = ex.answer_alts;
    rec["label"] = ex.label;
    rec["source"] = ex.label_source;
    out << rec.dump() << "\n";
  }
}

namespace {

std::vector<std::string> words_from_input(const std::string& input,
                                          const std::optional<std::string>& sep,
                                          const nlohmann::json& spans, std::size_t lineno) {
  std::vector<std::string> atoms = split_ws(input);
  if (sep) std::erase(atoms, *sep);
  std::vector<std::string> words;
  for (const auto& span : spans) {
    if (!span.is_array() || span.size() != 2)
      throw DataError("dataset line " + std::to_string(lineno) + ": malformed span");
    std::size_t b = span[0].get<std::size_t>();
    std::size_t e = span[1].get<std::size_t>();
    if (b > e || e > atoms.size())
      throw DataError("dataset line " + std::to_string(lineno) + ": span out of range");
    std::vector<std::string> group(atoms.begin() + b, atoms.begin() + e);
    words.push_back(join(group, " "));
  }
  return words;
}

}  // namespace

Dataset import_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::string line;
  std::size_t lineno = 0;

  Dataset ds;
  if (!std::getline(in, line)) throw DataError("dataset is empty: " + path);
  ++lineno;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw DataError("dataset line 1: " + std::string(e.what()));
  }
  if (header.value("type", "") != "taskbench-dataset")
    throw DataError("dataset line 1: not a taskbench dataset header");
  ds.task = header.value("task", "");
  if (header.contains("config")) ds.config = config_from_json(header["config"]);
  if (header.contains("separator") && !header["separator"].is_null())
    ds.separator = header["separator"].get<std::string>();

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw DataError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      Example ex;
      ex.id = rec.at("id").get<std::uint64_t>();
      std::string split = rec.at("split").get<std::string>();
      if (split != "train" && split != "eval")
        throw DataError("bad split '" + split + "'");
      ex.split = split == "train" ? Split::Train : Split::Eval;
      ex.input_words = words_from_input(rec.at("input").get<std::string>(), ds.separator,
                                        rec.at("spans"), lineno);
      ex.answer_alts = rec.at("answers").get<std::vector<std::vector<std::string>>>();
      ex.label = rec.at("label").get<std::vector<std::string>>();
      ex.label_source = rec.value("source", "");
      ds.examples.push_back(std::move(ex));
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ds;
}

}  // namespace taskbench
