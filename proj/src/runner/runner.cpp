#include "taskbench/runner.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/sha256.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

namespace {

using ojson = nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write: " + path);
  out << content;
}

ojson store_inputs_json(const KnowledgeStore& store) {
  ojson inputs = ojson::array();
  for (const auto& [path, digest] : store.input_digests()) {
    ojson item;
    item["path"] = path;
    item["digest"] = digest;
    inputs.push_back(item);
  }
  return inputs;
}

void write_manifest(const std::string& out_dir, ojson manifest) {
  write_file((std::filesystem::path(out_dir) / "manifest.json").string(),
             manifest.dump(2) + "\n");
}

// Output files are listed relative to out_dir so reruns into different
// directories stay byte-identical.
ojson output_entry(const std::string& out_dir, const std::string& rel_path) {
  ojson item;
  item["path"] = rel_path;
  item["digest"] = sha256_file_hex((std::filesystem::path(out_dir) / rel_path).string());
  return item;
}

ojson input_entry(const std::string& path) {
  ojson item;
  item["path"] = path;
  item["digest"] = sha256_file_hex(path);
  return item;
}

nlohmann::json parse_options(const std::string& options_json) {
  try {
    return options_json.empty() ? nlohmann::json::object()
                                : nlohmann::json::parse(options_json);
  } catch (const std::exception& e) {
    throw DataError(std::string("bad options: ") + e.what());
  }
}

GenConfig config_from_options(const nlohmann::json& opts) {
  GenConfig cfg;
  if (!opts.contains("config")) return cfg;
  const auto& j = opts["config"];
  cfg.seed = j.value("seed", cfg.seed);
  cfg.train_size = j.value("train_size", cfg.train_size);
  cfg.eval_size = j.value("eval_size", cfg.eval_size);
  cfg.min_samples = j.value("min_samples", cfg.min_samples);
  cfg.seq_len = j.value("seq_len", cfg.seq_len);
  if (j.contains("seq_keep") && !j["seq_keep"].is_null())
    cfg.seq_keep = j["seq_keep"].get<std::size_t>();
  cfg.product_cap = j.value("product_cap", cfg.product_cap);
  return cfg;
}

ojson config_json(const GenConfig& cfg) {
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

std::string task_slug(const std::string& task) {
  std::string slug;
  for (char c : task) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (!slug.empty() && slug.back() != '-')
      slug.push_back('-');
  }
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  if (slug.size() > 48) slug.resize(48);
  return slug + "-" + sha256_hex(task).substr(0, 8);
}

}  // namespace

void run_enumerate(const KnowledgeStore& store, const std::string& options_json,
                   const std::string& out_dir) {
  nlohmann::json opts = parse_options(options_json);
  std::size_t limit = opts.value("limit", std::size_t{500});

  std::vector<ExprPtr> tasks = enumerate_depth2(store.catalog(), limit);
  std::string text;
  for (const ExprPtr& t : tasks) text += print_expr(t) + "\n";
  write_file((std::filesystem::path(out_dir) / "tasks.txt").string(), text);

  ojson manifest;
  manifest["command"] = "enumerate";
  manifest["limit"] = limit;
  manifest["task_count"] = tasks.size();
  manifest["store_inputs"] = store_inputs_json(store);
  manifest["outputs"] = ojson::array({output_entry(out_dir, "tasks.txt")});
  write_manifest(out_dir, std::move(manifest));
}

namespace {

struct GenerateResult {
  std::string task;
  std::string rejection;
  std::string rel_path;  // relative to out_dir; empty when rejected
  std::size_t examples = 0;
  std::vector<std::pair<std::string, std::string>> extra_files;  // (kind, rel path)
};

GenerateResult generate_one(const KnowledgeStore& store, const std::string& source,
                            const GenConfig& cfg, const nlohmann::json& opts,
                            const std::string& out_dir) {
  GenerateResult result;
  ExprPtr expr = parse_expr(source, store.catalog());
  BuildOutcome outcome = build_dataset(store, expr, cfg);
  result.task = print_expr(canonicalize(expr));
  if (!outcome.accepted()) {
    result.rejection = outcome.rejection;
    return result;
  }
  Dataset ds = std::move(*outcome.dataset);
  if (opts.contains("separator")) ds = with_separators(ds, opts["separator"].get<std::string>());

  std::string name = task_slug(ds.task);
  result.rel_path = "datasets/" + name + ".jsonl";
  export_dataset(ds, (std::filesystem::path(out_dir) / result.rel_path).string());
  result.examples = ds.examples.size();

  if (opts.contains("fewshot")) {
    std::size_t k = opts["fewshot"].value("k", std::size_t{32});
    std::vector<std::uint64_t> trials =
        opts["fewshot"].value("trials", std::vector<std::uint64_t>{0, 1, 2, 3});
    for (std::uint64_t trial : trials) {
      Dataset sub = subsample_fewshot(ds, k, trial);
      std::string rel = "datasets/" + name + ".fewshot" + std::to_string(k) + ".trial" +
                        std::to_string(trial) + ".jsonl";
      export_dataset(sub, (std::filesystem::path(out_dir) / rel).string());
      result.extra_files.emplace_back("fewshot trial " + std::to_string(trial), rel);
    }
  }
  return result;
}

}  // namespace

void run_generate(const KnowledgeStore& store, const std::string& options_json,
                  const std::string& out_dir) {
  nlohmann::json opts = parse_options(options_json);
  GenConfig cfg = config_from_options(opts);

  std::vector<std::string> sources;
  if (opts.contains("tasks"))
    for (const auto& t : opts["tasks"]) sources.push_back(t.get<std::string>());
  if (opts.contains("tasks_file")) {
    std::ifstream in(opts["tasks_file"].get<std::string>());
    if (!in) throw DataError("cannot open tasks file: " + opts["tasks_file"].get<std::string>());
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty() && line[0] != '#') sources.push_back(line);
    }
  }

  std::vector<GenerateResult> results(sources.size());
  int jobs = std::max(1, opts.value("jobs", 1));
  if (jobs == 1 || sources.size() <= 1) {
    for (std::size_t i = 0; i < sources.size(); ++i)
      results[i] = generate_one(store, sources[i], cfg, opts, out_dir);
  } else {
    // parallel across tasks only; each build is internally sequential
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= sources.size()) return;
        try {
          results[i] = generate_one(store, sources[i], cfg, opts, out_dir);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ojson datasets = ojson::array();
  ojson rejections = ojson::array();
  for (const GenerateResult& r : results) {
    if (!r.rejection.empty()) {
      ojson item;
      item["task"] = r.task;
      item["reason"] = r.rejection;
      rejections.push_back(item);
      continue;
    }
    ojson item;
    item["task"] = r.task;
    item["path"] = r.rel_path;
    item["examples"] = r.examples;
    item["digest"] =
        sha256_file_hex((std::filesystem::path(out_dir) / r.rel_path).string());
    if (!r.extra_files.empty()) {
      ojson extras = ojson::array();
      for (const auto& [desc, rel] : r.extra_files) {
        ojson x;
        x["kind"] = desc;
        x["path"] = rel;
        x["digest"] = sha256_file_hex((std::filesystem::path(out_dir) / rel).string());
        extras.push_back(x);
      }
      item["extra"] = extras;
    }
    datasets.push_back(item);
  }

  if (opts.contains("balanced_union")) {
    ExprPtr easy = parse_expr(opts["balanced_union"].at("easy").get<std::string>(),
                              store.catalog());
    ExprPtr hard = parse_expr(opts["balanced_union"].at("hard").get<std::string>(),
                              store.catalog());
    BuildOutcome outcome = build_balanced_union(store, easy, hard, cfg);
    if (!outcome.accepted()) {
      ojson item;
      item["task"] = print_expr(TaskExpr::set_union(easy, hard));
      item["reason"] = outcome.rejection;
      rejections.push_back(item);
    } else {
      Dataset ds = std::move(*outcome.dataset);
      if (opts.contains("separator"))
        ds = with_separators(ds, opts["separator"].get<std::string>());
      std::string rel = "datasets/" + task_slug("balanced " + ds.task) + ".jsonl";
      export_dataset(ds, (std::filesystem::path(out_dir) / rel).string());
      ojson item;
      item["task"] = ds.task;
      item["balanced_union"] = true;
      item["path"] = rel;
      item["examples"] = ds.examples.size();
      item["digest"] = sha256_file_hex((std::filesystem::path(out_dir) / rel).string());
      datasets.push_back(item);
    }
  }

  ojson collisions = ojson::array();
  if (store.triples()) {
    for (const auto& [label, ids] : store.triples()->label_collisions()) {
      ojson item;
      item["label"] = label;
      item["entities"] = ids;
      collisions.push_back(item);
    }
  }

  ojson manifest;
  manifest["command"] = "generate";
  manifest["config"] = config_json(cfg);
  manifest["tasks"] = sources;
  manifest["store_inputs"] = store_inputs_json(store);
  manifest["datasets"] = datasets;
  manifest["rejections"] = rejections;
  manifest["label_collisions"] = collisions;
  write_manifest(out_dir, std::move(manifest));
}

void run_compile_sparql(const KnowledgeStore& store, const std::string& options_json,
                        const std::string& out_dir) {
  nlohmann::json opts = parse_options(options_json);
  if (!opts.contains("task")) throw DataError("compile-sparql: no task given");
  ExprPtr expr = parse_expr(opts["task"].get<std::string>(), store.catalog());
  std::string input = opts.value("input", "");
  TaskSignature sig = typecheck(expr, store.catalog());

  std::vector<std::pair<std::string, SparqlQuery>> queries;
  if (sig.kind == SigKind::Relation) {
    queries.emplace_back("sample.rq", compile_sparql(expr, store.catalog(), QueryMode::Sample));
    queries.emplace_back("function.rq",
                         compile_sparql(expr, store.catalog(), QueryMode::Function, input));
  } else {
    queries.emplace_back("positive-sample.rq",
                         compile_sparql(expr, store.catalog(), QueryMode::PositiveSample));
    queries.emplace_back("negative-sample.rq",
                         compile_sparql(expr, store.catalog(), QueryMode::NegativeSample));
    queries.emplace_back("function.rq",
                         compile_sparql(expr, store.catalog(), QueryMode::Function, input));
  }

  ojson outputs = ojson::array();
  for (const auto& [name, query] : queries) {
    write_file((std::filesystem::path(out_dir) / name).string(), query.text() + "\n");
    outputs.push_back(output_entry(out_dir, name));
  }

  ojson manifest;
  manifest["command"] = "compile-sparql";
  manifest["task"] = print_expr(expr);
  manifest["input"] = input;
  manifest["store_inputs"] = store_inputs_json(store);
  manifest["outputs"] = outputs;
  write_manifest(out_dir, std::move(manifest));
}

namespace {

ojson report_json(const EvalReport& report) {
  ojson j;
  j["split"] = report.split;
  j["total"] = report.total;
  j["covered"] = report.covered;
  j["coverage"] = report.coverage;
  j["aggregate"] = report.aggregate;
  j["missing"] = report.missing;
  ojson per = ojson::array();
  for (const ExampleScore& s : report.per_example) {
    ojson item;
    item["id"] = s.id;
    item["accuracy"] = s.accuracy;
    item["segmentation"] = s.segmentation;
    per.push_back(item);
  }
  j["per_example"] = per;
  return j;
}

ojson fit_json(const RegressionFit& fit) {
  ojson j;
  j["function"] = fit.function_tag;
  j["paradigm"] = fit.paradigm_tag;
  j["points"] = fit.n;
  j["defined"] = fit.defined;
  if (fit.defined) {
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
  }
  j["significant"] = fit.significant;
  return j;
}

std::vector<CompositionPoint> load_composition_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open composition table: " + path);
  std::vector<CompositionPoint> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      nlohmann::json rec = nlohmann::json::parse(line);
      CompositionPoint p;
      p.task = rec.value("task", "");
      p.function_tag = rec.at("function").get<std::string>();
      p.paradigm_tag = rec.value("paradigm", "");
      p.atomic_adaptabilities = rec.at("atomic").get<std::vector<double>>();
      p.compositional_adaptability = rec.at("comp").get<double>();
      points.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw DataError("composition table line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return points;
}

}  // namespace

bool run_evaluate(const KnowledgeStore* store, const std::string& options_json,
                  const std::string& out_dir) {
  nlohmann::json opts = parse_options(options_json);
  std::string analysis = opts.value("analysis", "");

  ojson manifest;
  manifest["command"] = "evaluate";
  manifest["options"] = ojson::parse(opts.dump());
  bool coverage_ok = true;

  if (analysis == "composition") {
    std::string table = opts.at("table").get<std::string>();
    std::vector<CompositionPoint> points = load_composition_table(table);
    bool allow = !opts.value("require_significant", false);
    std::vector<RegressionFit> fits = composition_regression(points, allow);
    ojson out = ojson::array();
    for (const RegressionFit& f : fits) out.push_back(fit_json(f));
    write_file((std::filesystem::path(out_dir) / "composition-fits.json").string(),
               out.dump(2) + "\n");
    manifest["inputs"] = ojson::array({input_entry(table)});
    manifest["outputs"] = ojson::array({output_entry(out_dir, "composition-fits.json")});
  } else if (analysis == "distribution") {
    if (!store) throw DataError("distribution analysis needs a knowledge store");
    Dataset ds = import_dataset(opts.at("dataset").get<std::string>());
    PredictionSet preds = load_predictions(opts.at("predictions").get<std::string>());
    ExprPtr easy = parse_expr(opts.at("easy").get<std::string>(), store->catalog());
    ExprPtr hard = parse_expr(opts.at("hard").get<std::string>(), store->catalog());
    DistributionMassReport report = distribution_mass(*store, easy, hard, ds, preds);
    ojson j;
    j["easy"] = print_expr(easy);
    j["hard"] = print_expr(hard);
    j["evaluated"] = report.evaluated;
    j["skipped_out_of_domain"] = report.skipped_out_of_domain;
    ojson summed;
    summed["mass_easy"] = report.summed.mean_easy;
    summed["mass_hard"] = report.summed.mean_hard;
    summed["se_easy"] = report.summed.se_easy;
    summed["se_hard"] = report.summed.se_hard;
    j["summed"] = summed;
    ojson top;
    top["mass_easy"] = report.top.mean_easy;
    top["mass_hard"] = report.top.mean_hard;
    top["se_easy"] = report.top.se_easy;
    top["se_hard"] = report.top.se_hard;
    j["top_candidate"] = top;
    write_file((std::filesystem::path(out_dir) / "distribution-mass.json").string(),
               j.dump(2) + "\n");
    manifest["inputs"] = ojson::array({input_entry(opts.at("dataset").get<std::string>()),
                                       input_entry(opts.at("predictions").get<std::string>())});
    manifest["outputs"] = ojson::array({output_entry(out_dir, "distribution-mass.json")});
  } else {
    Dataset ds = import_dataset(opts.at("dataset").get<std::string>());
    PredictionSet preds = load_predictions(opts.at("predictions").get<std::string>());
    std::string split = opts.value("split", "gen");
    if (split != "mem" && split != "gen")
      throw DataError("split must be 'mem' or 'gen', got '" + split + "'");
    EvalReport report =
        score_predictions(ds, preds, split == "mem" ? Split::Train : Split::Eval);
    std::string rel = "report-" + split + ".json";
    write_file((std::filesystem::path(out_dir) / rel).string(),
               report_json(report).dump(2) + "\n");
    manifest["inputs"] = ojson::array({input_entry(opts.at("dataset").get<std::string>()),
                                       input_entry(opts.at("predictions").get<std::string>())});
    manifest["outputs"] = ojson::array({output_entry(out_dir, rel)});
    coverage_ok = report.coverage >= 1.0 || opts.value("allow_partial", false);
  }

  write_manifest(out_dir, std::move(manifest));
  return coverage_ok;
}

}  // namespace taskbench
