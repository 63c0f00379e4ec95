#include <filesystem>
#include <fstream>
#include <mutex>
#include <semaphore>

#include "httplib.h"
#include "json.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/sha256.hpp"

namespace taskbench {

namespace {

// One mutex guards cache writes; lookups read completed files only because
// writes land via rename.
std::mutex g_cache_mutex;

std::vector<std::string> parse_bindings(const std::string& body, const std::string& var) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const std::exception& e) {
    throw BackendError(std::string("malformed SPARQL response: ") + e.what());
  }
  if (!doc.contains("results") || !doc["results"].contains("bindings"))
    throw BackendError("malformed SPARQL response: missing results.bindings");
  std::vector<std::string> out;
  for (const auto& row : doc["results"]["bindings"]) {
    if (!row.contains(var)) continue;
    const auto& cell = row[var];
    if (cell.contains("value")) {
      if (cell["value"].is_string())
        out.push_back(cell["value"].get<std::string>());
      else
        out.push_back(cell["value"].dump());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// "http://host:port/path" -> (host:port, /path)
std::pair<std::string, std::string> split_url(const std::string& url) {
  std::string rest = url;
  auto scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  auto slash = rest.find('/');
  if (slash == std::string::npos) return {rest, "/"};
  return {rest.substr(0, slash), rest.substr(slash)};
}

}  // namespace

struct SparqlClient::Impl {
  std::string url;
  std::string cache_dir;
  int max_inflight;
  mutable std::counting_semaphore<64> slots;

  Impl(std::string u, std::string c, int inflight)
      : url(std::move(u)), cache_dir(std::move(c)),
        max_inflight(inflight), slots(inflight) {}

  std::string cache_path(const std::string& query_text) const {
    return (std::filesystem::path(cache_dir) / (sha256_hex(query_text) + ".json")).string();
  }

  std::string fetch(const std::string& query_text) const {
    if (!cache_dir.empty()) {
      std::ifstream in(cache_path(query_text), std::ios::binary);
      if (in)
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    }
    auto [host, path] = split_url(url);
    slots.acquire();
    httplib::Client client(host);
    client.set_read_timeout(30, 0);
    httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
    auto res = client.Post(path, headers, query_text, "application/sparql-query");
    slots.release();
    if (!res) throw BackendError("endpoint request failed: " + url);
    if (res->status != 200)
      throw BackendError("endpoint returned status " + std::to_string(res->status));

    if (!cache_dir.empty()) {
      std::lock_guard<std::mutex> lock(g_cache_mutex);
      std::filesystem::create_directories(cache_dir);
      std::string final_path = cache_path(query_text);
      std::string tmp = final_path + ".tmp";
      {
        std::ofstream out(tmp, std::ios::binary);
        out << res->body;
      }
      std::filesystem::rename(tmp, final_path);
    }
    return res->body;
  }
};

SparqlClient::SparqlClient(std::string endpoint_url, std::string cache_dir, int max_inflight)
    : impl_(new Impl(std::move(endpoint_url), std::move(cache_dir),
                     max_inflight < 1 ? 1 : std::min(max_inflight, 64))) {}

SparqlClient::~SparqlClient() { delete impl_; }

std::vector<std::string> SparqlClient::execute(const SparqlQuery& query) const {
  return parse_bindings(impl_->fetch(query.text()), query.select_var);
}

std::vector<std::string> SparqlClient::execute_text(const std::string& query_text,
                                                    const std::string& select_var) const {
  return parse_bindings(impl_->fetch(query_text), select_var);
}

}  // namespace taskbench
