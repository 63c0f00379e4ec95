#pragma once

#include <string>
#include <vector>

#include "taskbench/algebra.hpp"
#include "taskbench/store.hpp"

namespace taskbench {

enum class QueryMode { Sample, Function, PositiveSample, NegativeSample };

struct SparqlQuery {
  QueryMode mode = QueryMode::Sample;
  std::string select_var;  // "x" for sample modes, "y" for function mode
  std::string body;        // conditional fragment text
  std::string text() const;
};

// Compile a word-level factual expression to a query. Fragment generation is
// recursive:
//   atomic A          ->  ?x A ?y .            (inverted: ?y A ?x .)
//   atomic predicate  ->  BIND( EXISTS { ?x P V . } AS y )
//   union(a,b)        ->  { frag(a) } UNION { frag(b) }
//   intersection(a,b) ->  frag(a) frag(b)          (shared output variable)
//   lor(a,b)          ->  BIND( y1 || y2 AS y ) frag(a,y1) frag(b,y2)
//   land(a,b)         ->  BIND( y1 && y2 AS y ) frag(a,y1) frag(b,y2)
//   chain(f,g)        ->  frag(g, x, t1) frag(f, ?t1, y)
// Sample queries select ?x; function queries select ?y with the input bound:
// pass the input entity id as `input` (empty keeps ?x as a template
// variable). Predicate sample queries add a grounding pattern and a FILTER
// on the truth value. Throws BackendError on non-factual atomics.
SparqlQuery compile_sparql(const ExprPtr& expr, const Catalog& catalog, QueryMode mode,
                           const std::string& input = "");

// Evaluate the fragment language emitted by compile_sparql over an in-memory
// triple store. Returns the sorted unique values bound to the select
// variable; booleans surface as "true"/"false". Throws BackendError on
// constructs outside the emitted fragment language.
std::vector<std::string> execute_local(const TripleStore& store, const SparqlQuery& query);
std::vector<std::string> execute_local_text(const TripleStore& store, const std::string& text);

// SPARQL-over-HTTP client with an on-disk response cache keyed by query
// text. Results parse from application/sparql-results+json. In-flight
// requests are bounded; cache writes go through a temp file rename.
class SparqlClient {
 public:
  SparqlClient(std::string endpoint_url, std::string cache_dir, int max_inflight = 4);
  ~SparqlClient();
  std::vector<std::string> execute(const SparqlQuery& query) const;
  std::vector<std::string> execute_text(const std::string& query_text,
                                        const std::string& select_var) const;

 private:
  struct Impl;
  Impl* impl_;
};

// Route a query to the local evaluator when triples are loaded, otherwise to
// the store's remote endpoint.
std::vector<std::string> execute_sparql(const KnowledgeStore& store, const SparqlQuery& query);

}  // namespace taskbench
