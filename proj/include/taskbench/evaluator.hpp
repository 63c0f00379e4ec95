#pragma once

#include <functional>
#include <string>
#include <vector>

#include "taskbench/algebra.hpp"
#include "taskbench/store.hpp"

namespace taskbench {

// Output of a sequential task in product form: one alternative set per
// surviving position. The set of output sequences is the cross product of
// the alternatives; it is enumerated lazily so oversized images never have
// to be materialized.
class SeqImage {
 public:
  std::vector<std::vector<std::string>> alts;  // each sorted unique

  bool empty() const;
  // Exact cross-product size; saturates at UINT64_MAX with *exact=false.
  std::uint64_t count(bool* exact = nullptr) const;
  bool contains(const std::vector<std::string>& seq) const;
  // Visit sequences in lexicographic choice order until fn returns false or
  // `limit` sequences have been produced.
  void for_each(std::uint64_t limit,
                const std::function<bool(const std::vector<std::string>&)>& fn) const;
  // Throws DataError when the product exceeds cap.
  std::vector<std::vector<std::string>> to_vector(std::uint64_t cap) const;
};

// Word-level evaluation. Relations return sorted unique word sets; absent
// vocabulary or table keys yield empty sets / false. Inverted atomics query
// the reverse mapping.
std::vector<std::string> eval_atomic_relation(const KnowledgeStore& store,
                                              const AtomicName& name, const std::string& word);
bool eval_atomic_predicate(const KnowledgeStore& store, const AtomicName& name,
                           const std::string& word);

// Full word-level expression evaluation: chains union over intermediate
// elements, union/intersection are set operations, land/lor boolean ones.
// Predicate-over-relation chains hold when some image element satisfies the
// predicate.
std::vector<std::string> eval_relation(const KnowledgeStore& store, const ExprPtr& expr,
                                       const std::string& word);
bool eval_predicate(const KnowledgeStore& store, const ExprPtr& expr, const std::string& word);

// Sequential evaluation of a normal form: drop words failing the filter
// (preserving order), map each survivor, return the product image.
SeqImage eval_seq(const KnowledgeStore& store, const MapFilterNF& nf,
                  const std::vector<std::string>& words);

// Candidate inputs for dataset construction.
// For language domains: the thresholded vocabulary. For "entity": labels of
// entities that participate in the expression, obtained through its compiled
// sample query.
std::vector<std::string> sample_inputs(const KnowledgeStore& store, const ExprPtr& expr,
                                       const TaskSignature& sig);
// Positive and negative input pools for a predicate task.
std::pair<std::vector<std::string>, std::vector<std::string>> predicate_pools(
    const KnowledgeStore& store, const ExprPtr& expr, const TaskSignature& sig);

// Words of the domain vocabulary with a non-empty image under the relation.
std::vector<std::string> relation_domain(const KnowledgeStore& store, const ExprPtr& expr,
                                         const TaskSignature& sig);

}  // namespace taskbench
