#ifndef PHRASESMOOTH_CLUSTERING_HPP
#define PHRASESMOOTH_CLUSTERING_HPP

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "phrasesmooth/corpus.hpp"
#include "phrasesmooth/labelmap.hpp"

namespace ps {

using Sentences = std::vector<std::vector<WordId>>;

// Immutable adjacency statistics for one corpus side. Word-level bigram
// relations never change during clustering; only class memberships do.
//
// Every sentence is conditioned on a distinguished boundary history, so the
// corpus has exactly one transition event and one emission event per token:
// for a sentence e_1..e_I the transitions are (B, e_1), (e_1, e_2), ...,
// (e_{I-1}, e_I). There is no end-of-sentence event, which keeps the K = 1
// objective equal to the unigram log-likelihood.
struct SideStats {
  std::uint32_t vocab_size = 0;
  std::uint64_t tokens = 0;
  std::uint64_t nonempty_sentences = 0;  // boundary history count

  std::vector<std::uint64_t> word_count;
  std::vector<std::uint64_t> initial_count;  // boundary -> w transitions
  std::vector<std::uint64_t> final_count;    // sentence-final occurrences

  // Successor / predecessor word counts, sorted by neighbor id. Both lists
  // include self-loops (w, w).
  std::vector<std::vector<std::pair<WordId, std::uint32_t>>> next;
  std::vector<std::vector<std::pair<WordId, std::uint32_t>>> prev;

  static SideStats build(const Sentences& sentences, std::uint32_t vocab_size);
};

// Class bigram/unigram counts plus the running log-likelihood
//
//   L = sum_events log p(c(e_i)|c(e_{i-1})) + log p(e_i|c(e_i))
//
// with maximum-likelihood estimates from the counts. Exchange moves update
// the counts and the objective incrementally.
class ClusteringState {
 public:
  ClusteringState(const SideStats& stats, LabelMap map);

  double objective() const { return objective_; }
  double objective_from_scratch() const;

  // Objective change for moving w into class `to`; no state change.
  double move_delta(WordId w, ClassId to) const;
  void apply_move(WordId w, ClassId to);

  // Visits every word once in descending frequency order and applies the
  // best strictly improving move per word (ties broken toward the lowest
  // class id). Returns the number of moves applied.
  std::uint32_t exchange_pass();

  const LabelMap& labelmap() const { return map_; }
  std::uint32_t num_classes() const { return map_.num_classes; }

  std::uint64_t class_unigram(ClassId k) const { return class_unigram_[k]; }
  std::uint64_t class_history(ClassId k) const {
    return class_unigram_[k] - class_final_[k];
  }
  // from == num_classes() addresses the boundary history row.
  std::uint64_t class_bigram(std::uint32_t from, ClassId to) const;

 private:
  struct NeighborBuckets;  // per-word counts grouped by current class

  void bucket_neighbors(WordId w, NeighborBuckets& out) const;
  double move_delta_from_buckets(WordId w, ClassId to,
                                 const NeighborBuckets& nb) const;
  void apply_move_with_buckets(WordId w, ClassId to, const NeighborBuckets& nb,
                               double delta);

  const SideStats* stats_;
  LabelMap map_;
  std::vector<std::uint64_t> class_unigram_;
  std::vector<std::uint64_t> class_final_;
  // Row per history class, plus one boundary row at index num_classes.
  std::vector<std::unordered_map<ClassId, std::uint64_t>> bigram_;
  std::vector<WordId> visit_order_;
  double objective_ = 0.0;
};

struct ClusterResult {
  LabelMap labelmap;
  std::vector<double> trace;  // objective after init, then after each pass
};

using ClusterDumpHook = std::function<void(std::uint32_t iteration, const LabelMap&)>;

// init_classes followed by up to `iterations` exchange passes, stopping
// early once a pass applies no move. The hook, when set, fires for the
// initialization (iteration 0) and after every pass.
ClusterResult cluster(const Sentences& sentences, const Vocabulary& vocab,
                      std::uint32_t k, std::uint32_t iterations,
                      InitMethod method, std::uint64_t seed,
                      const ClusterDumpHook& dump_hook = {});

}  // namespace ps

#endif  // PHRASESMOOTH_CLUSTERING_HPP
