#include "phrasesmooth/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ps {

namespace {

inline double xlx(std::uint64_t n) {
  return n == 0 ? 0.0 : static_cast<double>(n) * std::log(static_cast<double>(n));
}

}  // namespace

SideStats SideStats::build(const Sentences& sentences, std::uint32_t vocab_size) {
  SideStats s;
  s.vocab_size = vocab_size;
  s.word_count.assign(vocab_size, 0);
  s.initial_count.assign(vocab_size, 0);
  s.final_count.assign(vocab_size, 0);
  s.next.resize(vocab_size);
  s.prev.resize(vocab_size);

  std::unordered_map<std::uint64_t, std::uint32_t, U64Hash> bigrams;
  for (const auto& sent : sentences) {
    if (sent.empty()) continue;
    ++s.nonempty_sentences;
    ++s.initial_count[sent.front()];
    ++s.final_count[sent.back()];
    for (std::size_t i = 0; i < sent.size(); ++i) {
      ++s.word_count[sent[i]];
      ++s.tokens;
      if (i + 1 < sent.size()) ++bigrams[pack64(sent[i], sent[i + 1])];
    }
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(bigrams.size());
  for (const auto& [key, n] : bigrams) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t key : keys) {
    auto a = static_cast<WordId>(key >> 32);
    auto b = static_cast<WordId>(key & 0xffffffffu);
    std::uint32_t n = bigrams.at(key);
    s.next[a].emplace_back(b, n);
    s.prev[b].emplace_back(a, n);
  }
  return s;
}

struct ClusteringState::NeighborBuckets {
  // Transition counts of one word grouped by the current class of the
  // neighbor; self-loops kept apart since both endpoints move together.
  std::unordered_map<ClassId, std::uint64_t> fwd, rev;
  std::vector<std::pair<ClassId, std::uint64_t>> fwd_items, rev_items;
  std::uint64_t self = 0;

  std::uint64_t fwd_to(ClassId k) const {
    auto it = fwd.find(k);
    return it == fwd.end() ? 0 : it->second;
  }
  std::uint64_t rev_from(ClassId k) const {
    auto it = rev.find(k);
    return it == rev.end() ? 0 : it->second;
  }
};

ClusteringState::ClusteringState(const SideStats& stats, LabelMap map)
    : stats_(&stats), map_(std::move(map)) {
  std::uint32_t k = map_.num_classes;
  class_unigram_.assign(k, 0);
  class_final_.assign(k, 0);
  bigram_.assign(k + 1, {});

  for (WordId w = 0; w < stats_->vocab_size; ++w) {
    ClassId c = map_.cls(w);
    class_unigram_[c] += stats_->word_count[w];
    class_final_[c] += stats_->final_count[w];
    if (stats_->initial_count[w] > 0)
      bigram_[k][c] += stats_->initial_count[w];
    for (const auto& [x, n] : stats_->next[w]) bigram_[c][map_.cls(x)] += n;
  }

  visit_order_.resize(stats_->vocab_size);
  std::iota(visit_order_.begin(), visit_order_.end(), 0u);
  std::sort(visit_order_.begin(), visit_order_.end(), [&](WordId a, WordId b) {
    if (stats_->word_count[a] != stats_->word_count[b])
      return stats_->word_count[a] > stats_->word_count[b];
    return a < b;
  });

  objective_ = objective_from_scratch();
}

std::uint64_t ClusteringState::class_bigram(std::uint32_t from, ClassId to) const {
  const auto& row = bigram_[from];
  auto it = row.find(to);
  return it == row.end() ? 0 : it->second;
}

// Recomputed from the immutable word statistics and the current assignment
// only; does not trust the incrementally maintained tables.
double ClusteringState::objective_from_scratch() const {
  std::uint32_t k = map_.num_classes;
  std::vector<std::unordered_map<ClassId, std::uint64_t>> trans(k + 1);
  std::vector<std::uint64_t> unigram(k, 0), finals(k, 0);

  for (WordId w = 0; w < stats_->vocab_size; ++w) {
    ClassId c = map_.cls(w);
    unigram[c] += stats_->word_count[w];
    finals[c] += stats_->final_count[w];
    if (stats_->initial_count[w] > 0) trans[k][c] += stats_->initial_count[w];
    for (const auto& [x, n] : stats_->next[w]) trans[c][map_.cls(x)] += n;
  }

  double obj = 0.0;
  for (const auto& row : trans)
    for (const auto& [to, n] : row) obj += xlx(n);
  for (ClassId c = 0; c < k; ++c) obj -= xlx(unigram[c] - finals[c]);
  obj -= xlx(stats_->nonempty_sentences);
  for (WordId w = 0; w < stats_->vocab_size; ++w)
    obj += xlx(stats_->word_count[w]);
  for (ClassId c = 0; c < k; ++c) obj -= xlx(unigram[c]);
  return obj;
}

void ClusteringState::bucket_neighbors(WordId w, NeighborBuckets& nb) const {
  nb.fwd.clear();
  nb.rev.clear();
  nb.fwd_items.clear();
  nb.rev_items.clear();
  nb.self = 0;
  for (const auto& [x, n] : stats_->next[w]) {
    if (x == w)
      nb.self = n;
    else
      nb.fwd[map_.cls(x)] += n;
  }
  for (const auto& [x, n] : stats_->prev[w]) {
    if (x == w) continue;  // already counted as the self-loop
    nb.rev[map_.cls(x)] += n;
  }
  nb.fwd_items.assign(nb.fwd.begin(), nb.fwd.end());
  nb.rev_items.assign(nb.rev.begin(), nb.rev.end());
  std::sort(nb.fwd_items.begin(), nb.fwd_items.end());
  std::sort(nb.rev_items.begin(), nb.rev_items.end());
}

double ClusteringState::move_delta_from_buckets(WordId w, ClassId to,
                                                const NeighborBuckets& nb) const {
  ClassId from = map_.cls(w);
  if (to == from) return 0.0;

  std::uint64_t wc = stats_->word_count[w];
  std::uint64_t hist_moved = wc - stats_->final_count[w];
  std::uint64_t winit = stats_->initial_count[w];
  std::uint32_t boundary = map_.num_classes;

  auto cell_delta = [&](std::uint32_t row, ClassId col, std::int64_t change) {
    if (change == 0) return 0.0;
    std::uint64_t old = class_bigram(row, col);
    std::uint64_t now = old + static_cast<std::uint64_t>(change);
    return xlx(now) - xlx(old);
  };

  double d = 0.0;

  // Emission denominators.
  d += xlx(class_unigram_[from]) - xlx(class_unigram_[from] - wc);
  d += xlx(class_unigram_[to]) - xlx(class_unigram_[to] + wc);

  // Transition denominators (history counts).
  std::uint64_t hist_from = class_unigram_[from] - class_final_[from];
  std::uint64_t hist_to = class_unigram_[to] - class_final_[to];
  d += xlx(hist_from) - xlx(hist_from - hist_moved);
  d += xlx(hist_to) - xlx(hist_to + hist_moved);

  // Boundary row.
  if (winit > 0) {
    d += cell_delta(boundary, from, -static_cast<std::int64_t>(winit));
    d += cell_delta(boundary, to, static_cast<std::int64_t>(winit));
  }

  // Rows/columns not touching `from`/`to` on the other end.
  for (const auto& [k, n] : nb.fwd_items) {
    if (k == from || k == to) continue;
    d += cell_delta(from, k, -static_cast<std::int64_t>(n));
    d += cell_delta(to, k, static_cast<std::int64_t>(n));
  }
  for (const auto& [k, n] : nb.rev_items) {
    if (k == from || k == to) continue;
    d += cell_delta(k, from, -static_cast<std::int64_t>(n));
    d += cell_delta(k, to, static_cast<std::int64_t>(n));
  }

  // Corner cells where both endpoints are from/to.
  auto fa = static_cast<std::int64_t>(nb.fwd_to(from));
  auto ft = static_cast<std::int64_t>(nb.fwd_to(to));
  auto ra = static_cast<std::int64_t>(nb.rev_from(from));
  auto rt = static_cast<std::int64_t>(nb.rev_from(to));
  auto self = static_cast<std::int64_t>(nb.self);
  d += cell_delta(from, from, -(fa + ra + self));
  d += cell_delta(from, to, ra - ft);
  d += cell_delta(to, from, fa - rt);
  d += cell_delta(to, to, ft + rt + self);

  return d;
}

double ClusteringState::move_delta(WordId w, ClassId to) const {
  NeighborBuckets nb;
  bucket_neighbors(w, nb);
  return move_delta_from_buckets(w, to, nb);
}

void ClusteringState::apply_move_with_buckets(WordId w, ClassId to,
                                              const NeighborBuckets& nb,
                                              double delta) {
  ClassId from = map_.cls(w);
  if (to == from) return;

  std::uint64_t wc = stats_->word_count[w];
  std::uint64_t wfin = stats_->final_count[w];
  std::uint64_t winit = stats_->initial_count[w];
  std::uint32_t boundary = map_.num_classes;

  auto bump = [&](std::uint32_t row, ClassId col, std::int64_t change) {
    if (change == 0) return;
    auto& cell = bigram_[row][col];
    cell += static_cast<std::uint64_t>(change);
    if (cell == 0) bigram_[row].erase(col);
  };

  class_unigram_[from] -= wc;
  class_unigram_[to] += wc;
  class_final_[from] -= wfin;
  class_final_[to] += wfin;

  if (winit > 0) {
    bump(boundary, from, -static_cast<std::int64_t>(winit));
    bump(boundary, to, static_cast<std::int64_t>(winit));
  }
  for (const auto& [k, n] : nb.fwd_items) {
    if (k == from || k == to) continue;
    bump(from, k, -static_cast<std::int64_t>(n));
    bump(to, k, static_cast<std::int64_t>(n));
  }
  for (const auto& [k, n] : nb.rev_items) {
    if (k == from || k == to) continue;
    bump(k, from, -static_cast<std::int64_t>(n));
    bump(k, to, static_cast<std::int64_t>(n));
  }
  auto fa = static_cast<std::int64_t>(nb.fwd_to(from));
  auto ft = static_cast<std::int64_t>(nb.fwd_to(to));
  auto ra = static_cast<std::int64_t>(nb.rev_from(from));
  auto rt = static_cast<std::int64_t>(nb.rev_from(to));
  auto self = static_cast<std::int64_t>(nb.self);
  bump(from, from, -(fa + ra + self));
  bump(from, to, ra - ft);
  bump(to, from, fa - rt);
  bump(to, to, ft + rt + self);

  map_.assignment[w] = to;
  objective_ += delta;
}

void ClusteringState::apply_move(WordId w, ClassId to) {
  NeighborBuckets nb;
  bucket_neighbors(w, nb);
  double delta = move_delta_from_buckets(w, to, nb);
  apply_move_with_buckets(w, to, nb, delta);
}

std::uint32_t ClusteringState::exchange_pass() {
  std::uint32_t moves = 0;
  NeighborBuckets nb;
  for (WordId w : visit_order_) {
    if (stats_->word_count[w] == 0) continue;
    bucket_neighbors(w, nb);
    ClassId from = map_.cls(w);
    ClassId best = from;
    double best_delta = 0.0;
    for (ClassId c = 0; c < map_.num_classes; ++c) {
      if (c == from) continue;
      double d = move_delta_from_buckets(w, c, nb);
      if (d > best_delta) {
        best_delta = d;
        best = c;
      }
    }
    if (best != from) {
      apply_move_with_buckets(w, best, nb, best_delta);
      ++moves;
    }
  }
  return moves;
}

ClusterResult cluster(const Sentences& sentences, const Vocabulary& vocab,
                      std::uint32_t k, std::uint32_t iterations,
                      InitMethod method, std::uint64_t seed,
                      const ClusterDumpHook& dump_hook) {
  LabelMap init = init_classes(vocab, k, method, seed);
  SideStats stats = SideStats::build(sentences, vocab.size());
  ClusteringState state(stats, std::move(init));

  ClusterResult result;
  result.trace.push_back(state.objective());
  if (dump_hook) dump_hook(0, state.labelmap());

  for (std::uint32_t it = 1; it <= iterations; ++it) {
    std::uint32_t moves = state.exchange_pass();
    result.trace.push_back(state.objective());
    if (dump_hook) dump_hook(it, state.labelmap());
    if (moves == 0) break;
  }
  result.labelmap = state.labelmap();
  return result;
}

}  // namespace ps
