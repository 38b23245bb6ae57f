#include "phrasesmooth/labelmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

namespace ps {

LabelMap LabelMap::identity(std::uint32_t vocab_size) {
  LabelMap map;
  map.assignment.resize(vocab_size);
  std::iota(map.assignment.begin(), map.assignment.end(), 0u);
  map.num_classes = vocab_size;
  return map;
}

const char* to_string(InitMethod method) {
  switch (method) {
    case InitMethod::random: return "random";
    case InitMethod::top_frequent: return "top-frequent";
    case InitMethod::same_countsum: return "same-countsum";
    case InitMethod::same_num_words: return "same-num-words";
    case InitMethod::count_bins: return "count-bins";
  }
  return "?";
}

std::optional<InitMethod> parse_init_method(std::string_view name) {
  if (name == "random") return InitMethod::random;
  if (name == "top-frequent") return InitMethod::top_frequent;
  if (name == "same-countsum") return InitMethod::same_countsum;
  if (name == "same-num-words" || name == "same-#words")
    return InitMethod::same_num_words;
  if (name == "count-bins") return InitMethod::count_bins;
  return std::nullopt;
}

namespace {

// Word ids sorted by descending frequency, ties by ascending id.
std::vector<WordId> by_descending_frequency(const Vocabulary& vocab) {
  std::vector<WordId> order(vocab.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](WordId a, WordId b) {
    if (vocab.frequency(a) != vocab.frequency(b))
      return vocab.frequency(a) > vocab.frequency(b);
    return a < b;
  });
  return order;
}

std::vector<std::vector<WordId>> members_by_class(const LabelMap& map) {
  std::vector<std::vector<WordId>> members(map.num_classes);
  for (WordId w = 0; w < map.vocab_size(); ++w)
    members[map.assignment[w]].push_back(w);
  return members;
}

void init_random(const Vocabulary& vocab, std::uint32_t k, std::uint64_t seed,
                 LabelMap& map) {
  std::mt19937_64 gen(seed);
  for (WordId w = 0; w < vocab.size(); ++w)
    map.assignment[w] = static_cast<ClassId>(gen() % k);

  // Repair: fill each empty class with one word taken from the class that
  // currently holds the most words.
  auto members = members_by_class(map);
  for (ClassId empty = 0; empty < k; ++empty) {
    if (!members[empty].empty()) continue;
    ClassId largest = 0;
    for (ClassId c = 1; c < k; ++c)
      if (members[c].size() > members[largest].size()) largest = c;
    WordId moved = *std::min_element(members[largest].begin(),
                                     members[largest].end());
    members[largest].erase(std::find(members[largest].begin(),
                                     members[largest].end(), moved));
    members[empty].push_back(moved);
    map.assignment[moved] = empty;
  }
}

void init_top_frequent(const Vocabulary& vocab, std::uint32_t k, LabelMap& map) {
  auto order = by_descending_frequency(vocab);
  for (std::uint32_t rank = 0; rank < order.size(); ++rank)
    map.assignment[order[rank]] =
        rank < k - 1 ? static_cast<ClassId>(rank) : k - 1;
}

void init_same_countsum(const Vocabulary& vocab, std::uint32_t k, LabelMap& map) {
  auto order = by_descending_frequency(vocab);
  std::vector<std::uint64_t> sums(k, 0);
  for (WordId w : order) {
    ClassId best = 0;
    for (ClassId c = 1; c < k; ++c)
      if (sums[c] < sums[best]) best = c;
    map.assignment[w] = best;
    sums[best] += vocab.frequency(w);
  }
}

void init_same_num_words(const Vocabulary& vocab, std::uint32_t k, LabelMap& map) {
  auto order = by_descending_frequency(vocab);
  for (std::uint32_t rank = 0; rank < order.size(); ++rank)
    map.assignment[order[rank]] = static_cast<ClassId>(rank % k);
}

void init_count_bins(const Vocabulary& vocab, std::uint32_t k, LabelMap& map) {
  std::uint64_t min_count = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_count = 0;
  for (WordId w = 0; w < vocab.size(); ++w) {
    min_count = std::min(min_count, vocab.frequency(w));
    max_count = std::max(max_count, vocab.frequency(w));
  }
  double lo = std::log(static_cast<double>(min_count));
  double hi = std::log(static_cast<double>(max_count));
  double width = (hi - lo) / static_cast<double>(k);

  for (WordId w = 0; w < vocab.size(); ++w) {
    ClassId bin = 0;
    if (width > 0.0) {
      double x = (std::log(static_cast<double>(vocab.frequency(w))) - lo) / width;
      bin = std::min<ClassId>(k - 1, static_cast<ClassId>(x));
    }
    map.assignment[w] = bin;
  }

  // Empty bins are filled by splitting the most populous bin at its median
  // count: the lower half moves.
  auto members = members_by_class(map);
  for (ClassId empty = 0; empty < k; ++empty) {
    if (!members[empty].empty()) continue;
    ClassId largest = 0;
    for (ClassId c = 1; c < k; ++c)
      if (members[c].size() > members[largest].size()) largest = c;
    auto& pool = members[largest];
    std::sort(pool.begin(), pool.end(), [&](WordId a, WordId b) {
      if (vocab.frequency(a) != vocab.frequency(b))
        return vocab.frequency(a) < vocab.frequency(b);
      return a < b;
    });
    std::size_t half = pool.size() / 2;
    for (std::size_t n = 0; n < half; ++n) {
      map.assignment[pool[n]] = empty;
      members[empty].push_back(pool[n]);
    }
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(half));
  }
}

}  // namespace

LabelMap init_classes(const Vocabulary& vocab, std::uint32_t k,
                      InitMethod method, std::uint64_t seed) {
  if (k == 0) throw_invalid("class count K must be positive");
  if (k > vocab.size())
    throw_invalid("class count K = " + std::to_string(k) +
                  " exceeds vocabulary size " + std::to_string(vocab.size()));

  LabelMap map;
  map.assignment.resize(vocab.size());
  map.num_classes = k;

  switch (method) {
    case InitMethod::random: init_random(vocab, k, seed, map); break;
    case InitMethod::top_frequent: init_top_frequent(vocab, k, map); break;
    case InitMethod::same_countsum: init_same_countsum(vocab, k, map); break;
    case InitMethod::same_num_words: init_same_num_words(vocab, k, map); break;
    case InitMethod::count_bins: init_count_bins(vocab, k, map); break;
  }
  return map;
}

LabelMap load_label_map(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path.string());

  std::unordered_map<std::string, ClassId> label_ids;
  std::unordered_map<std::string, std::string> word_labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto sep = line.find_first_of("\t ");
    auto label_start =
        sep == std::string::npos ? sep : line.find_first_not_of("\t ", sep);
    if (sep == 0 || label_start == std::string::npos)
      throw_parse(path.string() + ":" + std::to_string(lineno) +
                  ": expected `word<TAB>label`");
    std::string word = line.substr(0, sep);
    std::string label = line.substr(label_start);

    auto prev = word_labels.find(word);
    if (prev != word_labels.end()) {
      if (prev->second != label)
        throw_parse(path.string() + ": word '" + word +
                    "' has conflicting labels '" + prev->second + "' and '" +
                    label + "'");
      continue;
    }
    word_labels.emplace(std::move(word), label);
    label_ids.emplace(label, static_cast<ClassId>(label_ids.size()));
  }

  LabelMap map;
  map.num_classes = static_cast<std::uint32_t>(label_ids.size()) + 1;
  ClassId unknown = map.num_classes - 1;
  map.assignment.resize(vocab.size(), unknown);
  for (WordId w = 0; w < vocab.size(); ++w) {
    auto it = word_labels.find(vocab.token(w));
    if (it != word_labels.end()) map.assignment[w] = label_ids.at(it->second);
  }
  return map;
}

void dump_label_map(const LabelMap& map, const Vocabulary& vocab, std::ostream& out) {
  for (WordId w = 0; w < map.vocab_size(); ++w)
    out << vocab.token(w) << '\t' << map.assignment[w] << '\n';
}

}  // namespace ps
