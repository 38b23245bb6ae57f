#ifndef PHRASESMOOTH_LABELMAP_HPP
#define PHRASESMOOTH_LABELMAP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "phrasesmooth/common.hpp"
#include "phrasesmooth/corpus.hpp"

namespace ps {

// Total hard mapping word-id -> class-id. Classes may become empty during
// exchange moves; initializations never produce empty classes.
struct LabelMap {
  std::vector<ClassId> assignment;  // indexed by word-id
  std::uint32_t num_classes = 0;

  ClassId cls(WordId w) const { return assignment[w]; }
  std::uint32_t vocab_size() const {
    return static_cast<std::uint32_t>(assignment.size());
  }

  static LabelMap identity(std::uint32_t vocab_size);
};

enum class InitMethod {
  random,          // uniform class per word, empty classes repaired
  top_frequent,    // K-1 most frequent words get singleton classes
  same_countsum,   // greedy balance of per-class count sums
  same_num_words,  // round-robin over words by descending frequency
  count_bins,      // equal-width bins over the log count range
};

const char* to_string(InitMethod method);
std::optional<InitMethod> parse_init_method(std::string_view name);

LabelMap init_classes(const Vocabulary& vocab, std::uint32_t k,
                      InitMethod method, std::uint64_t seed);

// `word<TAB>label` file (POS tags, lemmas, previously dumped class maps).
// Labels are densely renumbered in file order; vocabulary words absent from
// the file land in a dedicated unknown-label class, always the last one, so
// K = distinct labels + 1. A word listed twice with different labels is
// fatal.
LabelMap load_label_map(const std::filesystem::path& path, const Vocabulary& vocab);

// `word<TAB>class-id` lines in vocabulary-id order (mkcls-compatible shape).
void dump_label_map(const LabelMap& map, const Vocabulary& vocab, std::ostream& out);

}  // namespace ps

#endif  // PHRASESMOOTH_LABELMAP_HPP
