#ifndef PHRASESMOOTH_CORPUS_HPP
#define PHRASESMOOTH_CORPUS_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phrasesmooth/common.hpp"

namespace ps {

// Bijective token <-> word-id mapping with occurrence counts. Ids are
// assigned in order of first occurrence.
class Vocabulary {
 public:
  WordId add(std::string_view token);
  std::optional<WordId> lookup(std::string_view token) const;

  const std::string& token(WordId id) const { return entries_[id]; }
  std::uint64_t frequency(WordId id) const { return frequency_[id]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(entries_.size()); }
  std::uint64_t running_words() const;

  // One `token<TAB>id<TAB>count` line per word, in id order.
  void dump(std::ostream& out) const;
  static Vocabulary parse(std::istream& in);

 private:
  std::vector<std::string> entries_;
  std::vector<std::uint64_t> frequency_;
  std::unordered_map<std::string, WordId> index_;
};

struct AlignLink {
  std::uint32_t src;  // j, source position
  std::uint32_t tgt;  // i, target position
  friend auto operator<=>(const AlignLink&, const AlignLink&) = default;
};

struct AlignedSentencePair {
  std::vector<WordId> source;
  std::vector<WordId> target;
  std::vector<AlignLink> links;  // sorted, duplicate-free; may be empty
};

struct ParallelCorpus {
  Vocabulary source_vocab;
  Vocabulary target_vocab;
  std::vector<AlignedSentencePair> pairs;

  // Prefix subsample: the first round(fraction * size) sentence pairs,
  // at least one, with vocabularies rebuilt over the prefix. Nested
  // fractions give nested corpora.
  ParallelCorpus prefix(double fraction) const;
};

// Three line-parallel files: tokenized source, tokenized target, Pharaoh
// "j-i" alignments (0-based). Line-count mismatches and malformed or
// out-of-range links are fatal.
ParallelCorpus load_parallel_corpus(const std::filesystem::path& source_path,
                                    const std::filesystem::path& target_path,
                                    const std::filesystem::path& alignment_path);

// Fraction of test running words missing from vocab. A test file with no
// tokens at all is an error, not rate 0.
double oov_rate(const std::filesystem::path& test_path, const Vocabulary& vocab);

std::vector<std::string> tokenize_line(const std::string& line);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace ps

#endif  // PHRASESMOOTH_CORPUS_HPP
