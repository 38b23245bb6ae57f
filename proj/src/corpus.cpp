#include "phrasesmooth/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ps {

WordId Vocabulary::add(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) {
    ++frequency_[it->second];
    return it->second;
  }
  if (entries_.size() >= kMaxVocabSize) throw_invalid("vocabulary overflow");
  auto id = static_cast<WordId>(entries_.size());
  entries_.emplace_back(token);
  frequency_.push_back(1);
  index_.emplace(entries_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::running_words() const {
  std::uint64_t total = 0;
  for (auto f : frequency_) total += f;
  return total;
}

void Vocabulary::dump(std::ostream& out) const {
  for (std::uint32_t id = 0; id < size(); ++id)
    out << entries_[id] << '\t' << id << '\t' << frequency_[id] << '\n';
}

Vocabulary Vocabulary::parse(std::istream& in) {
  struct Row {
    std::string token;
    std::uint64_t count;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    std::uint64_t id = 0, count = 0;
    if (!(ss >> token >> id >> count))
      throw_parse("vocabulary dump: malformed line " + std::to_string(lineno));
    if (id != rows.size())
      throw_parse("vocabulary dump: non-contiguous id at line " + std::to_string(lineno));
    rows.push_back({std::move(token), count});
  }
  Vocabulary v;
  for (auto& r : rows) {
    WordId id = v.add(r.token);
    v.frequency_[id] = r.count;
  }
  return v;
}

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(std::move(tok));
  return tokens;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

namespace {

// Strict "j-i" link token: digits, dash, digits, nothing else.
std::optional<AlignLink> parse_link_token(const std::string& tok) {
  auto dash = tok.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
    return std::nullopt;
  std::uint64_t vals[2] = {0, 0};
  const std::string parts[2] = {tok.substr(0, dash), tok.substr(dash + 1)};
  for (int p = 0; p < 2; ++p) {
    for (char c : parts[p]) {
      if (c < '0' || c > '9') return std::nullopt;
      vals[p] = vals[p] * 10 + static_cast<std::uint64_t>(c - '0');
      if (vals[p] > 0xffffffffull) return std::nullopt;
    }
  }
  return AlignLink{static_cast<std::uint32_t>(vals[0]),
                   static_cast<std::uint32_t>(vals[1])};
}

std::vector<WordId> encode_line(const std::string& line, Vocabulary& vocab) {
  std::vector<WordId> ids;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) ids.push_back(vocab.add(tok));
  return ids;
}

}  // namespace

ParallelCorpus load_parallel_corpus(const std::filesystem::path& source_path,
                                    const std::filesystem::path& target_path,
                                    const std::filesystem::path& alignment_path) {
  auto src_lines = read_lines(source_path);
  auto tgt_lines = read_lines(target_path);
  auto aln_lines = read_lines(alignment_path);

  if (src_lines.size() != tgt_lines.size() || src_lines.size() != aln_lines.size()) {
    std::size_t first_diff =
        std::min({src_lines.size(), tgt_lines.size(), aln_lines.size()}) + 1;
    throw_parse("line count mismatch: " + source_path.string() + " has " +
                std::to_string(src_lines.size()) + " lines, " +
                target_path.string() + " has " + std::to_string(tgt_lines.size()) +
                ", " + alignment_path.string() + " has " +
                std::to_string(aln_lines.size()) + " (first differing line " +
                std::to_string(first_diff) + ")");
  }

  ParallelCorpus corpus;
  corpus.pairs.reserve(src_lines.size());
  for (std::size_t n = 0; n < src_lines.size(); ++n) {
    AlignedSentencePair pair;
    pair.source = encode_line(src_lines[n], corpus.source_vocab);
    pair.target = encode_line(tgt_lines[n], corpus.target_vocab);

    std::istringstream ss(aln_lines[n]);
    std::string tok;
    while (ss >> tok) {
      auto link = parse_link_token(tok);
      if (!link)
        throw_parse(alignment_path.string() + ":" + std::to_string(n + 1) +
                    ": malformed alignment token '" + tok + "'");
      if (link->src >= pair.source.size() || link->tgt >= pair.target.size())
        throw_parse(alignment_path.string() + ":" + std::to_string(n + 1) +
                    ": alignment '" + tok + "' out of range (source index " +
                    std::to_string(link->src) + ", target index " +
                    std::to_string(link->tgt) + ", sentence lengths " +
                    std::to_string(pair.source.size()) + "/" +
                    std::to_string(pair.target.size()) + ")");
      pair.links.push_back(*link);
    }
    std::sort(pair.links.begin(), pair.links.end());
    pair.links.erase(std::unique(pair.links.begin(), pair.links.end()),
                     pair.links.end());
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

ParallelCorpus ParallelCorpus::prefix(double fraction) const {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw_invalid("subsample fraction must be in (0,1], got " +
                  std::to_string(fraction));
  std::size_t n = pairs.size();
  auto keep = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  keep = std::min(n, std::max<std::size_t>(n == 0 ? 0 : 1, keep));

  ParallelCorpus out;
  out.pairs.reserve(keep);
  for (std::size_t p = 0; p < keep; ++p) {
    const auto& old = pairs[p];
    AlignedSentencePair pair;
    pair.links = old.links;
    pair.source.reserve(old.source.size());
    for (WordId w : old.source)
      pair.source.push_back(out.source_vocab.add(source_vocab.token(w)));
    pair.target.reserve(old.target.size());
    for (WordId w : old.target)
      pair.target.push_back(out.target_vocab.add(target_vocab.token(w)));
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

double oov_rate(const std::filesystem::path& test_path, const Vocabulary& vocab) {
  std::ifstream in(test_path);
  if (!in) throw_io("cannot open " + test_path.string());
  std::uint64_t total = 0, unknown = 0;
  std::string tok;
  while (in >> tok) {
    ++total;
    if (!vocab.lookup(tok)) ++unknown;
  }
  if (total == 0)
    throw_invalid("test file " + test_path.string() +
                  " contains no tokens; OOV rate undefined");
  return static_cast<double>(unknown) / static_cast<double>(total);
}

}  // namespace ps
