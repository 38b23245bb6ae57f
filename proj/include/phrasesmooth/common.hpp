#ifndef PHRASESMOOTH_COMMON_HPP
#define PHRASESMOOTH_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ps {

using WordId = std::uint32_t;
using ClassId = std::uint32_t;

// Token code inside generalized phrases: a plain word-id, or a class-id with
// the top bit set. The two namespaces never collide, so class-generalized
// keys cannot alias literal phrases.
using GenToken = std::uint32_t;

inline constexpr GenToken kClassBit = 0x80000000u;
inline constexpr GenToken class_token(ClassId c) { return kClassBit | c; }
inline constexpr bool is_class_token(GenToken t) { return (t & kClassBit) != 0; }

// Empty word for lexicon models; pairs with unaligned tokens of the other
// side. Reserved below the class bit so it stays outside both namespaces.
inline constexpr GenToken kEmptyToken = 0x7fffffffu;

// Hard cap on vocabulary ids so word ids, kEmptyToken and the class bit
// cannot collide.
inline constexpr std::uint32_t kMaxVocabSize = 0x7fffffffu;

enum class ErrorCode { io, parse, invalid_argument, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorCode::io, msg);
}
[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw Error(ErrorCode::parse, msg);
}
[[noreturn]] inline void throw_invalid(const std::string& msg) {
  throw Error(ErrorCode::invalid_argument, msg);
}

inline std::uint64_t pack64(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

// splitmix64 finalizer; used for hashing and per-sample seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct U64Hash {
  std::size_t operator()(std::uint64_t x) const {
    return static_cast<std::size_t>(mix64(x));
  }
};

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (std::uint32_t x : v) h = mix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

// Deduplicating store for uint32 sequences (phrases, generalized forms).
// Ids are assigned in first-intern order, so runs are reproducible.
class SeqInterner {
 public:
  std::uint32_t intern(std::vector<std::uint32_t> seq) {
    auto it = index_.find(seq);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(seqs_.size());
    index_.emplace(seq, id);
    seqs_.push_back(std::move(seq));
    return id;
  }

  std::optional<std::uint32_t> find(const std::vector<std::uint32_t>& seq) const {
    auto it = index_.find(seq);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::uint32_t>& get(std::uint32_t id) const {
    return seqs_[id];
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(seqs_.size()); }

 private:
  std::vector<std::vector<std::uint32_t>> seqs_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> index_;
};

}  // namespace ps

#endif  // PHRASESMOOTH_COMMON_HPP
