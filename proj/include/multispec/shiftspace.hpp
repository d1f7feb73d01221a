#pragma once

// Combinatorics of one-sided topological Markov shifts: zero-one transition
// matrices, admissible words, higher-block recoding and symbol relabelings.
//
// Symbols are 0-based internally. Text I/O uses 1-based digit strings.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace multispec {

using Word = std::vector<int>;
using ZeroOneArray = std::vector<std::vector<int>>;

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

struct AperiodicityReport {
  bool accepted = false;
  int power = 0;  // least k with A^k > 0, when accepted
  std::string reason;
};

/// Least k <= N^2 - 2N + 2 with A^k entrywise positive, or a rejection.
AperiodicityReport check_aperiodic(const ZeroOneArray& entries);

/// Aperiodic zero-one matrix. Construction validates; instances are immutable.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(ZeroOneArray entries);

  int size() const { return static_cast<int>(entries_.size()); }
  bool allowed(int i, int j) const { return entries_[i][j] != 0; }
  int aperiodicity_power() const { return power_; }
  const ZeroOneArray& entries() const { return entries_; }
  std::size_t edge_count() const;

  Eigen::MatrixXd as_real() const;

  bool operator==(const TransitionMatrix& other) const {
    return entries_ == other.entries_;
  }

  static TransitionMatrix full_shift(int n);
  static TransitionMatrix golden_mean();  // [[1,1],[1,0]]

 private:
  ZeroOneArray entries_;
  int power_ = 0;
};

bool is_admissible(const TransitionMatrix& a, std::span<const int> word);

/// Number of admissible words of length n, from sums of A^(n-1). Saturates at
/// UINT64_MAX instead of overflowing.
std::uint64_t count_admissible_words(const TransitionMatrix& a, int n);

/// All admissible words of length n in lexicographic order.
std::vector<Word> admissible_words(const TransitionMatrix& a, int n,
                                   std::size_t cap = kDefaultEnumerationCap);

struct OutDegrees {
  std::vector<int> delta;
  bool condition_a1 = false;  // at most one state with a single follower
};

OutDegrees out_degrees(const TransitionMatrix& a);

/// Higher-block presentation. States are admissible words of length
/// `block_length`; u -> w iff u and w overlap in block_length - 1 symbols.
struct HigherBlockCode {
  TransitionMatrix recoded;
  std::vector<Word> alphabet;
  int block_length = 0;

  /// Maps a recoded word of length m >= 1 to its original word of length
  /// m + block_length - 1. The empty word maps to the empty word.
  Word translate(std::span<const int> recoded_word) const;
  /// Index of an original word of length block_length in the alphabet.
  int state_of(std::span<const int> block) const;
};

/// Recoding used to reduce order-n potentials to order 2. The block length is
/// n - 1 for n >= 3 and 2 for n = 2 (the 2-block edge presentation).
HigherBlockCode higher_block_recode(const TransitionMatrix& a, int n,
                                    std::size_t cap = kDefaultEnumerationCap);

struct PermutationResult {
  bool valid = false;
  ZeroOneArray permuted;  // permuted(i,j) = A(perm(i), perm(j))
};

PermutationResult symbol_permutation(const TransitionMatrix& a,
                                     std::span<const int> perm);

std::string format_word(std::span<const int> word);  // 1-based, e.g. "12"
Word parse_word(std::string_view text, int n_symbols);

}  // namespace multispec
