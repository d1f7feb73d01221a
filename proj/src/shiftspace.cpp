#include "multispec/shiftspace.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "multispec/errors.hpp"

namespace multispec {

namespace {

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y) {
  const std::size_t n = x.size();
  BoolMatrix out(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!x[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (y[k][j]) out[i][j] = 1;
    }
  return out;
}

bool all_positive(const BoolMatrix& m) {
  for (const auto& row : m)
    for (char c : row)
      if (!c) return false;
  return true;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

}  // namespace

AperiodicityReport check_aperiodic(const ZeroOneArray& entries) {
  AperiodicityReport report;
  const std::size_t n = entries.size();
  if (n < 2) {
    report.reason = "need at least 2 symbols";
    return report;
  }
  for (const auto& row : entries) {
    if (row.size() != n) {
      report.reason = "matrix is not square";
      return report;
    }
    for (int x : row)
      if (x != 0 && x != 1) {
        report.reason = "entries must be 0 or 1";
        return report;
      }
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool row_hit = false, col_hit = false;
    for (std::size_t j = 0; j < n; ++j) {
      row_hit |= entries[i][j] == 1;
      col_hit |= entries[j][i] == 1;
    }
    if (!row_hit) {
      report.reason = "row " + std::to_string(i + 1) + " is all zero";
      return report;
    }
    if (!col_hit) {
      report.reason = "column " + std::to_string(i + 1) + " is all zero";
      return report;
    }
  }

  BoolMatrix base(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) base[i][j] = entries[i][j] == 1;

  const int wielandt = static_cast<int>(n * n - 2 * n + 2);
  BoolMatrix power = base;
  for (int k = 1; k <= wielandt; ++k) {
    if (all_positive(power)) {
      report.accepted = true;
      report.power = k;
      return report;
    }
    power = bool_product(power, base);
  }
  report.reason = "matrix is not aperiodic (no positive power up to " +
                  std::to_string(wielandt) + ")";
  return report;
}

TransitionMatrix::TransitionMatrix(ZeroOneArray entries)
    : entries_(std::move(entries)) {
  const auto report = check_aperiodic(entries_);
  if (!report.accepted)
    throw ValidationError("transition matrix rejected: " + report.reason);
  power_ = report.power;
}

std::size_t TransitionMatrix::edge_count() const {
  std::size_t count = 0;
  for (const auto& row : entries_)
    for (int x : row) count += static_cast<std::size_t>(x);
  return count;
}

Eigen::MatrixXd TransitionMatrix::as_real() const {
  const int n = size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries_[i][j];
  return m;
}

TransitionMatrix TransitionMatrix::full_shift(int n) {
  return TransitionMatrix(ZeroOneArray(n, std::vector<int>(n, 1)));
}

TransitionMatrix TransitionMatrix::golden_mean() {
  return TransitionMatrix({{1, 1}, {1, 0}});
}

bool is_admissible(const TransitionMatrix& a, std::span<const int> word) {
  for (int s : word)
    if (s < 0 || s >= a.size()) return false;
  for (std::size_t k = 1; k < word.size(); ++k)
    if (!a.allowed(word[k - 1], word[k])) return false;
  return true;
}

std::uint64_t count_admissible_words(const TransitionMatrix& a, int n) {
  if (n <= 0) return 1;
  const int size = a.size();
  // ends[j] = number of admissible words of the current length ending in j
  std::vector<std::uint64_t> ends(size, 1);
  for (int len = 1; len < n; ++len) {
    std::vector<std::uint64_t> next(size, 0);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (a.allowed(i, j)) next[j] = saturating_add(next[j], ends[i]);
    ends = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto c : ends) total = saturating_add(total, c);
  return total;
}

std::vector<Word> admissible_words(const TransitionMatrix& a, int n,
                                   std::size_t cap) {
  if (n < 0) throw ValidationError("word length must be non-negative");
  const std::uint64_t count = count_admissible_words(a, n);
  if (count > cap)
    throw ResourceError("enumerating " + std::to_string(count) +
                        " words of length " + std::to_string(n) +
                        " exceeds the cap of " + std::to_string(cap));
  std::vector<Word> out;
  out.reserve(count);
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  Word current;
  current.reserve(n);
  // Depth-first in increasing symbol order yields lexicographic output.
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == n) {
      out.push_back(current);
      return;
    }
    for (int s = 0; s < a.size(); ++s) {
      if (!current.empty() && !a.allowed(current.back(), s)) continue;
      current.push_back(s);
      self(self);
      current.pop_back();
    }
  };
  extend(extend);
  return out;
}

OutDegrees out_degrees(const TransitionMatrix& a) {
  OutDegrees out;
  int singles = 0;
  for (int i = 0; i < a.size(); ++i) {
    int d = 0;
    for (int j = 0; j < a.size(); ++j) d += a.allowed(i, j) ? 1 : 0;
    out.delta.push_back(d);
    singles += d == 1 ? 1 : 0;
  }
  out.condition_a1 = singles <= 1;
  return out;
}

Word HigherBlockCode::translate(std::span<const int> recoded_word) const {
  if (recoded_word.empty()) return {};
  Word out = alphabet.at(recoded_word[0]);
  for (std::size_t k = 1; k < recoded_word.size(); ++k)
    out.push_back(alphabet.at(recoded_word[k]).back());
  return out;
}

int HigherBlockCode::state_of(std::span<const int> block) const {
  const Word key(block.begin(), block.end());
  const auto it = std::lower_bound(alphabet.begin(), alphabet.end(), key);
  if (it == alphabet.end() || *it != key)
    throw ValidationError("word " + format_word(block) +
                          " is not a state of the recoded shift");
  return static_cast<int>(it - alphabet.begin());
}

HigherBlockCode higher_block_recode(const TransitionMatrix& a, int n,
                                    std::size_t cap) {
  if (n < 2) throw ValidationError("recoding order must be at least 2");
  const int block = std::max(n - 1, 2);
  auto alphabet = admissible_words(a, block, cap);
  if (alphabet.size() > 46'000)
    throw ResourceError("recoded alphabet of " +
                        std::to_string(alphabet.size()) +
                        " states is too large for a dense matrix");
  const std::size_t m = alphabet.size();
  ZeroOneArray entries(m, std::vector<int>(m, 0));
  // Group states by their length-(block-1) prefix to find overlaps quickly.
  std::map<Word, std::vector<int>> by_prefix;
  for (std::size_t w = 0; w < m; ++w)
    by_prefix[Word(alphabet[w].begin(), alphabet[w].end() - 1)].push_back(
        static_cast<int>(w));
  for (std::size_t u = 0; u < m; ++u) {
    const Word suffix(alphabet[u].begin() + 1, alphabet[u].end());
    const auto it = by_prefix.find(suffix);
    if (it == by_prefix.end()) continue;
    // Overlapping admissible blocks always concatenate to an admissible word.
    for (int w : it->second) entries[u][w] = 1;
  }
  return HigherBlockCode{TransitionMatrix(std::move(entries)),
                         std::move(alphabet), block};
}

PermutationResult symbol_permutation(const TransitionMatrix& a,
                                     std::span<const int> perm) {
  const int n = a.size();
  if (static_cast<int>(perm.size()) != n)
    throw ValidationError("permutation has the wrong length");
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw ValidationError("not a permutation of the alphabet");
    seen[p] = 1;
  }
  PermutationResult out;
  out.permuted.assign(n, std::vector<int>(n, 0));
  out.valid = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.permuted[i][j] = a.entries()[perm[i]][perm[j]];
      if (out.permuted[i][j] != a.entries()[i][j]) out.valid = false;
    }
  return out;
}

std::string format_word(std::span<const int> word) {
  std::string out;
  for (int s : word) {
    if (s < 0 || s > 8)
      throw ValidationError("symbol " + std::to_string(s + 1) +
                            " cannot be written as a single digit");
    out.push_back(static_cast<char>('1' + s));
  }
  return out;
}

Word parse_word(std::string_view text, int n_symbols) {
  Word out;
  out.reserve(text.size());
  for (char c : text) {
    const int s = c - '1';
    if (c < '1' || c > '9' || s >= n_symbols)
      throw ParseError("invalid symbol '" + std::string(1, c) + "' in word \"" +
                       std::string(text) + "\"");
    out.push_back(s);
  }
  return out;
}

}  // namespace multispec
