#pragma once

// Monte-Carlo sampling of Markov measures and empirical local exponents
// -(1/n) log mu([w|n]).

#include <cstdint>
#include <optional>
#include <vector>

#include "multispec/thermo.hpp"

namespace multispec {

struct PathSample {
  Word word;
  double log_measure = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// First symbol from the stationary vector, then transitions row by row.
PathSample sample_path(const MarkovMeasure& mu, int length, std::uint64_t seed,
                       std::uint64_t stream = 0);

struct HistogramOptions {
  int buckets = 50;
  std::optional<double> low;   // default alpha_min - 5/n
  std::optional<double> high;  // default alpha_max + 5/n
};

struct HistogramBucket {
  double low = 0.0;
  double high = 0.0;
  std::uint64_t count = 0;
};

struct LocalEntropyStats {
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<HistogramBucket> histogram;
  std::uint64_t below = 0;  // exponents under the first bucket
  std::uint64_t above = 0;  // exponents over the last bucket
  std::vector<double> exponents;
};

/// Exponents of `trials` independent paths of length n. Trial t uses stream t
/// of `seed`; results do not depend on `threads`.
LocalEntropyStats empirical_local_entropy(const MarkovMeasure& mu, int length,
                                          std::size_t trials,
                                          std::uint64_t seed,
                                          const HistogramOptions& histogram = {},
                                          unsigned threads = 1);

struct EmpiricalSpectrumRow {
  double q = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double alpha = 0.0;  // alpha(q) from the beta function
};

/// Samples paths from the Gibbs measure of q f and measures their exponents
/// under the Gibbs measure of f.
std::vector<EmpiricalSpectrumRow> empirical_spectrum_histogram(
    const Potential& f, int length, std::size_t trials,
    const std::vector<double>& q_list, std::uint64_t seed,
    unsigned threads = 1);

/// Pairwise summation; the result depends only on the order of `values`.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace multispec
