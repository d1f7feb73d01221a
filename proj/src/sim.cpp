#include "multispec/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "multispec/errors.hpp"
#include "multispec/random.hpp"
#include "multispec/spectrum.hpp"

namespace multispec {

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) total += values[k];
    return total;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

namespace {

// Inverse-CDF tables for a Markov chain plus the log-masses of the measure
// the path is scored under.
class PathScorer {
 public:
  PathScorer(const MarkovMeasure& sampler, const MarkovMeasure& target)
      : n_(sampler.size()) {
    if (target.size() != n_)
      throw ValidationError("sampling and target measures differ in size");
    initial_.resize(n_);
    std::partial_sum(sampler.stationary().begin(), sampler.stationary().end(),
                     initial_.begin());
    rows_.assign(n_, std::vector<double>(n_, 0.0));
    log_p_.assign(n_, std::vector<double>(n_, 0.0));
    log_pi_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n_; ++j) {
        acc += sampler.transition()(i, j);
        rows_[i][j] = acc;
        const double t = target.transition()(i, j);
        log_p_[i][j] = t > 0.0 ? std::log(t)
                               : -std::numeric_limits<double>::infinity();
      }
      log_pi_[i] = std::log(target.stationary()(i));
    }
  }

  // Draws a path of `length` symbols; returns log target([w]).
  double run(int length, std::mt19937_64& engine, Word* word) const {
    int state = draw(initial_, engine);
    if (word) word->push_back(state);
    double log_mass = log_pi_[state];
    for (int k = 1; k < length; ++k) {
      const int next = draw(rows_[state], engine);
      log_mass += log_p_[state][next];
      state = next;
      if (word) word->push_back(state);
    }
    return log_mass;
  }

 private:
  int draw(const std::vector<double>& cumulative,
           std::mt19937_64& engine) const {
    const double x = uniform01(engine) * cumulative.back();
    for (int j = 0; j < n_ - 1; ++j)
      if (x < cumulative[j]) return j;
    // Rounding in the last partial sum: fall back to the last allowed symbol.
    for (int j = n_ - 1; j > 0; --j)
      if (cumulative[j] > cumulative[j - 1]) return j;
    return 0;
  }

  int n_;
  std::vector<double> initial_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> log_p_;
  std::vector<double> log_pi_;
};

std::vector<double> run_trials(const PathScorer& scorer, int length,
                               std::size_t trials, std::uint64_t seed,
                               unsigned threads) {
  std::vector<double> exponents(trials);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      auto engine = stream_engine(seed, t);
      exponents[t] = -scorer.run(length, engine, nullptr) / length;
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || trials < 2 * threads) {
    work(0, trials);
    return exponents;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (trials + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t begin = k * chunk;
    const std::size_t end = std::min(trials, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& t : pool) t.join();
  return exponents;
}

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const auto count = static_cast<double>(x.size());
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  m.min = *lo;
  m.max = *hi;
  if (m.min == m.max) {
    m.mean = m.min;
    return m;
  }
  m.mean = pairwise_sum(x.data(), x.size()) / count;
  std::vector<double> sq(x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    sq[k] = (x[k] - m.mean) * (x[k] - m.mean);
  const double variance = pairwise_sum(sq.data(), sq.size()) / (count - 1.0);
  m.std_error = std::sqrt(variance / count);
  return m;
}

}  // namespace

PathSample sample_path(const MarkovMeasure& mu, int length, std::uint64_t seed,
                       std::uint64_t stream) {
  if (length < 1) throw ValidationError("path length must be at least 1");
  PathScorer scorer(mu, mu);
  auto engine = stream_engine(seed, stream);
  PathSample out;
  out.seed = seed;
  out.stream = stream;
  out.word.reserve(static_cast<std::size_t>(length));
  out.log_measure = scorer.run(length, engine, &out.word);
  return out;
}

LocalEntropyStats empirical_local_entropy(const MarkovMeasure& mu, int length,
                                          std::size_t trials,
                                          std::uint64_t seed,
                                          const HistogramOptions& histogram,
                                          unsigned threads) {
  if (length < 1) throw ValidationError("path length must be at least 1");
  if (trials < 100) throw ValidationError("need at least 100 trials");
  if (histogram.buckets < 1)
    throw ValidationError("histogram needs at least one bucket");
  const PathScorer scorer(mu, mu);
  LocalEntropyStats out;
  out.exponents = run_trials(scorer, length, trials, seed, threads);
  const auto m = moments(out.exponents);
  out.mean = m.mean;
  out.std_error = m.std_error;
  out.min = m.min;
  out.max = m.max;

  double low = 0.0, high = 0.0;
  if (histogram.low && histogram.high) {
    low = *histogram.low;
    high = *histogram.high;
  } else {
    const auto range = alpha_range(Potential::log_of(mu.transition()));
    low = histogram.low.value_or(range.alpha_min - 5.0 / length);
    high = histogram.high.value_or(range.alpha_max + 5.0 / length);
  }
  if (!(high > low)) throw ValidationError("histogram range is empty");
  const double width = (high - low) / histogram.buckets;
  out.histogram.resize(static_cast<std::size_t>(histogram.buckets));
  for (int b = 0; b < histogram.buckets; ++b) {
    out.histogram[b].low = low + b * width;
    out.histogram[b].high = b + 1 == histogram.buckets ? high
                                                       : low + (b + 1) * width;
  }
  for (double x : out.exponents) {
    if (x < low) {
      ++out.below;
    } else if (x > high) {
      ++out.above;
    } else {
      const auto b = std::min<long>(static_cast<long>((x - low) / width),
                                    histogram.buckets - 1);
      ++out.histogram[static_cast<std::size_t>(b)].count;
    }
  }
  return out;
}

std::vector<EmpiricalSpectrumRow> empirical_spectrum_histogram(
    const Potential& f, int length, std::size_t trials,
    const std::vector<double>& q_list, std::uint64_t seed, unsigned threads) {
  if (length < 1) throw ValidationError("path length must be at least 1");
  if (trials < 1) throw ValidationError("need at least one trial");
  const BetaFunction b(f);
  const Potential& f2 = b.edge_potential();
  const auto target = gibbs_markov(f2);
  std::vector<EmpiricalSpectrumRow> rows;
  for (std::size_t k = 0; k < q_list.size(); ++k) {
    const double q = q_list[k];
    const PathScorer scorer(gibbs_markov(f2.scaled(q)), target);
    const auto exponents =
        run_trials(scorer, length, trials, splitmix64(seed + k), threads);
    const auto m = moments(exponents);
    rows.push_back({q, m.mean, m.std_error, b.alpha(q)});
  }
  return rows;
}

}  // namespace multispec
