#include "multispec/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "multispec/errors.hpp"

namespace multispec {

Potential::Potential(TransitionMatrix base, int order,
                     std::vector<double> values, std::size_t cap)
    : base_(std::move(base)), order_(order), values_(std::move(values)) {
  if (order_ < 1) throw ValidationError("potential order must be at least 1");
  words_ = admissible_words(base_, order_, cap);
  if (words_.size() != values_.size())
    throw ValidationError("potential of order " + std::to_string(order_) +
                          " needs " + std::to_string(words_.size()) +
                          " values, got " + std::to_string(values_.size()));
  for (double x : values_)
    if (!std::isfinite(x)) throw ValidationError("potential value is not finite");
  const int n = base_.size();
  edge_weights_ = Eigen::MatrixXd::Zero(n, n);
  if (order_ == 2)
    for (std::size_t k = 0; k < words_.size(); ++k)
      edge_weights_(words_[k][0], words_[k][1]) = values_[k];
}

Potential Potential::from_words(TransitionMatrix base, int order,
                                const std::map<Word, double>& table) {
  const auto words = admissible_words(base, order);
  std::vector<double> values;
  values.reserve(words.size());
  for (const auto& w : words) {
    const auto it = table.find(w);
    if (it == table.end())
      throw ValidationError("potential has no value for word " +
                            format_word(w));
    values.push_back(it->second);
  }
  if (table.size() != words.size()) {
    for (const auto& [w, x] : table)
      if (!std::binary_search(words.begin(), words.end(), w))
        throw ValidationError("potential has a value for word " +
                              format_word(w) + " which is not admissible");
  }
  return Potential(std::move(base), order, std::move(values));
}

Potential Potential::constant(TransitionMatrix base, double c, int order) {
  const auto count = count_admissible_words(base, order);
  return Potential(std::move(base), order,
                   std::vector<double>(static_cast<std::size_t>(count), c));
}

Potential Potential::log_of(const SupportMatrix& m) {
  return from_edge_weights(m.base(), m.values().array().log().matrix());
}

Potential Potential::from_edge_weights(TransitionMatrix base,
                                       const Eigen::MatrixXd& weights) {
  std::vector<double> values;
  for (const auto& w : admissible_words(base, 2))
    values.push_back(weights(w[0], w[1]));
  return Potential(std::move(base), 2, std::move(values));
}

double Potential::at(std::span<const int> word) const {
  if (static_cast<int>(word.size()) != order_)
    throw ValidationError("potential of order " + std::to_string(order_) +
                          " evaluated on a word of length " +
                          std::to_string(word.size()));
  const Word key(word.begin(), word.end());
  const auto it = std::lower_bound(words_.begin(), words_.end(), key);
  if (it == words_.end() || *it != key)
    throw ValidationError("word is not admissible");
  return values_[static_cast<std::size_t>(it - words_.begin())];
}

const Eigen::MatrixXd& Potential::edge_weights() const {
  if (order_ != 2)
    throw ValidationError("edge weights need an order-2 potential");
  return edge_weights_;
}

Potential Potential::scaled(double q) const {
  auto values = values_;
  for (double& x : values) x *= q;
  return Potential(base_, order_, std::move(values));
}

Potential Potential::shifted(double c) const {
  auto values = values_;
  for (double& x : values) x += c;
  return Potential(base_, order_, std::move(values));
}

Potential Potential::relabeled(std::span<const int> perm) const {
  auto permuted = symbol_permutation(base_, perm);
  TransitionMatrix base(std::move(permuted.permuted));
  std::map<Word, double> table;
  for (const auto& w : admissible_words(base, order_)) {
    Word image(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) image[k] = perm[w[k]];
    table[w] = at(image);
  }
  return from_words(std::move(base), order_, table);
}

ReducedPotential reduce_to_order2(const Potential& f, std::size_t cap) {
  if (f.order() == 2) return {f, std::nullopt};
  if (f.order() == 1) {
    const int n = f.base().size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const int sym[1] = {i};
      w.row(i).setConstant(f.at(sym));
    }
    return {Potential::from_edge_weights(f.base(), w), std::nullopt};
  }
  auto code = higher_block_recode(f.base(), f.order(), cap);
  const int m = code.recoded.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (code.recoded.allowed(u, v)) {
        const int pair[2] = {u, v};
        w(u, v) = f.at(code.translate(pair));
      }
  auto edge = Potential::from_edge_weights(code.recoded, w);
  return {std::move(edge), std::move(code)};
}

namespace {

const Potential& require_edge(const Potential& f) {
  if (f.order() != 2)
    throw ValidationError(
        "operation needs an order-2 potential; reduce it first");
  return f;
}

Potential lift_if_needed(const Potential& f) {
  if (f.order() == 1) return reduce_to_order2(f).edge;
  return require_edge(f);
}

}  // namespace

TransferData transfer_data(const Potential& f2, double q,
                           const PerronOptions& options) {
  const auto& base = require_edge(f2).base();
  const Eigen::MatrixXd& w = f2.edge_weights();
  const int n = base.size();
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (base.allowed(i, j)) shift = std::max(shift, q * w(i, j));
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (base.allowed(i, j)) {
        values(i, j) = std::exp(q * w(i, j) - shift);
        if (values(i, j) == 0.0)
          throw ConvergenceError(
              "edge weight underflows at q = " + std::to_string(q) +
              "; potential range too wide for this q");
      }
  SupportMatrix scaled(base, std::move(values));
  auto triple = perron(scaled, options);
  const double log_root = std::log(triple.root) + shift;
  return TransferData{std::move(scaled), shift, std::move(triple), log_root};
}

SupportMatrix edge_matrix(const Potential& f) {
  const Potential f2 = lift_if_needed(f);
  return SupportMatrix(f2.base(), [&] {
    const int n = f2.base().size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (f2.base().allowed(i, j)) m(i, j) = std::exp(f2.edge(i, j));
    return m;
  }());
}

double pressure(const Potential& f) {
  return transfer_data(reduce_to_order2(f).edge).log_root;
}

double pressure_by_preimages(const Potential& f, int terminal, int depth) {
  const Potential f2 = lift_if_needed(f);
  if (depth < 2) throw ValidationError("preimage depth must be at least 2");
  const int n = f2.base().size();
  if (terminal < 0 || terminal >= n)
    throw ValidationError("terminal symbol out of range");
  const auto data = transfer_data(f2);
  const Eigen::MatrixXd& a = data.scaled.values();
  // Column vector A^m e_terminal, renormalized each step; only the ratio of
  // the last two column sums is needed.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x(terminal) = 1.0;
  double ratio = 1.0;
  for (int m = 1; m <= depth; ++m) {
    const double previous = x.sum();
    x = a * x;
    ratio = x.sum() / previous;
    x /= x.sum();
  }
  return std::log(ratio) + data.shift;
}

MarkovMeasure::MarkovMeasure(SupportMatrix transition,
                             Eigen::VectorXd stationary)
    : transition_(std::move(transition)), stationary_(std::move(stationary)) {
  const int n = transition_.size();
  if (stationary_.size() != n)
    throw ValidationError("stationary vector has the wrong length");
  for (int i = 0; i < n; ++i)
    if (std::abs(transition_.values().row(i).sum() - 1.0) > 1e-12)
      throw ValidationError("transition matrix is not row-stochastic");
  if (!(stationary_.minCoeff() > 0.0) ||
      std::abs(stationary_.sum() - 1.0) > 1e-12)
    throw ValidationError("stationary vector is not a positive distribution");
  const Eigen::VectorXd moved =
      transition_.values().transpose() * stationary_;
  if ((moved - stationary_).lpNorm<Eigen::Infinity>() > 1e-10)
    throw ValidationError("vector is not stationary for the transition matrix");
}

double MarkovMeasure::log_cylinder(std::span<const int> word) const {
  if (word.empty()) return 0.0;
  if (!is_admissible(transition_.base(), word))
    return -std::numeric_limits<double>::infinity();
  double total = std::log(stationary_(word[0]));
  for (std::size_t k = 1; k < word.size(); ++k)
    total += std::log(transition_(word[k - 1], word[k]));
  return total;
}

double MarkovMeasure::cylinder(std::span<const int> word) const {
  if (word.size() > 30) return std::exp(log_cylinder(word));
  if (word.empty()) return 1.0;
  if (!is_admissible(transition_.base(), word)) return 0.0;
  double total = stationary_(word[0]);
  for (std::size_t k = 1; k < word.size(); ++k)
    total *= transition_(word[k - 1], word[k]);
  return total;
}

MarkovMeasure gibbs_markov(const Potential& f) {
  const Potential f2 = lift_if_needed(f);
  const auto data = transfer_data(f2);
  const auto& a = data.scaled.values();
  const auto& v = data.perron.right;
  const auto& u = data.perron.left;
  const double root = data.perron.root;
  const int n = f2.base().size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (f2.base().allowed(i, j)) p(i, j) = a(i, j) * v(j) / (root * v(i));
    p.row(i) /= p.row(i).sum();
  }
  Eigen::VectorXd pi = u.cwiseProduct(v);
  pi /= pi.sum();
  return MarkovMeasure(SupportMatrix(f2.base(), std::move(p)), std::move(pi));
}

double cylinder_measure(const MarkovMeasure& mu, std::span<const int> word) {
  return mu.cylinder(word);
}

double birkhoff_sum(const Potential& f, std::span<const int> word, int count) {
  if (count < 0) throw ValidationError("Birkhoff count must be non-negative");
  const std::size_t needed = count == 0 ? 0 : static_cast<std::size_t>(count) +
                                                  f.order() - 1;
  if (word.size() < needed)
    throw ValidationError("word of length " + std::to_string(word.size()) +
                          " is too short for S_" + std::to_string(count) +
                          " of an order-" + std::to_string(f.order()) +
                          " potential");
  double total = 0.0;
  for (int k = 0; k < count; ++k) total += f.at(word.subspan(k, f.order()));
  return total;
}

Potential normalize_potential(const Potential& f) {
  const Potential f2 = lift_if_needed(f);
  const auto data = transfer_data(f2);
  const auto& u = data.perron.left;
  const int n = f2.base().size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (f2.base().allowed(i, j))
        w(i, j) = f2.edge(i, j) + std::log(u(i)) - std::log(u(j));
  return Potential::from_edge_weights(f2.base(), w);
}

double jacobian(const Potential& f, std::span<const int> word,
                JacobianKind kind) {
  if (word.size() < 2)
    throw ValidationError("Jacobian needs a word of length at least 2");
  const Potential f2 = lift_if_needed(f);
  if (!is_admissible(f2.base(), word))
    throw ValidationError("Jacobian evaluated on an inadmissible word");
  const double p = pressure(f2);
  const Potential& g =
      kind == JacobianKind::kGibbs ? normalize_potential(f2) : f2;
  return std::exp(g.edge(word[0], word[1]) - p);
}

double eigen_measure_cylinder(const Potential& f, std::span<const int> word) {
  const Potential f2 = lift_if_needed(f);
  if (word.empty()) return 1.0;
  const auto data = transfer_data(f2);
  return gibbs_markov(f2).cylinder(word) / data.perron.left(word[0]);
}

GibbsAudit gibbs_constant_audit(const Potential& f, int depth,
                                std::size_t cap) {
  if (depth < 1) throw ValidationError("audit depth must be at least 1");
  const Potential f2 = lift_if_needed(f);
  const auto& base = f2.base();
  std::uint64_t total = 0;
  for (int m = 1; m <= depth; ++m) {
    const auto c = count_admissible_words(base, m + 1);
    total = c > std::numeric_limits<std::uint64_t>::max() - total
                ? std::numeric_limits<std::uint64_t>::max()
                : total + c;
  }
  if (total > cap)
    throw ResourceError("audit of depth " + std::to_string(depth) +
                        " needs " + std::to_string(total) +
                        " cylinders, over the cap of " + std::to_string(cap));

  const auto data = transfer_data(f2);
  const auto mu = gibbs_markov(f2);
  const double p = data.log_root;
  const auto& v = data.perron.right;
  const int n = base.size();

  GibbsAudit audit;
  audit.pressure = p;
  audit.depth = depth;
  audit.cylinders = total;

  // ratio(w) = pi_(w0) v_(w_(m-1)) lambda / (v_(w0) A_(w_(m-1) w_m))
  double first_lo = std::numeric_limits<double>::infinity(), first_hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = mu.stationary()(i) / v(i);
    first_lo = std::min(first_lo, x);
    first_hi = std::max(first_hi, x);
  }
  double edge_lo = std::numeric_limits<double>::infinity(), edge_hi = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (base.allowed(j, k)) {
        const double x = v(j) * std::exp(p - f2.edge(j, k));
        edge_lo = std::min(edge_lo, x);
        edge_hi = std::max(edge_hi, x);
      }
  audit.theoretical_min = first_lo * edge_lo;
  audit.theoretical_max = first_hi * edge_hi;
  audit.constant = std::max(audit.theoretical_max, 1.0 / audit.theoretical_min);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  // Depth-first over words; `log_mu_prefix` is log mu of the word without its
  // last symbol, `sum` is S_m f over all m edges of the word.
  Word word;
  auto visit = [&](auto&& self, double log_mu_prefix, double log_mu_word,
                   double sum) -> void {
    const int m = static_cast<int>(word.size()) - 1;
    if (m >= 1) {
      const double log_ratio = log_mu_prefix + m * p - sum;
      lo = std::min(lo, log_ratio);
      hi = std::max(hi, log_ratio);
    }
    if (m == depth) return;
    const int last = word.back();
    for (int s = 0; s < n; ++s) {
      if (!base.allowed(last, s)) continue;
      word.push_back(s);
      self(self, log_mu_word,
           log_mu_word + std::log(mu.transition()(last, s)),
           sum + f2.edge(last, s));
      word.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    word.assign(1, s);
    visit(visit, 0.0, std::log(mu.stationary()(s)), 0.0);
  }
  audit.observed_min = std::exp(lo);
  audit.observed_max = std::exp(hi);
  const double slack = 1e-12 * audit.constant;
  audit.within_bounds = audit.observed_min >= 1.0 / audit.constant - slack &&
                        audit.observed_max <= audit.constant + slack;
  return audit;
}

double entropy_rate(const MarkovMeasure& mu) {
  const auto& p = mu.transition().values();
  double h = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    double row = 0.0;
    for (int j = 0; j < mu.size(); ++j)
      if (p(i, j) > 0.0) row -= p(i, j) * std::log(p(i, j));
    h += mu.stationary()(i) * row;
  }
  return h;
}

}  // namespace multispec
