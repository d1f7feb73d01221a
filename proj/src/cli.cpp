#include "multispec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "multispec/errors.hpp"
#include "multispec/model.hpp"
#include "multispec/rigidity.hpp"
#include "multispec/sim.hpp"
#include "multispec/spectrum.hpp"

namespace multispec::cli {

using nlohmann::json;

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file '" + path + "'");
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

int cmd_pressure(const std::string& path, int oracle_depth, int terminal,
                 std::ostream& out) {
  const auto model = load_model(path);
  const auto reduced = reduce_to_order2(model.potential);
  const auto data = transfer_data(reduced.edge);
  json doc;
  doc["pressure"] = data.log_root;
  doc["perron"] = {{"root", std::exp(data.log_root)},
                   {"left", vector_json(data.perron.left)},
                   {"right", vector_json(data.perron.right)},
                   {"residual", data.perron.residual}};
  doc["order"] = model.potential.order();
  doc["states"] = reduced.edge.base().size();
  doc["recoded"] = reduced.code.has_value();
  if (oracle_depth > 0) {
    const int n = reduced.edge.base().size();
    if (terminal > n)
      throw ValidationError("--terminal exceeds the number of states");
    json estimates = json::array();
    double worst = 0.0;
    for (int t = 0; t < n; ++t) {
      if (terminal > 0 && t != terminal - 1) continue;
      const double est = pressure_by_preimages(reduced.edge, t, oracle_depth);
      worst = std::max(worst, std::abs(est - data.log_root));
      estimates.push_back({{"terminal", t + 1}, {"estimate", est}});
    }
    doc["oracle"] = {{"depth", oracle_depth},
                     {"estimates", estimates},
                     {"max_deviation", worst}};
  }
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_spectrum(const std::string& path, double qmin, double qmax,
                 double qstep, const std::string& csv_path,
                 const std::vector<double>& alphas, std::ostream& out) {
  const auto model = load_model(path);
  const auto curve =
      sample_spectrum(model.potential, uniform_grid(qmin, qmax, qstep));
  if (!csv_path.empty()) {
    auto csv = open_output(csv_path);
    csv << "q,alpha,beta,E,flags\n";
    for (const auto& s : curve.samples) {
      std::string flags;
      for (const auto& f : s.flags) flags += (flags.empty() ? "" : ";") + f;
      csv << number(s.q) << ',' << number(s.alpha) << ',' << number(s.beta)
          << ',' << number(s.entropy) << ',' << flags << '\n';
    }
  }
  const SpectrumSample* peak = nullptr;
  std::size_t flagged = 0;
  for (const auto& s : curve.samples) {
    if (!peak || s.entropy > peak->entropy) peak = &s;
    flagged += s.flags.empty() || (s.flags.size() == 1 &&
                                   s.flags[0] == "degenerate")
                   ? 0
                   : 1;
  }
  json doc;
  doc["alpha_min"] = curve.alpha_min;
  doc["alpha_max"] = curve.alpha_max;
  doc["h_top"] = curve.topological_entropy;
  doc["h_mu"] = curve.gibbs_entropy;
  doc["degenerate"] = curve.degenerate;
  doc["samples"] = curve.samples.size();
  doc["flagged_samples"] = flagged;
  if (peak)
    doc["peak"] = {{"q", peak->q}, {"alpha", peak->alpha}, {"E", peak->entropy}};
  if (!alphas.empty()) {
    json evals = json::array();
    for (double a : alphas) {
      const auto v = entropy_spectrum(model.potential, a);
      evals.push_back({{"alpha", a},
                       {"E", v.value},
                       {"q_star", v.q_star ? json(*v.q_star) : json()},
                       {"outside_range", v.outside_range},
                       {"endpoint_extrapolated", v.endpoint_extrapolated}});
    }
    doc["evaluations"] = evals;
  }
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_compare(const std::string& f_path, const std::string& g_path,
                double tol, double qmin, double qmax, double qstep,
                std::ostream& out) {
  const auto f = load_model(f_path);
  const auto g = load_model(g_path);
  const auto verdict = spectra_equal(f.potential, g.potential,
                                     uniform_grid(qmin, qmax, qstep), tol);
  json doc;
  doc["verdict"] = verdict.equal ? "equal" : "distinct";
  doc["equal"] = verdict.equal;
  doc["witness_q"] = verdict.witness_q ? json(*verdict.witness_q) : json();
  doc["witness_gap"] = verdict.witness_gap;
  doc["max_beta_gap"] = verdict.max_beta_gap;
  doc["alpha_min_gap"] = verdict.alpha_min_gap;
  doc["alpha_max_gap"] = verdict.alpha_max_gap;
  doc["reason"] = verdict.reason;
  doc["tol"] = tol;
  doc["grid"] = {{"qmin", qmin}, {"qmax", qmax}, {"qstep", qstep}};
  out << doc.dump(2) << '\n';
  return kOk;
}

json optional_bool(const std::optional<bool>& b) {
  return b ? json(*b) : json();
}

int cmd_classify(const std::string& path, std::ostream& out) {
  const auto model = load_model(path);
  const auto report = classify(model.potential);
  const auto degrees = out_degrees(model.transition());
  json doc;
  doc["case"] = to_string(report.shift_case);
  doc["in_E"] = optional_bool(report.in_e);
  doc["strong_rigid"] = optional_bool(report.strong_rigid);
  doc["weak_rigid"] = optional_bool(report.weak_rigid);
  doc["g2_member"] = report.g2_member;
  doc["g2_margin"] = report.g2_margin;
  doc["condition_A1"] = report.condition_a1;
  doc["delta"] = degrees.delta;
  if (report.detected_kind)
    doc["detected"] = {{"kind", to_string(*report.detected_kind)},
                       {"alpha", *report.detected_alpha}};
  doc["twin"] = report.twin ? to_json(*report.twin) : json();
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_gibbs_audit(const std::string& path, int depth, std::ostream& out,
                    std::ostream& err) {
  const auto model = load_model(path);
  const auto audit =
      gibbs_constant_audit(reduce_to_order2(model.potential).edge, depth);
  json doc;
  doc["pressure"] = audit.pressure;
  doc["constant"] = audit.constant;
  doc["theoretical_min"] = audit.theoretical_min;
  doc["theoretical_max"] = audit.theoretical_max;
  doc["observed_min"] = audit.observed_min;
  doc["observed_max"] = audit.observed_max;
  doc["depth"] = audit.depth;
  doc["cylinders"] = audit.cylinders;
  doc["within_bounds"] = audit.within_bounds;
  out << doc.dump(2) << '\n';
  if (!audit.within_bounds) {
    err << "error: observed ratios leave [1/C, C]\n";
    return kAuditViolation;
  }
  return kOk;
}

int cmd_sample(const std::string& path, int length, std::size_t trials,
               std::uint64_t seed, int buckets, unsigned threads,
               const std::string& csv_path, std::ostream& out) {
  const auto model = load_model(path);
  const auto mu = gibbs_markov(reduce_to_order2(model.potential).edge);
  HistogramOptions hist;
  hist.buckets = buckets;
  const auto stats =
      empirical_local_entropy(mu, length, trials, seed, hist, threads);
  if (!csv_path.empty()) {
    auto csv = open_output(csv_path);
    csv << "bucket_low,bucket_high,count\n";
    for (const auto& b : stats.histogram)
      csv << number(b.low) << ',' << number(b.high) << ',' << b.count << '\n';
  }
  const double target = entropy_rate(mu);
  json doc;
  doc["mean"] = stats.mean;
  doc["std_error"] = stats.std_error;
  doc["target_entropy"] = target;
  doc["within_3_std_errors"] =
      std::abs(stats.mean - target) <= 3.0 * stats.std_error + 1e-12;
  doc["min"] = stats.min;
  doc["max"] = stats.max;
  doc["below_range"] = stats.below;
  doc["above_range"] = stats.above;
  doc["n"] = length;
  doc["trials"] = trials;
  doc["seed"] = seed;
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_recode(const std::string& path, const std::string& out_path,
               std::ostream& out) {
  const auto model = load_model(path);
  const auto doc = to_json(reduce_to_order2(model.potential).edge);
  if (out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    open_output(out_path) << doc.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pressure, Gibbs measures and entropy spectra on Markov shifts",
               "multispec"};
  app.require_subcommand(1);

  std::string model, other, csv;
  int oracle_depth = 0, terminal = 0;
  auto* pressure_cmd = app.add_subcommand("pressure", "Topological pressure");
  pressure_cmd->add_option("model", model, "Model file")->required();
  pressure_cmd->add_option("--oracle-depth", oracle_depth,
                           "Cross-check by preimage sums of this depth");
  pressure_cmd->add_option("--terminal", terminal,
                           "Terminal symbol for the oracle (default: all)");

  double qmin = -10.0, qmax = 10.0, qstep = 0.25;
  std::vector<double> alphas;
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Sample the entropy spectrum");
  spectrum_cmd->add_option("model", model, "Model file")->required();
  spectrum_cmd->add_option("--qmin", qmin);
  spectrum_cmd->add_option("--qmax", qmax);
  spectrum_cmd->add_option("--qstep", qstep);
  spectrum_cmd->add_option("--out", csv, "CSV output for the curve");
  spectrum_cmd->add_option("--alpha", alphas,
                           "Also evaluate E at these alpha values");

  double tol = 1e-9, cmp_qmin = -20.0, cmp_qmax = 20.0, cmp_qstep = 0.25;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two spectra");
  compare_cmd->add_option("f", model, "First model file")->required();
  compare_cmd->add_option("g", other, "Second model file")->required();
  compare_cmd->add_option("--tol", tol);
  compare_cmd->add_option("--qmin", cmp_qmin);
  compare_cmd->add_option("--qmax", cmp_qmax);
  compare_cmd->add_option("--qstep", cmp_qstep);

  auto* classify_cmd =
      app.add_subcommand("classify", "Rigidity classification report");
  classify_cmd->add_option("model", model, "Model file")->required();

  int depth = 12;
  auto* audit_cmd =
      app.add_subcommand("gibbs-audit", "Audit the Gibbs inequality");
  audit_cmd->add_option("model", model, "Model file")->required();
  audit_cmd->add_option("--depth", depth);

  int length = 10000, buckets = 50;
  std::size_t trials = 10000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  auto* sample_cmd =
      app.add_subcommand("sample", "Monte-Carlo local entropy exponents");
  sample_cmd->add_option("model", model, "Model file")->required();
  sample_cmd->add_option("--n", length, "Path length");
  sample_cmd->add_option("--trials", trials);
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--buckets", buckets);
  sample_cmd->add_option("--threads", threads);
  sample_cmd->add_option("--out", csv, "CSV output for the histogram");

  auto* recode_cmd = app.add_subcommand(
      "recode", "Write the equivalent order-2 model (higher-block recoding)");
  recode_cmd->add_option("model", model, "Model file")->required();
  recode_cmd->add_option("--out", csv, "Output model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*pressure_cmd) return cmd_pressure(model, oracle_depth, terminal, out);
    if (*spectrum_cmd)
      return cmd_spectrum(model, qmin, qmax, qstep, csv, alphas, out);
    if (*compare_cmd)
      return cmd_compare(model, other, tol, cmp_qmin, cmp_qmax, cmp_qstep, out);
    if (*classify_cmd) return cmd_classify(model, out);
    if (*audit_cmd) return cmd_gibbs_audit(model, depth, out, err);
    if (*sample_cmd)
      return cmd_sample(model, length, trials, seed, buckets, threads, csv,
                        out);
    if (*recode_cmd) return cmd_recode(model, csv, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kMathError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace multispec::cli
