#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "multispec/cli.hpp"
#include "multispec/errors.hpp"
#include "multispec/model.hpp"
#include "multispec/rigidity.hpp"
#include "multispec/sim.hpp"
#include "multispec/spectrum.hpp"

namespace py = pybind11;
using namespace multispec;

namespace {

Potential potential_from_table(const TransitionMatrix& base, int order,
                               const py::dict& table) {
  std::map<Word, double> values;
  for (const auto& [key, value] : table) {
    const std::string text = py::str(key);
    values[parse_word(text, base.size())] = value.cast<double>();
  }
  return Potential::from_words(base, order, values);
}

py::dict report_dict(const RigidityReport& r) {
  py::dict d;
  d["case"] = to_string(r.shift_case);
  d["in_E"] = r.in_e;
  d["strong_rigid"] = r.strong_rigid;
  d["weak_rigid"] = r.weak_rigid;
  d["g2_member"] = r.g2_member;
  d["g2_margin"] = r.g2_margin;
  d["condition_A1"] = r.condition_a1;
  d["detected_kind"] =
      r.detected_kind ? py::object(py::str(to_string(*r.detected_kind))) : py::none();
  d["detected_alpha"] = r.detected_alpha;
  d["twin"] = r.twin ? py::cast(*r.twin) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pressure, Gibbs measures and entropy spectra on topological Markov shifts";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError",
                                                            PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", validation.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", error.ptr());

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def(py::init<ZeroOneArray>(), py::arg("entries"))
      .def_static("full_shift", &TransitionMatrix::full_shift, py::arg("n"))
      .def_static("golden_mean", &TransitionMatrix::golden_mean)
      .def_property_readonly("size", &TransitionMatrix::size)
      .def_property_readonly("entries", &TransitionMatrix::entries)
      .def_property_readonly("aperiodicity_power",
                             &TransitionMatrix::aperiodicity_power)
      .def("allowed", &TransitionMatrix::allowed)
      .def("__eq__", &TransitionMatrix::operator==)
      .def("__repr__", [](const TransitionMatrix& a) {
        return "TransitionMatrix(size=" + std::to_string(a.size()) + ")";
      });

  m.def("admissible_words", [](const TransitionMatrix& a, int n) {
    std::vector<std::string> out;
    for (const auto& w : admissible_words(a, n)) out.push_back(format_word(w));
    return out;
  }, py::arg("base"), py::arg("n"),
        "Admissible words of length n as 1-based strings, lexicographic.");

  py::class_<Potential>(m, "Potential")
      .def(py::init<TransitionMatrix, int, std::vector<double>>(),
           py::arg("base"), py::arg("order"), py::arg("values"))
      .def_static("from_table", &potential_from_table, py::arg("base"),
                  py::arg("order"), py::arg("table"),
                  "Build from a {'12': value, ...} table of 1-based words.")
      .def_static("constant", &Potential::constant, py::arg("base"),
                  py::arg("c"), py::arg("order") = 2)
      .def_static("from_edge_weights", &Potential::from_edge_weights,
                  py::arg("base"), py::arg("weights"))
      .def_static("log_bernoulli", [](double a, const std::string& kind) {
        if (kind != "P1" && kind != "P2")
          throw ValidationError("kind must be 'P1' or 'P2'");
        return Potential::log_of(bernoulli_matrix(
            a, kind == "P1" ? BernoulliKind::kP1 : BernoulliKind::kP2));
      }, py::arg("a"), py::arg("kind") = "P1")
      .def_property_readonly("base", &Potential::base)
      .def_property_readonly("order", &Potential::order)
      .def_property_readonly("values", &Potential::values)
      .def_property_readonly("words", [](const Potential& f) {
        std::vector<std::string> out;
        for (const auto& w : f.words()) out.push_back(format_word(w));
        return out;
      })
      .def("edge_weights", &Potential::edge_weights)
      .def("scaled", &Potential::scaled, py::arg("q"))
      .def("shifted", &Potential::shifted, py::arg("c"));

  m.def("load_model", [](const std::string& path) {
    return load_model(path).potential;
  }, py::arg("path"));
  m.def("model_json", [](const Potential& f) {
    return to_json(f, {}).dump(2);
  }, py::arg("potential"));

  m.def("pressure", &pressure, py::arg("f"));
  m.def("pressure_by_preimages", &pressure_by_preimages, py::arg("f"),
        py::arg("terminal"), py::arg("depth"));
  m.def("gibbs_markov", [](const Potential& f) {
    const auto mu = gibbs_markov(f);
    return py::make_tuple(Eigen::MatrixXd(mu.transition().values()),
                          Eigen::VectorXd(mu.stationary()));
  }, py::arg("f"), "Transition matrix P and stationary vector of the Gibbs measure.");
  m.def("entropy_rate", [](const Potential& f) {
    return entropy_rate(gibbs_markov(f));
  }, py::arg("f"), "Entropy of the Gibbs measure of f.");
  m.def("normalize_potential", &normalize_potential, py::arg("f"));
  m.def("gibbs_constant_audit", [](const Potential& f, int depth) {
    const auto a = gibbs_constant_audit(f, depth);
    py::dict d;
    d["constant"] = a.constant;
    d["observed_min"] = a.observed_min;
    d["observed_max"] = a.observed_max;
    d["theoretical_min"] = a.theoretical_min;
    d["theoretical_max"] = a.theoretical_max;
    d["cylinders"] = a.cylinders;
    d["within_bounds"] = a.within_bounds;
    return d;
  }, py::arg("f"), py::arg("depth") = 12);

  m.def("beta", &beta, py::arg("f"), py::arg("q"));
  m.def("alpha", &alpha, py::arg("f"), py::arg("q"));
  m.def("alpha_range", [](const Potential& f) {
    const auto r = alpha_range(f);
    return py::make_tuple(r.alpha_min, r.alpha_max);
  }, py::arg("f"));
  m.def("entropy_spectrum", [](const Potential& f, double a) {
    return entropy_spectrum(f, a).value;
  }, py::arg("f"), py::arg("alpha"));
  m.def("sample_spectrum", [](const Potential& f, const std::vector<double>& q_grid) {
    const auto curve = sample_spectrum(f, q_grid);
    std::vector<double> q, a, b, e;
    for (const auto& s : curve.samples) {
      q.push_back(s.q);
      a.push_back(s.alpha);
      b.push_back(s.beta);
      e.push_back(s.entropy);
    }
    py::dict d;
    d["q"] = q;
    d["alpha"] = a;
    d["beta"] = b;
    d["E"] = e;
    d["alpha_min"] = curve.alpha_min;
    d["alpha_max"] = curve.alpha_max;
    d["degenerate"] = curve.degenerate;
    return d;
  }, py::arg("f"), py::arg("q_grid"));
  m.def("spectra_equal", [](const Potential& f, const Potential& g, double tol) {
    const auto c = spectra_equal(f, g, default_comparison_grid(), tol);
    py::dict d;
    d["equal"] = c.equal;
    d["witness_q"] = c.witness_q;
    d["witness_gap"] = c.witness_gap;
    d["max_beta_gap"] = c.max_beta_gap;
    return d;
  }, py::arg("f"), py::arg("g"), py::arg("tol") = 1e-9);

  m.def("classify", [](const Potential& f) { return report_dict(classify(f)); },
        py::arg("f"));
  m.def("g2_member", [](const Potential& f) {
    const auto g = g_n_membership(f);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [a, b] : g.collisions)
      pairs.emplace_back(format_word(a), format_word(b));
    return py::make_tuple(g.member, g.margin, pairs);
  }, py::arg("f"));

  m.def("empirical_local_entropy",
        [](const Potential& f, int n, std::size_t trials, std::uint64_t seed,
           unsigned threads) {
          const auto s = empirical_local_entropy(gibbs_markov(f), n, trials, seed,
                                                 {}, threads);
          return std::pair{s.mean, s.std_error};
        },
        py::arg("f"), py::arg("n"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"multispec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code =
        cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run a CLI command; returns (exit code, stdout, stderr).");
}
