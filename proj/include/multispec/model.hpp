#pragma once

// JSON model files: a transition matrix plus a locally constant potential.
//
//   {
//     "transition": [[1, 1], [1, 0]],
//     "potential": {"order": 2, "values": {"11": 0.0, "12": 0.0, "21": 0.0}},
//     "labels": ["a", "b"]
//   }
//
// Words are 1-based digit strings. Alphabets larger than 9 use a list of
// {"word": [1, 12], "value": 0.5} entries instead of an object.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multispec/thermo.hpp"

namespace multispec {

struct Model {
  Potential potential;
  std::vector<std::string> labels;

  const TransitionMatrix& transition() const { return potential.base(); }
};

Model parse_model(const nlohmann::json& doc);
Model load_model(const std::string& path);

nlohmann::json to_json(const Potential& f,
                       const std::vector<std::string>& labels = {});
nlohmann::json to_json(const Model& model);

}  // namespace multispec
