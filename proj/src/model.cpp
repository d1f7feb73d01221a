#include "multispec/model.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "multispec/errors.hpp"

namespace multispec {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError("missing key '" + where + key + "'");
  return obj.at(key);
}

ZeroOneArray parse_transition(const json& node) {
  if (!node.is_array() || node.empty())
    throw ParseError("key 'transition' must be a non-empty array of rows");
  ZeroOneArray rows;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto& row = node[i];
    const std::string where = "transition[" + std::to_string(i) + "]";
    if (!row.is_array())
      throw ParseError("key '" + where + "' must be an array");
    std::vector<int> out;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number_integer() ||
          (row[j].get<int>() != 0 && row[j].get<int>() != 1))
        throw ParseError("key '" + where + "[" + std::to_string(j) +
                         "]' must be 0 or 1");
      out.push_back(row[j].get<int>());
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

double parse_value(const json& node, const std::string& where) {
  if (!node.is_number())
    throw ParseError("key '" + where + "' must be a number");
  return node.get<double>();
}

}  // namespace

Model parse_model(const json& doc) {
  if (!doc.is_object()) throw ParseError("model file must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "transition" && key != "potential" && key != "labels")
      throw ParseError("unknown key '" + key + "'");

  const auto entries = parse_transition(require(doc, "transition", ""));
  const auto report = check_aperiodic(entries);
  if (!report.accepted)
    throw ParseError("key 'transition' rejected: " + report.reason);
  TransitionMatrix base(entries);
  const int n = base.size();

  const auto& pot = require(doc, "potential", "");
  const auto& order_node = require(pot, "order", "potential.");
  if (!order_node.is_number_integer() || order_node.get<int>() < 1)
    throw ParseError("key 'potential.order' must be a positive integer");
  const int order = order_node.get<int>();
  const auto& values = require(pot, "values", "potential.");

  std::map<Word, double> table;
  auto insert = [&](Word w, double x, const std::string& where) {
    if (static_cast<int>(w.size()) != order)
      throw ParseError("key '" + where + "' has length " +
                       std::to_string(w.size()) + ", expected " +
                       std::to_string(order));
    if (!is_admissible(base, w))
      throw ParseError("key '" + where + "' is not an admissible word");
    if (!table.emplace(std::move(w), x).second)
      throw ParseError("key '" + where + "' is duplicated");
  };
  if (values.is_object()) {
    for (const auto& [key, value] : values.items()) {
      const std::string where = "potential.values." + key;
      Word w;
      try {
        w = parse_word(key, n);
      } catch (const ParseError& e) {
        throw ParseError("key '" + where + "': " + e.what());
      }
      insert(std::move(w), parse_value(value, where), where);
    }
  } else if (values.is_array()) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const std::string where = "potential.values[" + std::to_string(k) + "]";
      const auto& word_node = require(values[k], "word", where + ".");
      if (!word_node.is_array())
        throw ParseError("key '" + where + ".word' must be an array");
      Word w;
      for (const auto& s : word_node) {
        if (!s.is_number_integer() || s.get<int>() < 1 || s.get<int>() > n)
          throw ParseError("key '" + where + ".word' has a symbol outside 1.." +
                           std::to_string(n));
        w.push_back(s.get<int>() - 1);
      }
      insert(std::move(w),
             parse_value(require(values[k], "value", where + "."),
                         where + ".value"),
             where);
    }
  } else {
    throw ParseError("key 'potential.values' must be an object or an array");
  }

  for (const auto& w : admissible_words(base, order))
    if (!table.count(w))
      throw ParseError("key 'potential.values' has no value for word " +
                       (n <= 9 ? format_word(w) : std::string("of length ") +
                                                      std::to_string(order)));

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const auto& node = doc.at("labels");
    if (!node.is_array() || static_cast<int>(node.size()) != n)
      throw ParseError("key 'labels' must list one string per symbol");
    for (const auto& l : node) {
      if (!l.is_string()) throw ParseError("key 'labels' must hold strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return Model{Potential::from_words(std::move(base), order, table),
               std::move(labels)};
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError("model file '" + path + "' is not valid JSON: " +
                     e.what());
  }
  return parse_model(doc);
}

json to_json(const Potential& f, const std::vector<std::string>& labels) {
  json doc;
  doc["transition"] = f.base().entries();
  json values;
  if (f.base().size() <= 9) {
    values = json::object();
    for (std::size_t k = 0; k < f.words().size(); ++k)
      values[format_word(f.words()[k])] = f.values()[k];
  } else {
    values = json::array();
    for (std::size_t k = 0; k < f.words().size(); ++k) {
      std::vector<int> one_based;
      for (int s : f.words()[k]) one_based.push_back(s + 1);
      values.push_back({{"word", one_based}, {"value", f.values()[k]}});
    }
  }
  doc["potential"] = {{"order", f.order()}, {"values", values}};
  if (!labels.empty()) doc["labels"] = labels;
  return doc;
}

json to_json(const Model& model) {
  return to_json(model.potential, model.labels);
}

}  // namespace multispec
