#pragma once

// JSON form of an input distribution:
//   {"kind":"discrete","atoms":[[x,p],...]}
//   {"kind":"gaussian","mean":m,"variance":v}
//   {"kind":"mixture","parts":[{"dist":{...},"weight":w},...]}
// plus finite families and named corpora. Needs nlohmann/json (vendored as
// json.hpp), so it stays out of the umbrella header.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/mmse.hpp"

namespace mmse_lab {

inline InputDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw InputError("distribution JSON: expected an object with \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2) throw InputError("distribution JSON: atoms are [x, p] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      return make_discrete(std::move(atoms));
    }
    if (kind == "gaussian") return make_gaussian(j.at("mean").get<double>(), j.at("variance").get<double>());
    if (kind == "mixture") {
      std::vector<std::pair<InputDistribution, double>> parts;
      for (const auto& p : j.at("parts")) parts.emplace_back(distribution_from_json(p.at("dist")), p.at("weight").get<double>());
      return mix(std::span<const std::pair<InputDistribution, double>>(parts));
    }
    throw InputError("distribution JSON: unknown kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("distribution JSON: ") + e.what());
  }
}

// Canonical form: a single atom list or Gaussian when possible, otherwise a
// mixture of one discrete part and one Gaussian part per component.
inline nlohmann::json distribution_to_json(const InputDistribution& d) {
  auto discrete_json = [](std::span<const Atom> atoms, double scale) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& at : atoms) a.push_back({at.location, at.weight / scale});
    return nlohmann::json{{"kind", "discrete"}, {"atoms", a}};
  };
  auto gaussian_json = [](const GaussianComponent& c) {
    return nlohmann::json{{"kind", "gaussian"}, {"mean", c.mean}, {"variance", c.variance}};
  };
  if (!d.has_continuous_part()) return discrete_json(d.atoms(), 1.0);
  if (!d.has_discrete_part() && d.components().size() == 1) return gaussian_json(d.components()[0]);
  nlohmann::json parts = nlohmann::json::array();
  if (d.has_discrete_part()) {
    double mass = 0.0;
    for (const auto& a : d.atoms()) mass += a.weight;
    parts.push_back({{"dist", discrete_json(d.atoms(), mass)}, {"weight", mass}});
  }
  for (const auto& c : d.components()) parts.push_back({{"dist", gaussian_json(c)}, {"weight", c.weight}});
  return {{"kind", "mixture"}, {"parts", parts}};
}

inline InputDistribution parse_distribution(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("distribution JSON: ") + e.what());
  }
  return distribution_from_json(j);
}

namespace detail {

// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
inline nlohmann::json read_json_argument(const std::string& path_or_json) {
  std::size_t i = 0;
  while (i < path_or_json.size() && std::isspace(static_cast<unsigned char>(path_or_json[i]))) ++i;
  std::string text;
  if (i < path_or_json.size() && (path_or_json[i] == '{' || path_or_json[i] == '[')) {
    text = path_or_json;
  } else {
    std::ifstream in(path_or_json);
    if (!in) throw InputError("cannot open file: " + path_or_json);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("JSON: ") + e.what());
  }
}

}  // namespace detail

inline InputDistribution load_distribution(const std::string& path_or_json) {
  return distribution_from_json(detail::read_json_argument(path_or_json));
}

// A finite side-information family: [{"dist": {...}, "weight": p}, ...].
inline Family load_family(const std::string& path_or_json) {
  const auto j = detail::read_json_argument(path_or_json);
  if (!j.is_array()) throw InputError("family JSON: expected an array of {dist, weight}");
  Family family;
  try {
    for (const auto& p : j) family.emplace_back(distribution_from_json(p.at("dist")), p.at("weight").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("family JSON: ") + e.what());
  }
  return family;
}

// A named corpus: {"name": {...distribution...}, ...}.
inline std::vector<inputs::NamedInput> load_corpus(const std::string& path_or_json) {
  const auto j = detail::read_json_argument(path_or_json);
  if (!j.is_object()) throw InputError("corpus JSON: expected an object of named distributions");
  std::vector<inputs::NamedInput> out;
  for (const auto& [name, d] : j.items()) out.push_back({name, distribution_from_json(d)});
  return out;
}

}  // namespace mmse_lab
