#pragma once

#include "tendon_hand/geometry.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tendon_hand {

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key + ": missing field");
  return *it;
}

inline double number_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::vector<double> numbers_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + "." + key + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

inline JointVector joint_vector_at(const json& j, const std::string& key, const std::string& path) {
  const std::vector<double> v = numbers_at(j, key, path);
  if (v.size() != kNumJoints)
    throw ConfigError(path + "." + key + ": expected " + std::to_string(kNumJoints) + " entries, got " +
                      std::to_string(v.size()));
  JointVector q;
  for (std::size_t i = 0; i < kNumJoints; ++i) q[i] = v[i];
  return q;
}

inline std::vector<double> to_std(const JointVector& q) { return {q.data(), q.data() + q.size()}; }

}  // namespace detail

/// Builds a HandGeometry from the configuration JSON without validating invariants.
/// Throws ConfigError with a field path on schema problems.
inline HandGeometry parse_geometry(const nlohmann::json& doc) {
  using detail::json;
  HandGeometry g;
  const json& digits = detail::require(doc, "digits", "$");
  if (!digits.is_array() || digits.size() != kNumDigits)
    throw ConfigError("$.digits: expected an array of five digits");

  std::array<bool, kNumDigits> seen{};
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const std::string path = "$.digits[" + std::to_string(i) + "]";
    const json& jd = digits[i];
    const json& name = detail::require(jd, "name", path);
    if (!name.is_string()) throw ConfigError(path + ".name: expected a string");
    const auto which = digit_from_name(name.get<std::string>());
    if (!which) throw ConfigError(path + ".name: unknown digit '" + name.get<std::string>() + "'");
    if (seen[index_of(*which)]) throw ConfigError(path + ".name: duplicate digit '" + name.get<std::string>() + "'");
    seen[index_of(*which)] = true;

    DigitGeometry dg;
    dg.name = name.get<std::string>();
    dg.joint_radii = detail::numbers_at(jd, "joint_radii_m", path);
    dg.path_lengths = detail::numbers_at(jd, "path_lengths_m", path);
    if (jd.contains("radius_ratio")) {
      dg.radius_ratio = detail::numbers_at(jd, "radius_ratio", path);
    } else {
      dg.radius_ratio = *which == Digit::Thumb ? std::vector<double>{5.0, 4.0} : std::vector<double>{5.0, 4.0, 5.0};
    }
    const json& guide = detail::require(jd, "guide", path);
    dg.guide.d1 = detail::number_at(guide, "d1_m", path + ".guide");
    dg.guide.d2 = detail::number_at(guide, "d2_m", path + ".guide");
    dg.guide.alpha = detail::number_at(guide, "alpha_rad", path + ".guide");
    dg.servo_pulley_radius = detail::number_at(jd, "servo_pulley_radius_m", path);
    const json& tr = detail::require(jd, "transmission", path);
    dg.transmission.spring_stiffness = detail::number_at(tr, "k_s_n_per_m", path + ".transmission");
    dg.transmission.tendon_axial_stiffness = detail::number_at(tr, "ea_n", path + ".transmission");
    g.digit(*which) = std::move(dg);
  }

  g.cmc_gain = doc.contains("cmc_gain") ? detail::number_at(doc, "cmc_gain", "$") : 1.0;
  const json& ws = detail::require(doc, "workspace", "$");
  g.workspace.q_min = detail::joint_vector_at(ws, "q_min_rad", "$.workspace");
  g.workspace.q_max = detail::joint_vector_at(ws, "q_max_rad", "$.workspace");
  return g;
}

inline nlohmann::json geometry_to_json(const HandGeometry& g) {
  nlohmann::json doc;
  doc["digits"] = nlohmann::json::array();
  for (Digit d : kAllDigits) {
    const DigitGeometry& dg = g.digit(d);
    doc["digits"].push_back({
        {"name", dg.name},
        {"joint_radii_m", dg.joint_radii},
        {"path_lengths_m", dg.path_lengths},
        {"radius_ratio", dg.radius_ratio},
        {"guide", {{"d1_m", dg.guide.d1}, {"d2_m", dg.guide.d2}, {"alpha_rad", dg.guide.alpha}}},
        {"servo_pulley_radius_m", dg.servo_pulley_radius},
        {"transmission",
         {{"k_s_n_per_m", dg.transmission.spring_stiffness}, {"ea_n", dg.transmission.tendon_axial_stiffness}}},
    });
  }
  doc["cmc_gain"] = g.cmc_gain;
  doc["workspace"] = {{"q_min_rad", detail::to_std(g.workspace.q_min)},
                      {"q_max_rad", detail::to_std(g.workspace.q_max)}};
  return doc;
}

inline std::string format_violations(const std::vector<Violation>& vs) {
  std::ostringstream os;
  for (const auto& v : vs) os << "\n  " << v.field << ": " << v.rule;
  return os.str();
}

/// Parses and validates; any violated invariant is reported as a ConfigError.
inline HandGeometry geometry_from_json(const nlohmann::json& doc) {
  HandGeometry g = parse_geometry(doc);
  const auto violations = validate_geometry(g);
  if (!violations.empty()) throw ConfigError("invalid hand geometry:" + format_violations(violations));
  return g;
}

inline HandGeometry load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open geometry file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return geometry_from_json(doc);
}

inline void save_geometry(const HandGeometry& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write geometry file " + path.string());
  out << geometry_to_json(g).dump(2) << '\n';
}

}  // namespace tendon_hand
