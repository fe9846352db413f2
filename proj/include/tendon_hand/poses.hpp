#pragma once

#include "tendon_hand/control.hpp"
#include "tendon_hand/geometry_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tendon_hand {

enum class PoseCategory { Opposition, Gesture, Digit, PowerGrasp, PrecisionGrasp, ToolGrasp };

inline constexpr std::array<std::pair<PoseCategory, std::string_view>, 6> kPoseCategoryNames = {{
    {PoseCategory::Opposition, "opposition"},
    {PoseCategory::Gesture, "gesture"},
    {PoseCategory::Digit, "digit"},
    {PoseCategory::PowerGrasp, "power-grasp"},
    {PoseCategory::PrecisionGrasp, "precision-grasp"},
    {PoseCategory::ToolGrasp, "tool-grasp"},
}};

inline std::string_view category_name(PoseCategory c) {
  for (const auto& [cat, name] : kPoseCategoryNames)
    if (cat == c) return name;
  return "?";
}

inline std::optional<PoseCategory> category_from_name(std::string_view s) {
  for (const auto& [cat, name] : kPoseCategoryNames)
    if (name == s) return cat;
  return std::nullopt;
}

inline bool is_grasp(PoseCategory c) {
  return c == PoseCategory::PowerGrasp || c == PoseCategory::PrecisionGrasp || c == PoseCategory::ToolGrasp;
}

struct PosePreset {
  std::string name;
  PoseCategory category = PoseCategory::Gesture;
  JointVector q_d = JointVector::Zero();
  std::string description;
};

struct PoseViolation {
  std::string preset;
  std::string field;  // e.g. "q4"
  std::string rule;
};

struct PoseLibrary {
  std::vector<PosePreset> presets;
  std::vector<PoseViolation> violations;

  const PosePreset* find(std::string_view name) const {
    auto it = std::find_if(presets.begin(), presets.end(), [&](const PosePreset& p) { return p.name == name; });
    return it == presets.end() ? nullptr : &*it;
  }
};

/// Joints of `q` outside the workspace, one violation each.
inline std::vector<PoseViolation> check_pose(const Workspace& w, const PosePreset& p) {
  std::vector<PoseViolation> out;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (p.q_d[i] < w.q_min[i] || p.q_d[i] > w.q_max[i]) {
      out.push_back({p.name, "q" + std::to_string(i + 1),
                     std::string(kJointTable[i].name) + " = " + std::to_string(p.q_d[i]) + " rad outside [" +
                         std::to_string(w.q_min[i]) + ", " + std::to_string(w.q_max[i]) + "]"});
    }
  }
  return out;
}

inline PoseLibrary parse_pose_library(const nlohmann::json& doc, const Workspace& w) {
  if (!doc.is_array()) throw ConfigError("pose library: expected a JSON array");
  PoseLibrary lib;
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const nlohmann::json& jp = doc[i];
    std::string path = "$[" + std::to_string(i) + "]";
    const nlohmann::json& jn = detail::require(jp, "name", path);
    if (!jn.is_string()) throw ConfigError(path + ".name: expected a string");
    PosePreset p;
    p.name = jn.get<std::string>();
    path = "preset '" + p.name + "'";
    if (!names.insert(p.name).second) throw ConfigError(path + ": duplicate name");
    const nlohmann::json& jc = detail::require(jp, "category", path);
    const auto cat = jc.is_string() ? category_from_name(jc.get<std::string>()) : std::nullopt;
    if (!cat) throw ConfigError(path + ".category: unknown category");
    p.category = *cat;
    p.q_d = detail::joint_vector_at(jp, "q_d_rad", path);
    if (jp.contains("description")) {
      if (!jp["description"].is_string()) throw ConfigError(path + ".description: expected a string");
      p.description = jp["description"].get<std::string>();
    }
    auto v = check_pose(w, p);
    lib.violations.insert(lib.violations.end(), v.begin(), v.end());
    lib.presets.push_back(std::move(p));
  }
  return lib;
}

/// An empty (or whitespace-only) file is an empty library.
inline PoseLibrary load_pose_library(const std::filesystem::path& path, const Workspace& w = reference_workspace()) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pose library " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  try {
    return parse_pose_library(nlohmann::json::parse(text), w);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json pose_to_json(const PosePreset& p) {
  return {{"name", p.name},
          {"category", std::string(category_name(p.category))},
          {"q_d_rad", detail::to_std(p.q_d)},
          {"description", p.description}};
}

inline PosePlan resolve_pose(const HandGeometry& g, const PosePreset& preset) { return plan_to_pose(g, preset.q_d); }

}  // namespace tendon_hand
