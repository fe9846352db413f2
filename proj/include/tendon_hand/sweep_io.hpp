#pragma once

#include "tendon_hand/plant_sim.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace tendon_hand {

inline constexpr std::string_view kSweepCsvHeader =
    "servo_index,u_rad,joint_index,q_meas_rad,q_ideal_rad,q_comp_rad,residual_ideal_deg,residual_comp_deg";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("malformed number '" + std::string(s) + "'");
  return v;
}

/// One row per (sample, joint), joints and servos 1-based.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRecord& rec : records) {
    for (const SweepSample& s : rec.samples) {
      for (std::size_t i = 0; i < kNumJoints; ++i) {
        os << rec.servo << ',' << format_double(s.u) << ',' << (i + 1) << ',' << format_double(s.measured[i]) << ','
           << format_double(s.ideal[i]) << ',' << format_double(s.compensated[i]) << ','
           << format_double(rad_to_deg(s.measured[i] - s.ideal[i])) << ','
           << format_double(rad_to_deg(s.measured[i] - s.compensated[i])) << '\n';
      }
    }
  }
}

/// Rebuilds sweep records from CSV; every sample must carry all 15 joint rows.
inline std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw std::runtime_error("unexpected sweep CSV header: " + line);

  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  std::size_t expected_joint = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      f.push_back(rest.substr(0, pos));
    f.push_back(rest);
    if (f.size() != 8) throw std::runtime_error("line " + std::to_string(line_no) + ": expected 8 fields");
    try {
      const auto servo = static_cast<std::size_t>(parse_double(f[0]));
      const double u = parse_double(f[1]);
      const auto joint = static_cast<std::size_t>(parse_double(f[2]));
      if (servo < 1 || servo > kNumServos || joint != expected_joint)
        throw std::runtime_error("servo/joint index out of sequence");
      if (joint == 1) {
        if (records.empty() || records.back().servo != servo) records.push_back({servo, {}});
        records.back().samples.push_back({u, JointVector::Zero(), JointVector::Zero(), JointVector::Zero()});
      }
      SweepSample& s = records.back().samples.back();
      if (records.back().servo != servo || s.u != u) throw std::runtime_error("sample rows are not contiguous");
      s.measured[joint - 1] = parse_double(f[3]);
      s.ideal[joint - 1] = parse_double(f[4]);
      s.compensated[joint - 1] = parse_double(f[5]);
      expected_joint = joint == kNumJoints ? 1 : joint + 1;
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (expected_joint != 1) throw std::runtime_error("sweep CSV ends in the middle of a sample");
  return records;
}

/// Per-joint MAE summary, one entry per sweep.
inline nlohmann::json report_to_json(const std::vector<SweepReport>& reports) {
  nlohmann::json doc;
  doc["sweeps"] = nlohmann::json::array();
  for (const SweepReport& rep : reports) {
    nlohmann::json joints = nlohmann::json::array();
    for (const JointResidual& j : rep.joints) {
      joints.push_back({{"joint_index", j.joint + 1},
                        {"joint", std::string(kJointTable[j.joint].name)},
                        {"mae_ideal_deg", j.mae_ideal_deg},
                        {"mae_comp_deg", j.mae_comp_deg},
                        {"n_samples", j.n_samples}});
    }
    doc["sweeps"].push_back({{"servo_index", rep.servo}, {"joints", std::move(joints)}});
  }
  return doc;
}

/// Residual series of the scored joints, in degrees.
inline void write_residual_csv(std::ostream& os, const std::vector<SweepReport>& reports) {
  os << "servo_index,u_rad,joint_index,residual_ideal_deg,residual_comp_deg\n";
  for (const SweepReport& rep : reports) {
    for (const JointResidual& j : rep.joints) {
      for (std::size_t k = 0; k < j.u.size(); ++k) {
        os << rep.servo << ',' << format_double(j.u[k]) << ',' << (j.joint + 1) << ','
           << format_double(rad_to_deg(j.residual_ideal[k])) << ',' << format_double(rad_to_deg(j.residual_comp[k]))
           << '\n';
      }
    }
  }
}

}  // namespace tendon_hand
