#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tendon_hand {

inline constexpr std::size_t kNumServos = 6;
inline constexpr std::size_t kNumJoints = 15;
inline constexpr std::size_t kNumDigits = 5;

/// Servo angles u1..u6 (rad). Slot 0 is thumb flexion, 1..4 index..pinky, 5 thumb CMC.
using ServoVector = Eigen::Matrix<double, static_cast<int>(kNumServos), 1>;
/// Joint angles q1..q15 (rad), stored 0-based in the fixed joint table order.
using JointVector = Eigen::Matrix<double, static_cast<int>(kNumJoints), 1>;
/// Per-joint non-negative least-squares weights.
using JointWeights = JointVector;
/// Evaluated actuator-to-joint gain matrix.
using MappingMatrix = Eigen::Matrix<double, static_cast<int>(kNumJoints), static_cast<int>(kNumServos)>;

enum class Digit : std::size_t { Thumb = 0, Index = 1, Middle = 2, Ring = 3, Pinky = 4 };

inline constexpr std::array<Digit, kNumDigits> kAllDigits = {Digit::Thumb, Digit::Index, Digit::Middle,
                                                             Digit::Ring, Digit::Pinky};

constexpr std::size_t index_of(Digit d) { return static_cast<std::size_t>(d); }

constexpr std::string_view digit_name(Digit d) {
  switch (d) {
    case Digit::Thumb: return "thumb";
    case Digit::Index: return "index";
    case Digit::Middle: return "middle";
    case Digit::Ring: return "ring";
    case Digit::Pinky: return "pinky";
  }
  return "?";
}

inline std::optional<Digit> digit_from_name(std::string_view name) {
  for (Digit d : kAllDigits) {
    if (digit_name(d) == name) return d;
  }
  return std::nullopt;
}

/// Servo slot driving the flexion chain of a digit.
constexpr std::size_t servo_of(Digit d) { return index_of(d); }
inline constexpr std::size_t kCmcServo = 5;
inline constexpr std::size_t kCmcJoint = 14;

struct JointInfo {
  Digit digit;
  std::string_view name;
  /// Position inside the digit's radius list (distal to proximal).
  std::size_t slot;
};

// Joint table order: q1 thumb IP ... q15 thumb CMC. CMC uses slot 2 (not a tendon joint).
inline constexpr std::array<JointInfo, kNumJoints> kJointTable = {{
    {Digit::Thumb, "thumb_ip", 0},
    {Digit::Thumb, "thumb_mp", 1},
    {Digit::Index, "index_dip", 0},
    {Digit::Index, "index_pip", 1},
    {Digit::Index, "index_mcp", 2},
    {Digit::Middle, "middle_dip", 0},
    {Digit::Middle, "middle_pip", 1},
    {Digit::Middle, "middle_mcp", 2},
    {Digit::Ring, "ring_dip", 0},
    {Digit::Ring, "ring_pip", 1},
    {Digit::Ring, "ring_mcp", 2},
    {Digit::Pinky, "pinky_dip", 0},
    {Digit::Pinky, "pinky_pip", 1},
    {Digit::Pinky, "pinky_mcp", 2},
    {Digit::Thumb, "thumb_cmc", 2},
}};

/// Row of the first (most distal) flexion joint of a digit.
constexpr std::size_t first_joint_row(Digit d) { return d == Digit::Thumb ? 0 : 2 + 3 * (index_of(d) - 1); }
/// Number of tendon-coupled flexion joints in a digit.
constexpr std::size_t flexion_joint_count(Digit d) { return d == Digit::Thumb ? 2 : 3; }
/// Row of the directly driven joint (MCP for fingers, MP for the thumb).
constexpr std::size_t driven_joint_row(Digit d) { return first_joint_row(d) + flexion_joint_count(d) - 1; }

/// Joint row for (digit, slot) with slot counted distal to proximal.
constexpr std::size_t joint_row(Digit d, std::size_t slot) { return first_joint_row(d) + slot; }

constexpr bool is_distal_joint(std::size_t row) {
  if (row == kCmcJoint) return false;
  const JointInfo& j = kJointTable[row];
  return row != driven_joint_row(j.digit);
}

constexpr double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }
constexpr double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

/// Requested motion leaves the triangle defined by the tendon guide geometry.
class GeometryInfeasible : public std::runtime_error {
 public:
  GeometryInfeasible(const std::string& what, std::optional<std::size_t> servo = std::nullopt)
      : std::runtime_error(what), servo_(servo) {}

  /// 1-based servo index, when known.
  std::optional<std::size_t> servo() const { return servo_; }

 private:
  std::optional<std::size_t> servo_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tendon_hand
