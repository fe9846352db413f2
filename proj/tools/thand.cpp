// Command-line front end for the tendon-hand model: forward/inverse evaluation, synthetic
// servo sweeps, MAE reports, configuration checks, pose presets and compliance fitting.

#include <CLI11.hpp>

#include <tendon_hand/tendon_hand.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace th = tendon_hand;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kInfeasible = 3 };

struct Options {
  std::string config;
  std::string format = "table";
  bool degrees = false;
};

std::string default_config_path() {
  if (const char* env = std::getenv("TENDON_HAND_CONFIG"); env && *env) return env;
  return std::string(TENDON_HAND_DATA_DIR) + "/default_hand.json";
}

std::string default_pose_library() {
  if (const char* env = std::getenv("TENDON_HAND_POSES"); env && *env) return env;
  return std::string(TENDON_HAND_DATA_DIR) + "/poses.json";
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw CLI::ValidationError(what, "empty list entry");
    try {
      out.push_back(th::parse_double(std::string_view(item).substr(b, e - b + 1)));
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "not a number: '" + item + "'");
    }
  }
  if (out.size() != expected)
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " values, got " +
                                         std::to_string(out.size()));
  return out;
}

double to_internal(const Options& o, double v) { return o.degrees ? th::deg_to_rad(v) : v; }
double to_external(const Options& o, double v) { return o.degrees ? th::rad_to_deg(v) : v; }
const char* unit(const Options& o) { return o.degrees ? "deg" : "rad"; }

template <typename Vec>
std::vector<double> external(const Options& o, const Vec& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_external(o, v[static_cast<Eigen::Index>(i)]);
  return out;
}

std::string joint_label(std::size_t row) {
  return "q" + std::to_string(row + 1) + " (" + std::string(th::kJointTable[row].name) + ")";
}

void print_joint_table(const Options& o, const std::vector<std::pair<std::string, th::JointVector>>& cols) {
  std::cout << std::left << std::setw(22) << "joint";
  for (const auto& c : cols) std::cout << std::right << std::setw(16) << (c.first + "_" + unit(o));
  std::cout << '\n';
  for (std::size_t i = 0; i < th::kNumJoints; ++i) {
    std::cout << std::left << std::setw(22) << joint_label(i) << std::fixed << std::setprecision(9);
    for (const auto& c : cols) std::cout << std::right << std::setw(16) << to_external(o, c.second[i]);
    std::cout << '\n';
  }
  std::cout.unsetf(std::ios::floatfield);
}

void print_servo_line(const Options& o, const th::ServoVector& u) {
  std::cout << "u_" << unit(o) << " =";
  for (Eigen::Index j = 0; j < u.size(); ++j) std::cout << ' ' << th::format_double(to_external(o, u[j]));
  std::cout << '\n';
}

th::HandGeometry load_config(const Options& o) { return th::load_geometry(o.config); }

// -- fk ---------------------------------------------------------------------

int run_fk(const Options& o, const std::string& u_text, const std::string& model) {
  const th::HandGeometry g = load_config(o);
  const auto vals = parse_list(u_text, th::kNumServos, "--u");
  th::ServoVector u;
  for (std::size_t j = 0; j < th::kNumServos; ++j) u[j] = to_internal(o, vals[j]);
  const th::JointVector q = model == "ideal" ? th::forward_ideal(g, u) : th::forward_compensated(g, u);
  if (o.format == "json") {
    std::cout << json{{"model", model}, {"unit", unit(o)}, {"u", external(o, u)}, {"q", external(o, q)}}.dump(2)
              << '\n';
  } else if (o.format == "csv") {
    std::cout << "joint_index,joint,q_" << unit(o) << '\n';
    for (std::size_t i = 0; i < th::kNumJoints; ++i)
      std::cout << i + 1 << ',' << th::kJointTable[i].name << ',' << th::format_double(to_external(o, q[i])) << '\n';
  } else {
    print_joint_table(o, {{"q_" + model, q}});
  }
  return kOk;
}

// -- ik ---------------------------------------------------------------------

int report_plan(const Options& o, const th::PosePlan& plan, const std::string& label) {
  std::vector<std::string> clipped;
  for (std::size_t i = 0; i < th::kNumJoints; ++i)
    if (plan.clipped[i]) clipped.push_back("q" + std::to_string(i + 1));
  const double max_res = plan.residual.cwiseAbs().maxCoeff();
  if (o.format == "json") {
    json out{{"unit", unit(o)},
             {"u", external(o, plan.command)},
             {"target", external(o, plan.target)},
             {"achieved", external(o, plan.achieved)},
             {"residual", external(o, plan.residual)},
             {"max_abs_residual", to_external(o, max_res)},
             {"clipped", clipped}};
    if (!label.empty()) out["pose"] = label;
    std::cout << out.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "joint_index,joint,target_" << unit(o) << ",achieved_" << unit(o) << ",residual_" << unit(o)
              << ",clipped\n";
    for (std::size_t i = 0; i < th::kNumJoints; ++i) {
      std::cout << i + 1 << ',' << th::kJointTable[i].name << ',' << th::format_double(to_external(o, plan.target[i]))
                << ',' << th::format_double(to_external(o, plan.achieved[i])) << ','
                << th::format_double(to_external(o, plan.residual[i])) << ',' << (plan.clipped[i] ? 1 : 0) << '\n';
    }
  } else {
    if (!label.empty()) std::cout << "pose: " << label << '\n';
    print_servo_line(o, plan.command);
    print_joint_table(o, {{"target", plan.target}, {"achieved", plan.achieved}, {"residual", plan.residual}});
    std::cout << "max |residual| = " << to_external(o, max_res) << ' ' << unit(o) << '\n';
    if (!clipped.empty()) {
      std::cout << "clipped to workspace:";
      for (std::size_t i = 0; i < th::kNumJoints; ++i)
        if (plan.clipped[i]) std::cout << ' ' << joint_label(i);
      std::cout << '\n';
    }
  }
  return kOk;
}

int run_ik(const Options& o, const std::string& q_text, const std::string& pose_file, const std::string& pose_name,
           const std::string& weights_text) {
  const th::HandGeometry g = load_config(o);
  th::JointVector q = th::JointVector::Zero();
  std::string label;
  if (!pose_file.empty()) {
    const th::PoseLibrary lib = th::load_pose_library(pose_file, g.workspace);
    const th::PosePreset* p = pose_name.empty() ? (lib.presets.empty() ? nullptr : &lib.presets.front())
                                                : lib.find(pose_name);
    if (!p) throw CLI::ValidationError("--name", "pose not found in " + pose_file);
    q = p->q_d;
    label = p->name;
  } else {
    const auto vals = parse_list(q_text, th::kNumJoints, "--q");
    for (std::size_t i = 0; i < th::kNumJoints; ++i) q[i] = to_internal(o, vals[i]);
  }
  th::JointWeights w = th::JointWeights::Ones();
  if (!weights_text.empty()) {
    const auto vals = parse_list(weights_text, th::kNumJoints, "--weights");
    for (std::size_t i = 0; i < th::kNumJoints; ++i) w[i] = vals[i];
  }
  return report_plan(o, th::plan_to_pose(g, q, w), label);
}

// -- sweep / report -----------------------------------------------------------

struct SweepArgs {
  std::vector<std::size_t> servos{2};
  std::size_t samples = 100;
  std::string plant = "compensated";
  double noise = 0.0;
  double lag = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sweep_cmd(const Options& o, const SweepArgs& a) {
  const th::HandGeometry g = load_config(o);
  th::PlantConfig p;
  p.physics = a.plant == "ideal" ? th::PlantPhysics::Ideal : th::PlantPhysics::Compensated;
  p.noise_sigma = to_internal(o, a.noise);
  p.servo_lag = a.lag;
  p.seed = a.seed;
  p.validate();
  const auto records = th::run_sweeps(g, p, a.servos, a.samples);
  if (a.out.empty() || a.out == "-") {
    th::write_sweep_csv(std::cout, records);
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    th::write_sweep_csv(f, records);
    std::cerr << "wrote " << records.size() * a.samples * th::kNumJoints << " rows to " << a.out << '\n';
  }
  return kOk;
}

int run_report(const Options& o, const std::string& csv_path, const std::string& residual_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  std::vector<th::SweepReport> reports;
  for (const auto& rec : th::read_sweep_csv(in)) reports.push_back(th::compute_report(rec));
  if (!residual_path.empty()) {
    std::ofstream f(residual_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + residual_path);
    th::write_residual_csv(f, reports);
  }
  if (o.format == "json") {
    std::cout << th::report_to_json(reports).dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "servo_index,joint_index,joint,mae_ideal_deg,mae_comp_deg,n_samples\n";
    for (const auto& r : reports)
      for (const auto& j : r.joints)
        std::cout << r.servo << ',' << j.joint + 1 << ',' << th::kJointTable[j.joint].name << ','
                  << th::format_double(j.mae_ideal_deg) << ',' << th::format_double(j.mae_comp_deg) << ','
                  << j.n_samples << '\n';
  } else {
    std::cout << std::left << std::setw(8) << "servo" << std::setw(22) << "joint" << std::right << std::setw(16)
              << "MAE ideal (deg)" << std::setw(16) << "MAE comp (deg)" << std::setw(10) << "samples" << '\n';
    for (const auto& r : reports) {
      if (r.joints.empty()) std::cout << std::left << std::setw(8) << r.servo << "(no interphalangeal joints)\n";
      for (const auto& j : r.joints)
        std::cout << std::left << std::setw(8) << r.servo << std::setw(22) << joint_label(j.joint) << std::right
                  << std::fixed << std::setprecision(4) << std::setw(16) << j.mae_ideal_deg << std::setw(16)
                  << j.mae_comp_deg << std::setw(10) << j.n_samples << '\n';
    }
  }
  return kOk;
}

// -- validate -------------------------------------------------------------------

int run_validate(const Options& o) {
  std::ifstream in(o.config);
  if (!in) throw th::ConfigError("cannot open geometry file " + o.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw th::ConfigError(o.config + ": " + e.what());
  }
  const th::HandGeometry g = th::parse_geometry(doc);
  const auto violations = th::validate_geometry(g);
  if (o.format == "json") {
    json v = json::array();
    for (const auto& x : violations) v.push_back({{"field", x.field}, {"rule", x.rule}});
    json out{{"config", o.config}, {"violations", v}};
    if (violations.empty()) out["servo_safe_max"] = external(o, th::servo_safe_max(g));
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << violations.size() << " violations\n";
    for (const auto& x : violations) std::cout << "  " << x.field << ": " << x.rule << '\n';
    if (violations.empty()) {
      std::cout << "servo safe range max (" << unit(o) << "):";
      const auto u = th::servo_safe_max(g);
      for (Eigen::Index j = 0; j < u.size(); ++j) std::cout << ' ' << th::format_double(to_external(o, u[j]));
      std::cout << '\n';
    }
  }
  return violations.empty() ? kOk : kValidation;
}

// -- pose -------------------------------------------------------------------------

int run_pose(const Options& o, const std::string& action, const std::string& name, const std::string& library) {
  const th::HandGeometry g = load_config(o);
  const th::PoseLibrary lib = th::load_pose_library(library, g.workspace);
  for (const auto& v : lib.violations) std::cerr << "warning: " << v.preset << ": " << v.field << ' ' << v.rule << '\n';
  if (action == "list") {
    if (o.format == "json") {
      json arr = json::array();
      for (const auto& p : lib.presets) arr.push_back(th::pose_to_json(p));
      std::cout << arr.dump(2) << '\n';
    } else {
      for (const auto& p : lib.presets)
        std::cout << std::left << std::setw(24) << p.name << std::setw(18) << th::category_name(p.category)
                  << p.description << '\n';
    }
    return kOk;
  }
  const th::PosePreset* p = lib.find(name);
  if (!p) throw CLI::ValidationError("pose", "no preset named '" + name + "'");
  if (action == "show") {
    if (o.format == "json") {
      std::cout << th::pose_to_json(*p).dump(2) << '\n';
    } else {
      std::cout << p->name << " [" << th::category_name(p->category) << "] " << p->description << '\n';
      print_joint_table(o, {{"q_d", p->q_d}});
    }
    return kOk;
  }
  return report_plan(o, th::resolve_pose(g, *p), p->name);
}

// -- fit --------------------------------------------------------------------------

int run_fit(const Options& o, double target, std::size_t samples, const std::string& out_path) {
  const th::HandGeometry g = load_config(o);
  const th::FitResult r = th::fit_default_params(g, target, samples);
  const th::HandGeometry fitted = th::with_stiffness_ratio(g, r.stiffness_ratio);
  const double verify = th::index_dip_ideal_mae_deg(fitted, samples);
  if (!out_path.empty()) th::save_geometry(fitted, out_path);
  if (o.format == "json") {
    std::cout << json{{"target_mae_deg", target},
                      {"k_s_n_per_m", r.params.spring_stiffness},
                      {"ea_n", r.params.tendon_axial_stiffness},
                      {"stiffness_ratio_per_m", r.stiffness_ratio},
                      {"verification_mae_deg", verify},
                      {"iterations", r.iterations}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "k_s = " << th::format_double(r.params.spring_stiffness) << " N/m, EA = "
              << th::format_double(r.params.tendon_axial_stiffness) << " N (k_s/EA = "
              << th::format_double(r.stiffness_ratio) << " 1/m)\n"
              << "verification: uncompensated index DIP MAE = " << th::format_double(verify) << " deg (target "
              << target << ")\n";
    if (!out_path.empty()) std::cout << "wrote " << out_path << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Actuator-to-joint model of a 6-servo, 15-joint tendon-driven hand"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  o.config = default_config_path();
  app.add_option("-c,--config", o.config, "Hand geometry JSON (env TENDON_HAND_CONFIG)");
  app.add_option("-f,--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_flag("--deg", o.degrees, "Read and print angles in degrees");

  auto* fk = app.add_subcommand("fk", "Joint angles for a servo command");
  std::string u_text;
  std::string model = "comp";
  fk->add_option("--u", u_text, "Six servo angles, comma separated")->required();
  fk->add_option("--model", model, "ideal or comp")->check(CLI::IsMember({"ideal", "comp"}));

  auto* ik = app.add_subcommand("ik", "Servo command for a target posture");
  std::string q_text, pose_file, pose_name, weights_text;
  auto* q_opt = ik->add_option("--q", q_text, "Fifteen joint angles, comma separated");
  auto* file_opt = ik->add_option("--pose-file", pose_file, "Pose library JSON");
  ik->add_option("--name", pose_name, "Preset name inside --pose-file")->needs(file_opt);
  ik->add_option("--weights", weights_text, "Fifteen non-negative least-squares weights");
  q_opt->excludes(file_opt);
  ik->require_option(1, 3);

  auto* sweep = app.add_subcommand("sweep", "Synthetic monotonic servo sweep to CSV");
  SweepArgs sa;
  sweep->add_option("--servo", sa.servos, "Servo index 1..6 (repeatable)")->check(CLI::Range(1, 6));
  sweep->add_option("-k,--k", sa.samples, "Samples per sweep")->check(CLI::Range(2, 10000000));
  sweep->add_option("--plant", sa.plant, "Plant physics")->check(CLI::IsMember({"ideal", "compensated"}));
  sweep->add_option("--noise-sigma", sa.noise, "Measurement noise standard deviation");
  sweep->add_option("--lag", sa.lag, "First-order servo lag coefficient in [0, 1)");
  sweep->add_option("--seed", sa.seed, "Noise seed");
  sweep->add_option("-o,--out", sa.out, "Output CSV (default stdout)");

  auto* report = app.add_subcommand("report", "MAE table and residual series from a sweep CSV");
  std::string csv_path, residual_path;
  report->add_option("csv", csv_path, "Sweep CSV")->required();
  report->add_option("--residuals", residual_path, "Write residual series CSV here");

  auto* validate = app.add_subcommand("validate", "Check a geometry configuration");

  auto* pose = app.add_subcommand("pose", "Pose preset library");
  std::string pose_action, preset_name, library = default_pose_library();
  pose->add_option("action", pose_action, "list | show | run")
      ->required()
      ->check(CLI::IsMember({"list", "show", "run"}));
  pose->add_option("name", preset_name, "Preset name");
  pose->add_option("--library", library, "Pose library JSON (env TENDON_HAND_POSES)");

  auto* fit = app.add_subcommand("fit", "Fit k_s/EA to a target uncompensated index-DIP MAE");
  double target = 1.15;
  std::size_t fit_samples = 100;
  std::string fit_out;
  fit->add_option("--target-mae", target, "Target MAE in degrees")->required();
  fit->add_option("-k,--k", fit_samples, "Sweep samples")->check(CLI::Range(2, 1000000));
  fit->add_option("-o,--out", fit_out, "Write the fitted geometry JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fk) return run_fk(o, u_text, model);
    if (*ik) return run_ik(o, q_text, pose_file, pose_name, weights_text);
    if (*sweep) return run_sweep_cmd(o, sa);
    if (*report) return run_report(o, csv_path, residual_path);
    if (*validate) return run_validate(o);
    if (*pose) {
      if (pose_action != "list" && preset_name.empty()) throw CLI::ValidationError("pose", "preset name required");
      return run_pose(o, pose_action, preset_name, library);
    }
    if (*fit) return run_fit(o, target, fit_samples, fit_out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const th::GeometryInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const th::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kValidation;
  } catch (const th::FitFailure& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
