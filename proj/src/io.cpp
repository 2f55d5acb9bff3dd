#include "regretctl/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "regretctl/benchmark.hpp"
#include "regretctl/errors.hpp"

namespace regretctl {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw InputError(path + ": " + err.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw InputError(field + ": expected a non-empty array of arrays");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw InputError(field + ": ragged rows");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw InputError(field + ": non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

json dump_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(field + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json dump_vector(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::vector<Eigen::MatrixXd> parse_matrix_sequence(const json& j, const std::string& field,
                                                   std::size_t expected) {
  if (!j.is_array()) throw InputError(field + ": expected an array of matrices");
  if (j.size() != expected) {
    throw InputError(field + ": has " + std::to_string(j.size()) + " entries, expected " +
                     std::to_string(expected));
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_matrix(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

SystemInstance load_system_config(const std::string& path) {
  const json j = load_json(path);
  if (!j.contains("horizon") || !j["horizon"].is_number_integer()) {
    throw InputError(path + ": missing integer field 'horizon'");
  }
  const int t_len = j["horizon"].get<int>();
  if (t_len < 1) throw InputError(path + ": horizon must be >= 1");

  const bool has_lti = j.contains("lti");
  const bool has_tv = j.contains("time_varying");
  if (has_lti == has_tv) {
    throw InputError(path + ": exactly one of 'lti' or 'time_varying' must be present");
  }

  SystemInstance sys;
  sys.horizon = t_len;
  if (j.contains("label")) sys.label = j["label"].get<std::string>();

  auto need = [&](const json& obj, const char* field) -> const json& {
    if (!obj.contains(field)) {
      throw InputError(path + ": missing field '" + std::string(field) + "'");
    }
    return obj[field];
  };

  if (has_lti) {
    const json& lti = j["lti"];
    const std::size_t reps = static_cast<std::size_t>(t_len);
    sys.a.assign(reps, parse_matrix(need(lti, "A"), "lti.A"));
    sys.b_u.assign(reps, parse_matrix(need(lti, "Bu"), "lti.Bu"));
    sys.b_w.assign(reps, parse_matrix(need(lti, "Bw"), "lti.Bw"));
    sys.c.assign(reps, parse_matrix(need(lti, "C"), "lti.C"));
    sys.q.assign(reps - 1, parse_matrix(need(lti, "Q"), "lti.Q"));
    sys.q_terminal = parse_matrix(need(lti, "QT"), "lti.QT");
    sys.r.assign(reps, parse_matrix(need(lti, "R"), "lti.R"));
  } else {
    const json& tv = j["time_varying"];
    const std::size_t reps = static_cast<std::size_t>(t_len);
    sys.a = parse_matrix_sequence(need(tv, "A"), "time_varying.A", reps);
    sys.b_u = parse_matrix_sequence(need(tv, "Bu"), "time_varying.Bu", reps);
    sys.b_w = parse_matrix_sequence(need(tv, "Bw"), "time_varying.Bw", reps);
    sys.c = parse_matrix_sequence(need(tv, "C"), "time_varying.C", reps);
    sys.q = parse_matrix_sequence(need(tv, "Q"), "time_varying.Q", reps - 1);
    sys.q_terminal = parse_matrix(need(tv, "QT"), "time_varying.QT");
    sys.r = parse_matrix_sequence(need(tv, "R"), "time_varying.R", reps);
  }

  try {
    sys.validate();
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
  return sys;
}

namespace {

void digest_matrix(std::string& acc, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      acc += format_double(m(i, k));
      acc += ',';
    }
  }
  acc += ';';
}

}  // namespace

std::string system_digest(const SystemInstance& sys) {
  std::string acc;
  acc += std::to_string(sys.horizon) + ";" + std::to_string(sys.state_dim()) + ";" +
         std::to_string(sys.control_dim()) + ";" + std::to_string(sys.disturbance_dim()) +
         ";" + std::to_string(sys.measurement_dim()) + ";";
  for (const auto& m : sys.a) digest_matrix(acc, m);
  for (const auto& m : sys.b_u) digest_matrix(acc, m);
  for (const auto& m : sys.b_w) digest_matrix(acc, m);
  for (const auto& m : sys.c) digest_matrix(acc, m);
  for (const auto& m : sys.q) digest_matrix(acc, m);
  digest_matrix(acc, sys.q_terminal);
  for (const auto& m : sys.r) digest_matrix(acc, m);

  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : acc) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

void save_controller(const std::string& path, const Controller& ctrl,
                     const SystemInstance& sys) {
  json j;
  j["format_version"] = 1;
  j["origin"] = to_string(ctrl.origin);
  j["label"] = ctrl.label;
  j["causality"] = ctrl.causality == Causality::Causal ? "causal" : "noncausal";
  j["dims"] = {{"n", sys.state_dim()},
               {"m", sys.control_dim()},
               {"p", sys.measurement_dim()},
               {"n_w", sys.disturbance_dim()},
               {"T", sys.horizon}};
  if (ctrl.gamma_opt) j["gamma_opt"] = *ctrl.gamma_opt;
  j["youla_Q"] = dump_matrix(ctrl.youla.data);
  j["system_digest"] = system_digest(sys);
  save_json(path, j);
}

Controller load_controller(const std::string& path, const SystemInstance& sys, bool force) {
  const json j = load_json(path);
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1) {
    throw InputError(path + ": unsupported controller format_version");
  }
  if (!force) {
    const std::string want = system_digest(sys);
    const std::string got = j.value("system_digest", "");
    if (got != want) {
      throw InputError(path + ": system digest mismatch (controller was built for a "
                       "different system; pass --force to override)");
    }
  }
  Controller ctrl;
  ctrl.origin = origin_from_string(j.value("origin", "custom"));
  ctrl.label = j.value("label", "");
  const std::string causality = j.value("causality", "causal");
  ctrl.causality = causality == "causal" ? Causality::Causal : Causality::Noncausal;
  if (j.contains("gamma_opt")) ctrl.gamma_opt = j["gamma_opt"].get<double>();

  Eigen::MatrixXd q = parse_matrix(j.at("youla_Q"), path + ": youla_Q");
  const int t_len = sys.horizon;
  if (q.rows() != static_cast<Eigen::Index>(sys.control_dim()) * t_len ||
      q.cols() != static_cast<Eigen::Index>(sys.measurement_dim()) * t_len) {
    throw InputError(path + ": youla_Q has the wrong shape for this system");
  }
  ctrl.youla = BlockMatrix(BlockPartition::uniform(t_len, sys.control_dim()),
                           BlockPartition::uniform(t_len, sys.measurement_dim()),
                           std::move(q));
  ctrl.check_causality_consistent();
  return ctrl;
}

void save_instance(const std::string& path, const Instance& inst,
                   std::optional<double> ratio) {
  json j;
  j["w"] = dump_vector(inst.w);
  j["v"] = dump_vector(inst.v);
  if (ratio) j["ratio"] = *ratio;
  save_json(path, j);
}

Instance load_instance(const std::string& path, const SystemInstance& sys) {
  const json j = load_json(path);
  Instance inst;
  inst.w = parse_vector(j.at("w"), path + ": w");
  inst.v = parse_vector(j.at("v"), path + ": v");
  if (inst.w.size() !=
          static_cast<Eigen::Index>(sys.disturbance_dim()) * sys.horizon ||
      inst.v.size() !=
          static_cast<Eigen::Index>(sys.measurement_dim()) * sys.horizon) {
    throw InputError(path + ": instance lengths do not match the system");
  }
  return inst;
}

namespace {

DisturbanceSpec parse_spec(const json& j, const std::string& where,
                           const SystemInstance& sys);

DisturbanceSpec::Segment parse_segment(const json& j, const std::string& where,
                                       const SystemInstance& sys) {
  DisturbanceSpec::Segment seg;
  if (!j.contains("start") || !j.contains("end") || !j.contains("spec")) {
    throw InputError(where + ": segment needs 'start', 'end' and 'spec'");
  }
  seg.start_t = j["start"].get<int>();
  seg.end_t = j["end"].get<int>();
  seg.spec = std::make_shared<DisturbanceSpec>(parse_spec(j["spec"], where + ".spec", sys));
  return seg;
}

DisturbanceSpec parse_spec(const json& j, const std::string& where,
                           const SystemInstance& sys) {
  DisturbanceSpec spec;
  const std::string kind = j.value("kind", "");
  if (kind == "gaussian") {
    spec.kind = DisturbanceSpec::Kind::Gaussian;
    spec.sigma_w = j.value("sigma_w", 1.0);
    spec.sigma_v = j.value("sigma_v", 1.0);
  } else if (kind == "sinusoid") {
    spec.kind = DisturbanceSpec::Kind::Sinusoid;
    spec.freq = j.value("freq", 0.1);
    spec.amp_w = j.value("amp_w", 1.0);
    spec.amp_v = j.value("amp_v", 0.0);
    spec.phase = j.value("phase", 0.0);
  } else if (kind == "constant") {
    spec.kind = DisturbanceSpec::Kind::Constant;
    spec.vec_w = parse_vector(j.at("vec_w"), where + ".vec_w");
    spec.vec_v = parse_vector(j.at("vec_v"), where + ".vec_v");
  } else if (kind == "worst_case") {
    spec.kind = DisturbanceSpec::Kind::WorstCase;
    if (!j.contains("target")) {
      throw InputError(where + ": worst_case needs a 'target' controller path");
    }
    spec.target = std::make_shared<Controller>(
        load_controller(j["target"].get<std::string>(), sys));
    if (j.contains("baseline")) {
      spec.baseline = std::make_shared<Controller>(
          load_controller(j["baseline"].get<std::string>(), sys));
    }
  } else if (kind == "switching") {
    spec.kind = DisturbanceSpec::Kind::Switching;
    if (!j.contains("segments") || !j["segments"].is_array()) {
      throw InputError(where + ": switching needs a 'segments' array");
    }
    for (std::size_t i = 0; i < j["segments"].size(); ++i) {
      spec.segments.push_back(parse_segment(
          j["segments"][i], where + ".segments[" + std::to_string(i) + "]", sys));
    }
  } else {
    throw InputError(where + ": unknown disturbance kind '" + kind + "'");
  }
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("normalize_to") && !j["normalize_to"].is_null()) {
    spec.normalize_to = j["normalize_to"].get<double>();
  }
  return spec;
}

}  // namespace

DisturbanceSpec load_disturbance_spec(const std::string& path, const SystemInstance& sys,
                                      std::uint64_t default_seed) {
  const json j = load_json(path);
  DisturbanceSpec spec = parse_spec(j, path, sys);
  if (!j.contains("seed")) spec.seed = default_seed;
  return spec;
}

void write_trajectory_csv(const std::string& path, const SystemInstance& sys,
                          const Trajectory& traj, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  const int n = sys.state_dim();
  const int m = sys.control_dim();
  const int p = sys.measurement_dim();
  const int n_w = sys.disturbance_dim();

  out << "t";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  for (int i = 0; i < m; ++i) out << ",u" << i;
  for (int i = 0; i < p; ++i) out << ",y" << i;
  for (int i = 0; i < n_w; ++i) out << ",w" << i;
  for (int i = 0; i < p; ++i) out << ",v" << i;
  out << ",stage_cost\n";

  for (int t = 0; t <= sys.horizon; ++t) {
    const auto st = static_cast<std::size_t>(t);
    const bool terminal = t == sys.horizon;
    out << t;
    for (int i = 0; i < n; ++i) out << "," << format_double(traj.x[st](i));
    for (int i = 0; i < m; ++i) {
      out << "," << (terminal ? "" : format_double(traj.u[st](i)));
    }
    for (int i = 0; i < p; ++i) {
      out << "," << (terminal ? "" : format_double(traj.y[st](i)));
    }
    for (int i = 0; i < n_w; ++i) {
      out << ","
          << (terminal ? ""
                       : format_double(inst.w(static_cast<Eigen::Index>(n_w) * t + i)));
    }
    for (int i = 0; i < p; ++i) {
      out << ","
          << (terminal ? "" : format_double(inst.v(static_cast<Eigen::Index>(p) * t + i)));
    }
    out << "," << format_double(traj.stage_costs[st]) << "\n";
  }
}

void write_comparison_csv(const std::string& path, const ComparisonTable& table) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << "controller,origin,mean_cost,max_cost,mean_regret,max_regret,gamma_opt,"
         "bound_violations\n";
  for (const auto& row : table.rows) {
    out << row.label << "," << row.origin << "," << format_double(row.mean_cost) << ","
        << format_double(row.max_cost) << "," << format_double(row.mean_regret) << ","
        << format_double(row.max_regret) << ","
        << (row.gamma_opt ? format_double(*row.gamma_opt) : "") << ","
        << (row.gamma_opt ? std::to_string(row.bound_violations) : "") << "\n";
  }
}

}  // namespace regretctl
