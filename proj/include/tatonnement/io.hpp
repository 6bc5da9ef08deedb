#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tatonnement/analysis.hpp"
#include "tatonnement/economy.hpp"
#include "tatonnement/trajectory.hpp"

namespace tatonnement::io {

using json = nlohmann::json;

/// %.17g; NaN and infinities become an empty CSV field.
inline std::string format_number(double x) {
  if (!std::isfinite(x)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const Vector& v) { return json(to_std(v)); }

inline Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> values;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    values.push_back(x.get<double>());
  }
  return from_std(values);
}

// ---------------------------------------------------------------------------
// Economy files
//
//   {"kind": "cobb_douglas" | "leontief", "name": "...",
//    "consumers": [{"alphas": [...], "endowments": [...]}, ...]}
//   {"kind": "linearized", "name": "...", "p_star": [...],
//    "jacobian": [[...], ...], "project": true}

inline json economy_to_json(const Economy& economy) {
  json j;
  j["kind"] = to_string(economy.kind());
  if (!economy.name().empty()) j["name"] = economy.name();
  if (economy.kind() == EconomyKind::Linearized) {
    const auto& spec = economy.linearized_spec();
    j["p_star"] = to_json(spec.p_star);
    json rows = json::array();
    for (Eigen::Index r = 0; r < spec.supplied_jacobian.rows(); ++r) {
      rows.push_back(to_json(spec.supplied_jacobian.row(r).transpose()));
    }
    j["jacobian"] = rows;
    j["project"] = spec.projected;
  } else {
    json consumers = json::array();
    for (const auto& c : economy.consumers()) {
      consumers.push_back({{"alphas", to_json(c.weights)}, {"endowments", to_json(c.endowments)}});
    }
    j["consumers"] = consumers;
  }
  return j;
}

inline Economy economy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("economy: missing string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const std::string name = j.value("name", std::string{});
  if (kind == "linearized") {
    if (!j.contains("p_star") || !j.contains("jacobian")) {
      throw ConfigError("linearized economy needs 'p_star' and 'jacobian'");
    }
    const Vector p_star = vector_from_json(j["p_star"], "p_star");
    const auto& rows = j["jacobian"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != p_star.size()) {
      throw ConfigError("jacobian must have one row per commodity");
    }
    Matrix jac(p_star.size(), p_star.size());
    for (Eigen::Index r = 0; r < p_star.size(); ++r) {
      const Vector row = vector_from_json(rows[r], "jacobian row");
      if (row.size() != p_star.size()) throw ConfigError("jacobian row has wrong length");
      jac.row(r) = row.transpose();
    }
    return Economy::linearized(p_star, jac, j.value("project", true), name);
  }
  if (kind != "cobb_douglas" && kind != "leontief") {
    throw ConfigError("economy: unknown kind '" + kind + "'");
  }
  if (!j.contains("consumers") || !j["consumers"].is_array()) {
    throw ConfigError("economy: 'consumers' must be an array");
  }
  std::vector<Consumer> consumers;
  for (const auto& c : j["consumers"]) {
    if (!c.contains("alphas") || !c.contains("endowments")) {
      throw ConfigError("consumer needs 'alphas' and 'endowments'");
    }
    consumers.push_back(
        {vector_from_json(c["alphas"], "alphas"), vector_from_json(c["endowments"], "endowments")});
  }
  return kind == "cobb_douglas" ? Economy::cobb_douglas(std::move(consumers), name)
                                : Economy::leontief(std::move(consumers), name);
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

inline Economy load_economy(const std::filesystem::path& path) {
  return economy_from_json(read_json(path));
}

inline void save_economy(const Economy& economy, const std::filesystem::path& path) {
  write_text(path, economy_to_json(economy).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Trajectory CSV: step,time,p_1..p_n,xi_norm,angle_prev,angle_eq,A

inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const Eigen::Index n = traj.empty() ? 0 : traj.front().prices.size();
  out << "step,time";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",p_" << i;
  out << ",xi_norm,angle_prev,angle_eq,A\n";
  for (const auto& pt : traj.points) {
    out << pt.step << ',' << format_number(pt.time);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(pt.prices[i]);
    out << ',' << format_number(pt.xi_norm) << ',' << format_number(pt.angle_prev) << ','
        << format_number(pt.angle_eq) << ',' << format_number(pt.scale) << '\n';
  }
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  write_trajectory_csv(traj, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports

inline json complex_list(const std::vector<analysis::Complex>& values) {
  json out = json::array();
  for (const auto& z : values) out.push_back({z.real(), z.imag()});
  return out;
}

inline json to_json(const analysis::StabilityReport& r) {
  json j;
  j["equilibrium"] = to_json(r.equilibrium);
  j["fd_step"] = r.fd_step;
  j["eigenvalues"] = complex_list(r.eigenvalues);
  j["tangent_eigenvalues"] = complex_list(r.tangent_eigenvalues);
  j["zero_mode_residual"] = r.zero_mode_residual;
  j["jacobian_norm"] = r.jacobian_norm;
  j["stable"] = r.stable;
  j["has_complex_modes"] = r.has_complex_modes;
  j["lambda_m"] = r.lambda_m ? json(*r.lambda_m) : json(nullptr);
  j["predicted_rate"] =
      r.predicted_rate ? json({r.predicted_rate->real(), r.predicted_rate->imag()}) : json(nullptr);
  j["fitted_rate"] = r.fitted_rate ? json(*r.fitted_rate) : json(nullptr);
  return j;
}

inline json to_json(const analysis::CycleReport& r) {
  return {{"a", to_json(r.a)},
          {"b", to_json(r.b)},
          {"alpha", r.alpha},
          {"repeats", r.repeats},
          {"max_return_distance", r.max_return_distance},
          {"xi_hat_scale", number_or_null(r.xi_hat_scale)},
          {"xi_norm_at_a", number_or_null(r.xi_norm_at_a)},
          {"eq21_residual", number_or_null(r.eq21_residual)},
          {"alpha_predicted", number_or_null(r.alpha_predicted)}};
}

inline json to_json(const analysis::SweepRow& row) {
  return {{"gamma_hat", row.gamma_hat},
          {"outcome", analysis::to_string(row.outcome)},
          {"alpha_measured", number_or_null(row.alpha_measured)},
          {"alpha_predicted", number_or_null(row.alpha_predicted)},
          {"eq21_residual", number_or_null(row.eq21_residual)},
          {"converged", row.converged},
          {"message", row.message}};
}

/// gamma_hat,alpha_measured,alpha_predicted,eq21_residual,converged
inline std::string sweep_csv(const std::vector<analysis::SweepRow>& rows) {
  std::ostringstream out;
  out << "gamma_hat,alpha_measured,alpha_predicted,eq21_residual,converged\n";
  for (const auto& r : rows) {
    out << format_number(r.gamma_hat) << ',' << format_number(r.alpha_measured) << ','
        << format_number(r.alpha_predicted) << ',' << format_number(r.eq21_residual) << ','
        << (r.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace tatonnement::io
