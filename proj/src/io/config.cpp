// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/io.hpp"
#include "hrtrain/error.hpp"

#include <cmath>
#include <set>

namespace hrtrain::io {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw Error(Errc::ConfigInvalid, path + ": " + msg);
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "must be finite");
  return v;
}

std::int64_t get_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_unsigned(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) bad(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

void check_scenario(double c, const std::string& path) {
  if (c < 0.0 || c > 1.0) bad(path, "scenario C must lie in [0, 1]");
}

}  // namespace

FomProblem RunConfig::problem(double scenario) const {
  FomProblem p;
  p.n_cells = n_cells;
  p.diffusion = diffusion;
  p.dt = dt;
  p.t_end = t_end;
  p.scenario = scenario;
  p.quadrature_points = quadrature_points;
  return p;
}

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) bad("$", "config must be a JSON object");
  static const std::set<std::string> known = {
      "schema_version", "n_cells",         "diffusion",          "dt",
      "t_end",          "snapshot_stride", "quadrature_points",  "training_scenarios",
      "test_scenario",  "rom_dim",         "case_kind",          "seed",
      "mem_budget"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) bad(key, "unknown field");

  RunConfig c;
  if (j.contains("schema_version")) {
    c.schema_version = static_cast<int>(get_integer(j["schema_version"], "schema_version"));
    if (c.schema_version != kSchemaVersion)
      throw Error(Errc::SchemaMismatch, "schema_version: expected " + std::to_string(kSchemaVersion) +
                                            ", got " + std::to_string(c.schema_version));
  }
  if (j.contains("n_cells")) {
    c.n_cells = get_integer(j["n_cells"], "n_cells");
    if (c.n_cells < 1) bad("n_cells", "must be positive");
  }
  if (j.contains("diffusion")) {
    c.diffusion = get_number(j["diffusion"], "diffusion");
    if (c.diffusion <= 0.0) bad("diffusion", "must be positive");
  }
  if (j.contains("dt")) {
    c.dt = get_number(j["dt"], "dt");
    if (c.dt <= 0.0) bad("dt", "must be positive");
  }
  if (j.contains("t_end")) {
    c.t_end = get_number(j["t_end"], "t_end");
    if (c.t_end <= 0.0) bad("t_end", "must be positive");
  }
  if (std::llround(c.t_end / c.dt) < 1) bad("t_end", "must cover at least one time step");
  if (j.contains("snapshot_stride")) {
    c.snapshot_stride = get_integer(j["snapshot_stride"], "snapshot_stride");
    if (c.snapshot_stride < 1) bad("snapshot_stride", "must be positive");
  }
  if (std::llround(c.t_end / c.dt) < c.snapshot_stride)
    bad("snapshot_stride", "larger than the number of time steps");
  if (j.contains("quadrature_points")) {
    c.quadrature_points = static_cast<int>(get_integer(j["quadrature_points"], "quadrature_points"));
    if (c.quadrature_points < 2 || c.quadrature_points > 4) bad("quadrature_points", "must be 2, 3 or 4");
  }
  if (j.contains("training_scenarios")) {
    const Json& s = j["training_scenarios"];
    if (!s.is_array() || s.empty()) bad("training_scenarios", "expected a non-empty array");
    c.training_scenarios.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "training_scenarios[" + std::to_string(i) + "]";
      const double v = get_number(s[i], path);
      check_scenario(v, path);
      c.training_scenarios.push_back(v);
    }
  }
  if (j.contains("test_scenario")) {
    c.test_scenario = get_number(j["test_scenario"], "test_scenario");
    check_scenario(c.test_scenario, "test_scenario");
  }
  if (j.contains("rom_dim")) {
    c.rom_dim = get_integer(j["rom_dim"], "rom_dim");
    if (c.rom_dim < 1) bad("rom_dim", "must be positive");
  }
  if (j.contains("case_kind")) {
    if (!j["case_kind"].is_string()) bad("case_kind", "expected a string");
    try {
      c.case_kind = case_kind_from_string(j["case_kind"].get<std::string>());
    } catch (const Error& e) {
      bad("case_kind", e.what());
    }
  }
  if (j.contains("seed")) c.seed = get_unsigned(j["seed"], "seed");
  if (j.contains("mem_budget")) {
    c.mem_budget = get_unsigned(j["mem_budget"], "mem_budget");
    if (c.mem_budget == 0) bad("mem_budget", "must be positive");
  }
  return c;
}

RunConfig load_config(const fs::path& path) { return parse_config(read_json(path)); }

Json to_json(const RunConfig& c) {
  return Json{{"schema_version", c.schema_version},
              {"n_cells", c.n_cells},
              {"diffusion", c.diffusion},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"snapshot_stride", c.snapshot_stride},
              {"quadrature_points", c.quadrature_points},
              {"training_scenarios", c.training_scenarios},
              {"test_scenario", c.test_scenario},
              {"rom_dim", c.rom_dim},
              {"case_kind", std::string(to_string(c.case_kind))},
              {"seed", c.seed},
              {"mem_budget", c.mem_budget}};
}

Json to_json(const SparseRule& rule) {
  Json support = Json::array();
  for (Index i : rule.indices) support.push_back(rule.weights[i]);
  // Iterate t is supported on the first t + 1 indices.
  Json iterates = Json::array();
  for (std::size_t t = 0; t < rule.iterates.size(); ++t) {
    Json w = Json::array();
    for (std::size_t i = 0; i <= t && i < rule.indices.size(); ++i)
      w.push_back(rule.iterates[t][rule.indices[i]]);
    iterates.push_back(std::move(w));
  }
  return Json{{"iterates", iterates},
              {"schema_version", kSchemaVersion},
              {"case_kind", std::string(to_string(rule.kind))},
              {"length", rule.weights.size()},
              {"indices", rule.indices},
              {"weights", support},
              {"residual_history", rule.residual_history},
              {"final_residual", rule.final_residual},
              {"g_norm", rule.g_norm},
              {"stop", std::string(to_string(rule.stop))}};
}

SparseRule rule_from_json(const Json& j) {
  try {
    require(j.value("schema_version", -1) == kSchemaVersion, Errc::SchemaMismatch,
            "rule: unsupported schema_version");
    SparseRule rule;
    rule.kind = case_kind_from_string(j.at("case_kind").get<std::string>());
    const Index length = j.at("length").get<Index>();
    rule.indices = j.at("indices").get<IndexList>();
    const auto w = j.at("weights").get<std::vector<double>>();
    require(w.size() == rule.indices.size(), Errc::IoError, "rule: indices and weights differ in length");
    rule.weights = Vector::Zero(length);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Index m = rule.indices[i];
      require(m >= 0 && m < length, Errc::IoError, "rule: index out of range");
      rule.weights[m] = w[i];
    }
    rule.residual_history = j.at("residual_history").get<std::vector<double>>();
    rule.final_residual = j.at("final_residual").get<double>();
    rule.g_norm = j.at("g_norm").get<double>();
    if (j.contains("iterates"))
      for (const auto& it : j.at("iterates")) {
        const auto v = it.get<std::vector<double>>();
        require(v.size() <= rule.indices.size(), Errc::IoError, "rule: iterate longer than the support");
        Vector wt = Vector::Zero(length);
        for (std::size_t i = 0; i < v.size(); ++i) wt[rule.indices[i]] = v[i];
        rule.iterates.push_back(std::move(wt));
      }
    const std::string stop = j.at("stop").get<std::string>();
    for (auto s : {StopReason::ReachedMaxTerms, StopReason::ToleranceMet, StopReason::NoDescentCandidate,
                   StopReason::ResidualAtRoundoff})
      if (to_string(s) == stop) rule.stop = s;
    return rule;
  } catch (const Json::exception& e) {
    throw Error(Errc::IoError, std::string("rule: ") + e.what());
  }
}

Json to_json(const BoundReport& b) {
  return Json{{"eta_thin", b.eta_thin},         {"kappa", b.kappa},
              {"w_dev_norm", b.w_dev_norm},     {"aposteriori", b.aposteriori},
              {"epsilon", b.epsilon},           {"d_min", b.d_min},
              {"d_dot_wtruth", b.d_dot_wtruth}, {"wtruth_norm", b.wtruth_norm},
              {"m_c", b.m_c},                   {"apriori", b.apriori}};
}

}  // namespace hrtrain::io
