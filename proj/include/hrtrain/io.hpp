// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// File formats and command implementations behind the `hrtrain` binary.
//
// HRMX: "HRMX" | u32 version = 1 | u64 rows | u64 cols | rows·cols f64, all
// little-endian, payload row-major.

#ifndef HRTRAIN_IO_HPP
#define HRTRAIN_IO_HPP

#include "hrtrain/benchfem.hpp"
#include "hrtrain/bounds.hpp"
#include "hrtrain/compression.hpp"
#include "hrtrain/training.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hrtrain::io {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void write_hrmx(const fs::path& path, const DenseMatrix& a);
DenseMatrix read_hrmx(const fs::path& path);
/// Write to `<path>.tmp` then rename over `path`.
void write_file_atomic(const fs::path& path, const std::string& content);
Json read_json(const fs::path& path);
void write_json(const fs::path& path, const Json& j);

/// Vectors travel as single-column HRMX matrices.
DenseMatrix as_column(const Vector& v);
Vector as_vector(const DenseMatrix& a);

struct RunConfig {
  int schema_version = kSchemaVersion;
  Index n_cells = 2000;
  double diffusion = 1.0;
  double dt = 0.002;
  double t_end = 1.5;
  Index snapshot_stride = 2;
  int quadrature_points = 2;
  std::vector<double> training_scenarios = {0.0, 0.5, 1.0};
  double test_scenario = 0.75;
  Index rom_dim = 20;
  CaseKind case_kind = CaseKind::Quadrature;
  std::uint64_t seed = 0;
  std::uint64_t mem_budget = kDefaultMemoryBudget;

  FomProblem problem(double scenario) const;
};

/// Missing keys keep their defaults. Errors carry the JSON path of the
/// offending field, e.g. "training_scenarios[2]".
RunConfig parse_config(const Json& j);
RunConfig load_config(const fs::path& path);
Json to_json(const RunConfig& c);

Json to_json(const SparseRule& rule);
SparseRule rule_from_json(const Json& j);
Json to_json(const BoundReport& b);

struct CommandOptions {
  std::optional<fs::path> config;
  fs::path out = ".";
  std::string mode = "compressed";
  Index mc = 0;
  std::optional<Index> kthin;
  std::optional<double> rel_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> mem_budget;
  std::vector<fs::path> rules;      // crom-eval, bound
  std::vector<Index> mc_sweep;      // crom-eval: truncate each rule to these sizes
  std::optional<double> scenario;   // crom-eval, defaults to the test scenario
  std::vector<fs::path> manifests;  // report
};

// Each command writes its artifacts under `out` and returns its manifest.
Json cmd_gen_snapshots(const CommandOptions& o);
Json cmd_assemble(const CommandOptions& o);
Json cmd_compress(const CommandOptions& o);
Json cmd_train(const CommandOptions& o);
Json cmd_bound(const CommandOptions& o);
Json cmd_crom_eval(const CommandOptions& o);
Json cmd_report(const CommandOptions& o);

/// Reads the dataset written by `assemble`.
TrainingDataset load_dataset(const fs::path& dir);
/// Reads the compressed dataset written by `compress`.
CompressedDataset load_compressed(const fs::path& dir);

/// One CSV line, numbers printed with %.17g.
std::string csv_number(double x);

}  // namespace hrtrain::io

#endif  // HRTRAIN_IO_HPP
