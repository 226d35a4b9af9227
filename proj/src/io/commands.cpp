// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/io.hpp"
#include "hrtrain/error.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace hrtrain::io {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Json dims_of(const DenseMatrix& a) { return Json::array({a.rows(), a.cols()}); }

// Writes `a` under dir/name and records it in the manifest's file table.
void store(Json& manifest, const fs::path& dir, const std::string& key, const std::string& name,
           const DenseMatrix& a) {
  write_hrmx(dir / name, a);
  manifest["files"][key] = {{"path", name}, {"dims", dims_of(a)}};
}

DenseMatrix load(const Json& manifest, const fs::path& dir, const std::string& key) {
  require(manifest.contains("files") && manifest["files"].contains(key), Errc::SchemaMismatch,
          "manifest lists no file '" + key + "'");
  const Json& entry = manifest["files"][key];
  DenseMatrix a = read_hrmx(dir / entry.at("path").get<std::string>());
  const auto dims = entry.at("dims").get<std::vector<Index>>();
  require(dims.size() == 2 && dims[0] == a.rows() && dims[1] == a.cols(), Errc::SchemaMismatch,
          "file '" + key + "' does not match its declared dims");
  return a;
}

Json load_manifest(const fs::path& path, const std::string& command) {
  require(fs::exists(path), Errc::IoError,
          path.string() + " not found (run `" + command + "` first)");
  Json j = read_json(path);
  require(j.value("schema_version", -1) == kSchemaVersion, Errc::SchemaMismatch,
          path.string() + ": unsupported schema_version");
  require(j.value("command", std::string()) == command, Errc::SchemaMismatch,
          path.string() + ": not a `" + command + "` manifest");
  return j;
}

Json manifest_header(const std::string& command) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}};
}

// Config precedence: --config, then the config recorded by gen-snapshots.
RunConfig resolve_config(const CommandOptions& o, bool need_snapshots) {
  RunConfig c;
  if (o.config) {
    c = load_config(*o.config);
  } else if (need_snapshots || fs::exists(o.out / "snapshots.json")) {
    c = parse_config(load_manifest(o.out / "snapshots.json", "gen-snapshots").at("config"));
  }
  if (o.seed) c.seed = *o.seed;
  if (o.mem_budget) c.mem_budget = *o.mem_budget;
  return c;
}

DenseMatrix index_column(const std::vector<Index>& v) {
  DenseMatrix a(static_cast<Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) a(static_cast<Index>(i), 0) = static_cast<double>(v[i]);
  return a;
}

DenseMatrix double_column(const std::vector<double>& v) {
  return as_column(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
}

RomBasis load_basis(const fs::path& dir) {
  const Json snap = load_manifest(dir / "snapshots.json", "gen-snapshots");
  RomBasis basis;
  basis.v = load(snap, dir, "basis");
  basis.spectrum = as_vector(load(snap, dir, "spectrum"));
  return basis;
}

Index checked_index(double x, const char* what) {
  const auto i = static_cast<Index>(std::llround(x));
  require(static_cast<double>(i) == x && i >= 0, Errc::IoError, std::string(what) + ": not an index");
  return i;
}

}  // namespace

Json cmd_gen_snapshots(const CommandOptions& o) {
  const RunConfig c = o.config ? load_config(*o.config) : RunConfig{};
  RunConfig cfg = c;
  if (o.seed) cfg.seed = *o.seed;
  if (o.mem_budget) cfg.mem_budget = *o.mem_budget;

  auto t0 = Clock::now();
  std::vector<SnapshotSet> sets;
  for (double scenario : cfg.training_scenarios)
    sets.push_back(benchfem::run_fom(cfg.problem(scenario), cfg.snapshot_stride));
  const SnapshotSet s = benchfem::merge_snapshots(sets);
  const double fom_ms = ms_since(t0);

  t0 = Clock::now();
  const RomBasis basis = benchfem::pod_basis(s, cfg.rom_dim);
  const double pod_ms = ms_since(t0);

  Json m = manifest_header("gen-snapshots");
  m["config"] = to_json(cfg);
  m["seed"] = cfg.seed;
  store(m, o.out, "states", "snapshots_states.hrmx", s.states);
  store(m, o.out, "nonlinearity", "snapshots_nonlinearity.hrmx", s.nonlinearity);
  store(m, o.out, "times", "snapshots_times.hrmx", double_column(s.times));
  store(m, o.out, "scenarios", "snapshots_scenarios.hrmx", double_column(s.scenarios));
  store(m, o.out, "basis", "basis.hrmx", basis.v);
  store(m, o.out, "spectrum", "basis_spectrum.hrmx", as_column(basis.spectrum));
  const Fem1d fem(cfg.n_cells, cfg.quadrature_points);
  m["mesh"] = {{"n_cells", cfg.n_cells}, {"nodes", fem.nodes()}, {"quadrature_points", cfg.quadrature_points}};
  m["dims"] = {{"N", s.states.rows()}, {"M_quad", s.nonlinearity.rows()}, {"K", s.size()},
               {"N_r", basis.dim()}};
  m["steps_per_scenario"] = cfg.problem(0.0).steps();
  m["timings_ms"] = {{"fom", fom_ms}, {"pod", pod_ms}};
  write_json(o.out / "snapshots.json", m);
  return m;
}

Json cmd_assemble(const CommandOptions& o) {
  const RunConfig cfg = resolve_config(o, true);
  const Json snap = load_manifest(o.out / "snapshots.json", "gen-snapshots");
  auto t0 = Clock::now();
  SnapshotSet s;
  s.states = load(snap, o.out, "states");
  s.nonlinearity = load(snap, o.out, "nonlinearity");
  RomBasis basis;
  basis.v = load(snap, o.out, "basis");
  const Fem1d fem(cfg.n_cells, cfg.quadrature_points);
  const TrainingDataset ds =
      cfg.case_kind == CaseKind::Quadrature
          ? benchfem::quadrature_dataset(fem, basis, s)
          : benchfem::cell_dataset(fem, basis, s, cfg.case_kind == CaseKind::CellSimplified);
  const double assembly_ms = ms_since(t0);

  Json m = manifest_header("assemble");
  m["case_kind"] = std::string(to_string(ds.kind));
  m["config"] = to_json(cfg);
  store(m, o.out, "p", "dataset_p.hrmx", ds.structure.p);
  store(m, o.out, "g_hat", "dataset_g_hat.hrmx", ds.g_hat);
  store(m, o.out, "truth_weights", "dataset_truth_weights.hrmx", as_column(ds.truth_weights));
  store(m, o.out, "d", "dataset_d.hrmx", as_column(ds.d));
  store(m, o.out, "group_sizes", "dataset_group_sizes.hrmx", index_column(ds.structure.group_sizes));
  const auto bytes = manifold::dense_a_bytes(ds);
  m["dims"] = {{"M", ds.summands()}, {"M_J", ds.structure.m_j()}, {"K", ds.snapshots()},
               {"N_r", ds.test_functions()}};
  m["inactive_summands"] = ds.summands() - ds.structure.active_count();
  m["dense_a_bytes"] = bytes;
  m["mem_budget"] = cfg.mem_budget;
  m["dense_a_fits_budget"] = bytes <= cfg.mem_budget;
  m["timings_ms"] = {{"assembly", assembly_ms}};
  write_json(o.out / "dataset.json", m);
  return m;
}

TrainingDataset load_dataset(const fs::path& dir) {
  const Json m = load_manifest(dir / "dataset.json", "assemble");
  const CaseKind kind = case_kind_from_string(m.at("case_kind").get<std::string>());
  const Vector sizes = as_vector(load(m, dir, "group_sizes"));
  std::vector<Index> group_sizes(static_cast<std::size_t>(sizes.size()));
  for (Index i = 0; i < sizes.size(); ++i) group_sizes[i] = checked_index(sizes[i], "group size");
  TrainingDataset ds;
  ds.kind = kind;
  ds.structure = make_structured_n(kind, load(m, dir, "p"), std::move(group_sizes));
  ds.g_hat = load(m, dir, "g_hat");
  ds.truth_weights = as_vector(load(m, dir, "truth_weights"));
  ds.d = as_vector(load(m, dir, "d"));
  require(ds.g_hat.rows() == ds.structure.m_j() && ds.truth_weights.size() == ds.summands() &&
              ds.d.size() == ds.summands(),
          Errc::SchemaMismatch, "dataset files have inconsistent dims");
  return ds;
}

Json cmd_compress(const CommandOptions& o) {
  require(!(o.kthin && o.rel_tol), Errc::InvalidArgument, "--kthin and --rel-tol are exclusive");
  auto t0 = Clock::now();
  const TrainingDataset ds = load_dataset(o.out);
  const double load_ms = ms_since(t0);

  t0 = Clock::now();
  const double rel_tol = o.rel_tol.value_or(1e-6);
  const CompressedDataset cds =
      o.kthin ? compression::compress(ds, *o.kthin) : compression::compress_to_tolerance(ds, rel_tol);
  const double compression_ms = ms_since(t0);

  Json m = manifest_header("compress");
  m["case_kind"] = std::string(to_string(cds.kind));
  if (!o.kthin) m["rel_tol"] = rel_tol;
  store(m, o.out, "a_thin", "compressed_a_thin.hrmx", cds.a_thin);
  store(m, o.out, "g_t", "compressed_g_t.hrmx", cds.g_t);
  store(m, o.out, "right", "compressed_right.hrmx", cds.right);
  store(m, o.out, "singular_values", "compressed_singular_values.hrmx", as_column(cds.singular_values));
  m["dims"] = {{"M", cds.summands}, {"M_J", cds.g_t.rows()}, {"K", cds.snapshots},
               {"N_r", cds.test_functions}, {"K_thin", cds.k_thin}};
  m["kappa"] = cds.kappa;
  m["kappa_effective"] = cds.kappa_effective;
  m["degenerate_truncation"] = cds.degenerate_truncation;
  m["compression_ratio"] = static_cast<double>(cds.k_thin) / static_cast<double>(cds.snapshots);
  m["timings_ms"] = {{"load", load_ms}, {"compression", compression_ms}};
  write_json(o.out / "compressed.json", m);
  return m;
}

CompressedDataset load_compressed(const fs::path& dir) {
  const Json m = load_manifest(dir / "compressed.json", "compress");
  const TrainingDataset ds = load_dataset(dir);
  CompressedDataset cds;
  cds.kind = ds.kind;
  cds.summands = ds.summands();
  cds.test_functions = ds.test_functions();
  cds.snapshots = ds.snapshots();
  cds.k_thin = m.at("dims").at("K_thin").get<Index>();
  cds.a_thin = load(m, dir, "a_thin");
  cds.g_t = load(m, dir, "g_t");
  cds.right = load(m, dir, "right");
  cds.singular_values = as_vector(load(m, dir, "singular_values"));
  cds.kappa = m.at("kappa").get<double>();
  cds.kappa_effective = m.at("kappa_effective").get<double>();
  cds.degenerate_truncation = m.at("degenerate_truncation").get<bool>();
  cds.truth_weights = ds.truth_weights;
  cds.d = ds.d;
  cds.inactive = ds.structure.inactive;
  require(cds.a_thin.rows() == cds.k_thin * cds.test_functions && cds.a_thin.cols() == cds.summands,
          Errc::SchemaMismatch, "compressed dataset does not match the assembled dataset");
  return cds;
}

Json cmd_train(const CommandOptions& o) {
  require(o.mode == "standard" || o.mode == "compressed", Errc::InvalidArgument,
          "--mode must be standard or compressed");
  require(o.mc >= 1, Errc::InvalidArgument, "--mc must be positive");
  const RunConfig cfg = resolve_config(o, false);
  const bool have_compressed = fs::exists(o.out / "compressed.json");

  Json m = manifest_header("train");
  m["mode"] = o.mode;
  auto t0 = Clock::now();
  const TrainingDataset ds = load_dataset(o.out);
  const auto bytes = manifold::dense_a_bytes(ds);
  std::optional<CompressedDataset> cds;
  if (o.mode == "compressed" || have_compressed) cds = load_compressed(o.out);
  m["timings_ms"]["load"] = ms_since(t0);

  LsProblem problem;
  t0 = Clock::now();
  if (o.mode == "standard") {
    problem = training::build_ls_standard(manifold::assemble_dense_a(ds, cfg.mem_budget), ds);
    m["timings_ms"]["assembly"] = ms_since(t0);
  } else {
    problem = training::build_ls_compressed(*cds);
    m["timings_ms"]["assembly"] = ms_since(t0);
    const Json cm = load_manifest(o.out / "compressed.json", "compress");
    m["timings_ms"]["compression"] = cm.at("timings_ms").at("compression");
  }
  t0 = Clock::now();
  OmpOptions opts;
  opts.max_terms = o.mc;
  opts.record_iterates = true;
  const SparseRule rule = training::omp_train(problem, opts);
  m["timings_ms"]["training"] = ms_since(t0);
  problem = LsProblem{};

  m["case_kind"] = std::string(to_string(ds.kind));
  m["dims"] = {{"M", ds.summands()}, {"M_J", ds.structure.m_j()}, {"K", ds.snapshots()},
               {"N_r", ds.test_functions()}, {"M_c", o.mc}};
  if (cds) m["dims"]["K_thin"] = cds->k_thin;
  m["equations"] = o.mode == "standard" ? ds.snapshots() * ds.test_functions()
                                        : cds->k_thin * ds.test_functions();
  m["equations_standard"] = ds.snapshots() * ds.test_functions();
  if (cds) m["equations_compressed"] = cds->k_thin * ds.test_functions();
  m["dense_a_bytes"] = bytes;
  m["rule_size"] = rule.size();
  m["final_residual"] = rule.final_residual;
  m["g_norm"] = rule.g_norm;
  m["stop"] = std::string(to_string(rule.stop));
  if (bytes <= cfg.mem_budget) m["eta"] = training::residual_standard(ds, rule, cfg.mem_budget);
  if (cds) {
    m["kappa"] = cds->kappa_effective;
    const BoundReport ap = bounds::apriori(*cds, rule);
    m["eta_thin"] = ap.eta_thin;
    m["bounds"] = to_json(ap);
  }

  Json rj = to_json(rule);
  rj["mode"] = o.mode;
  const std::string rule_name = "rule_" + o.mode + ".json";
  write_json(o.out / rule_name, rj);
  m["files"]["rule"] = rule_name;
  write_json(o.out / ("train_" + o.mode + ".json"), m);
  return m;
}

Json cmd_bound(const CommandOptions& o) {
  require(!o.rules.empty(), Errc::InvalidArgument, "bound needs at least one --rule");
  const RunConfig cfg = resolve_config(o, false);
  const CompressedDataset cds = load_compressed(o.out);
  const TrainingDataset ds = load_dataset(o.out);
  const bool dense_fits = manifold::dense_a_bytes(ds) <= cfg.mem_budget;
  Json m = manifest_header("bound");
  m["rows"] = Json::array();
  for (const auto& path : o.rules) {
    const SparseRule rule = rule_from_json(read_json(path));
    require(rule.weights.size() == cds.summands, Errc::DimensionMismatch,
            path.string() + ": rule length does not match the dataset");
    Json row = to_json(bounds::apriori(cds, rule));
    row["rule"] = path.string();
    if (dense_fits) {
      const double eta = training::residual_standard(ds, rule, cfg.mem_budget);
      row["eta"] = eta;
      row["aposteriori_holds"] = eta <= row["aposteriori"].get<double>() * (1.0 + 1e-12);
    }
    m["rows"].push_back(row);
  }
  write_json(o.out / "bound.json", m);
  return m;
}

Json cmd_crom_eval(const CommandOptions& o) {
  const RunConfig cfg = resolve_config(o, true);
  const double scenario = o.scenario.value_or(cfg.test_scenario);
  require(scenario >= 0.0 && scenario <= 1.0, Errc::ConfigInvalid, "scenario: must lie in [0, 1]");
  const RomBasis basis = load_basis(o.out);
  const FomProblem p = cfg.problem(scenario);
  const Fem1d fem(p.n_cells, p.quadrature_points);

  auto t0 = Clock::now();
  const Trajectory fom = benchfem::simulate_fom(p);
  const double fom_ms = ms_since(t0);

  Json m = manifest_header("crom-eval");
  m["scenario"] = scenario;
  m["rows"] = Json::array();
  std::ostringstream csv;
  csv << "m_c,mode,rel_error,runtime_ms\n";
  auto emit = [&](Index mc, const std::string& mode, double err, double ms) {
    csv << mc << ',' << mode << ',' << csv_number(err) << ',' << csv_number(ms) << '\n';
    m["rows"].push_back({{"m_c", mc}, {"mode", mode}, {"rel_error", err}, {"runtime_ms", ms}});
  };
  emit(fem.points(), "fom", 0.0, fom_ms);

  t0 = Clock::now();
  const Trajectory rom = benchfem::run_rom(p, basis);
  emit(fem.points(), "rom", benchfem::spacetime_l2_error(rom, fom, fem.mass()), ms_since(t0));

  for (const auto& path : o.rules) {
    const Json rj = read_json(path);
    const SparseRule rule = rule_from_json(rj);
    const std::string mode = rj.value("mode", path.stem().string());
    std::vector<Index> sizes = o.mc_sweep;
    if (sizes.empty()) sizes.push_back(rule.size());
    for (Index mc : sizes) {
      const SparseRule r = mc == rule.size() ? rule : training::truncate_rule(rule, mc);
      t0 = Clock::now();
      Trajectory crom;
      try {
        crom = benchfem::run_crom(p, basis, r);
      } catch (const Error& e) {
        throw Error(e.code(), path.string() + " at M_c = " + std::to_string(mc) + ": " + e.what());
      }
      emit(mc, mode, benchfem::spacetime_l2_error(crom, fom, fem.mass()), ms_since(t0));
    }
  }
  write_file_atomic(o.out / "crom_eval.csv", csv.str());
  write_json(o.out / "crom_eval.json", m);
  return m;
}

namespace {

const std::vector<std::string> kReportColumns = {
    "source",       "mode",          "case_kind",         "M",
    "M_J",          "K",             "N_r",               "K_thin",
    "M_c",          "equations",     "equations_standard", "equations_compressed",
    "compression_ratio", "kappa",    "eta_thin",          "eta",
    "aposteriori",  "apriori",       "final_residual",    "dense_a_bytes",
    "load_ms",      "assembly_ms",   "compression_ms",    "training_ms"};

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return csv_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

Json report_row(const Json& t, const std::string& source) {
  Json r;
  r["source"] = source;
  r["mode"] = t.at("mode");
  r["case_kind"] = t.at("case_kind");
  for (const char* k : {"M", "M_J", "K", "N_r", "K_thin", "M_c"})
    r[k] = t.at("dims").contains(k) ? t["dims"][k] : Json();
  for (const char* k : {"equations", "equations_standard", "equations_compressed", "kappa",
                        "eta_thin", "eta", "final_residual", "dense_a_bytes"})
    r[k] = t.contains(k) ? t[k] : Json();
  r["compression_ratio"] =
      r["K_thin"].is_null() ? Json()
                            : Json(r["K_thin"].get<double>() / r["K"].get<double>());
  r["aposteriori"] = t.contains("bounds") ? t["bounds"]["aposteriori"] : Json();
  r["apriori"] = t.contains("bounds") ? t["bounds"]["apriori"] : Json();
  const Json& tm = t.at("timings_ms");
  for (const char* k : {"load", "assembly", "compression", "training"})
    r[std::string(k) + "_ms"] = tm.contains(k) ? tm[k] : Json();
  return r;
}

}  // namespace

Json cmd_report(const CommandOptions& o) {
  require(!o.manifests.empty(), Errc::InvalidArgument, "report needs at least one manifest");
  Json m = manifest_header("report");
  m["columns"] = kReportColumns;
  m["rows"] = Json::array();
  std::string header;
  for (std::size_t i = 0; i < kReportColumns.size(); ++i)
    header += (i ? "," : "") + kReportColumns[i];
  std::string lines;
  for (const auto& path : o.manifests) {
    const Json t = read_json(path);
    require(t.value("schema_version", -1) == kSchemaVersion, Errc::SchemaMismatch,
            path.string() + ": unsupported schema_version");
    require(t.value("command", std::string()) == "train", Errc::SchemaMismatch,
            path.string() + ": not a train report");
    const Json row = report_row(t, path.filename().string());
    std::string line;
    for (std::size_t i = 0; i < kReportColumns.size(); ++i)
      line += (i ? "," : "") + cell(row[kReportColumns[i]]);
    lines += line + "\n";
    m["rows"].push_back(row);
  }

  // Rows are appended to an existing report with the same header.
  const fs::path csv_path = o.out / "report.csv";
  std::string existing;
  if (fs::exists(csv_path)) {
    std::ifstream in(csv_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    existing = ss.str();
    require(existing.rfind(header + "\n", 0) == 0, Errc::SchemaMismatch,
            csv_path.string() + ": existing report has a different header");
  } else {
    existing = header + "\n";
  }
  write_file_atomic(csv_path, existing + lines);
  write_json(o.out / "report.json", m);
  return m;
}

}  // namespace hrtrain::io
