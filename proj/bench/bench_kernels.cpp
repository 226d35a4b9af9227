// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs OpenMP kernel timings, plus standard vs compressed training on a
// synthetic quadrature dataset. Prints CSV on stdout.

#include "hrtrain/compression.hpp"
#include "hrtrain/parallel_kernels.hpp"
#include "hrtrain/training.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

using namespace hrtrain;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / reps;
}

DenseMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DenseMatrix a(rows, cols);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  return a;
}

// Smooth low-rank integrands so the spectrum decays like real snapshot data.
TrainingDataset synthetic_dataset(Index m, Index k, Index n_r) {
  DenseMatrix p(n_r, m);
  DenseMatrix g(m, k);
  Vector w(m);
  for (Index i = 0; i < m; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    w[i] = 1.0 / static_cast<double>(m);
    for (Index n = 0; n < n_r; ++n) p(n, i) = std::cos(M_PI * static_cast<double>(n) * x);
    for (Index j = 0; j < k; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(k);
      g(i, j) = std::exp(-std::pow(x - 0.3 - 0.4 * t, 2) / 0.05) + 0.1 * std::sin(3.0 * x + t);
    }
  }
  return manifold::build_quadrature_dataset(p, g, w);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hrtrain kernel benchmark"};
  Index m = 4000, k = 300, n_r = 20, mc = 40;
  int reps = 3;
  std::uint64_t seed = 1;
  app.add_option("--m", m, "summands M");
  app.add_option("--k", k, "snapshots K");
  app.add_option("--nr", n_r, "test functions N_r");
  app.add_option("--mc", mc, "rule size for the training comparison");
  app.add_option("--reps", reps, "repetitions per kernel");
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 rng(seed);
  std::printf("kernel,variant,threads,rows,cols,ms\n");
  const int threads = omp_get_max_threads();
  auto row = [&](const char* kernel, const char* variant, Index rows, Index cols, double ms) {
    std::printf("%s,%s,%d,%lld,%lld,%.6g\n", kernel, variant, std::string(variant) == "omp" ? threads : 1,
                static_cast<long long>(rows), static_cast<long long>(cols), ms);
  };

  const DenseMatrix a = random_matrix(k * n_r, m, rng);
  const Vector x = Vector::Random(m);
  const Vector r = Vector::Random(k * n_r);
  Vector y;
  row("gemv", "serial", a.rows(), a.cols(), time_ms([&] { kernels::serial::gemv(a, x, y); }, reps));
  row("gemv", "omp", a.rows(), a.cols(), time_ms([&] { kernels::omp::gemv(a, x, y); }, reps));
  row("gemv_transposed", "serial", a.rows(), a.cols(),
      time_ms([&] { kernels::serial::gemv_transposed(a, r, y); }, reps));
  row("gemv_transposed", "omp", a.rows(), a.cols(),
      time_ms([&] { kernels::omp::gemv_transposed(a, r, y); }, reps));

  const DenseMatrix p = random_matrix(n_r, m, rng);
  const DenseMatrix g = random_matrix(m, k, rng);
  std::vector<Index> offsets(static_cast<std::size_t>(m) + 1);
  for (Index i = 0; i <= m; ++i) offsets[i] = i;
  DenseMatrix out;
  row("grouped_product_a_layout", "serial", k * n_r, m,
      time_ms([&] { kernels::serial::grouped_product_a_layout(p, offsets, g, out); }, reps));
  row("grouped_product_a_layout", "omp", k * n_r, m,
      time_ms([&] { kernels::omp::grouped_product_a_layout(p, offsets, g, out); }, reps));
  row("grouped_product_c_layout", "serial", n_r * m, k,
      time_ms([&] { kernels::serial::grouped_product_c_layout(p, offsets, g, out); }, reps));
  row("grouped_product_c_layout", "omp", n_r * m, k,
      time_ms([&] { kernels::omp::grouped_product_c_layout(p, offsets, g, out); }, reps));
  DenseMatrix c;
  kernels::omp::grouped_product_c_layout(p, offsets, g, c);
  row("reorder_c_to_a", "serial", c.rows(), c.cols(),
      time_ms([&] { kernels::serial::reorder_c_to_a(c, m, n_r, out); }, reps));
  row("reorder_c_to_a", "omp", c.rows(), c.cols(),
      time_ms([&] { kernels::omp::reorder_c_to_a(c, m, n_r, out); }, reps));

  // Training comparison on a smooth synthetic dataset.
  const TrainingDataset ds = synthetic_dataset(m, k, n_r);
  LsProblem standard;
  const double assemble_ms =
      time_ms([&] { standard = training::build_ls_standard(manifold::assemble_dense_a(ds), ds); }, 1);
  CompressedDataset cds;
  const double compress_ms =
      time_ms([&] { cds = compression::compress(ds, compression::choose_rank(ds, 1e-6)); }, 1);
  const LsProblem compressed = training::build_ls_compressed(cds);
  SparseRule rs, rc;
  const double train_std = time_ms([&] { rs = training::omp_train(standard, mc); }, 1);
  const double train_cmp = time_ms([&] { rc = training::omp_train(compressed, mc); }, 1);
  row("train_standard_assembly", "omp", standard.equations(), m, assemble_ms);
  row("train_standard_omp", "omp", standard.equations(), m, train_std);
  row("train_compressed_compression", "omp", compressed.equations(), m, compress_ms);
  row("train_compressed_omp", "omp", compressed.equations(), m, train_cmp);
  std::fprintf(stderr, "K_thin=%lld K=%lld speedup(train)=%.3g final residuals %.3e / %.3e\n",
               static_cast<long long>(cds.k_thin), static_cast<long long>(k), train_std / train_cmp,
               rs.final_residual, rc.final_residual);
  return 0;
}
