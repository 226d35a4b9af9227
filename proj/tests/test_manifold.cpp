// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"
#include "hrtrain/manifold.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hrtrain;
using hrtrain::testing::random_matrix;

namespace {

std::vector<double> sorted_entries(const DenseMatrix& a) {
  std::vector<double> v(a.data(), a.data() + a.size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("quadrature dataset: Ã rows are g^k ∘ pⁿ") {
  std::mt19937_64 rng(31);
  const Index m = 7, k = 4, n_r = 3;
  const DenseMatrix p = random_matrix(n_r, m, rng);
  const DenseMatrix g = random_matrix(m, k, rng);
  const auto ds = manifold::build_quadrature_dataset(p, g, Vector::Ones(m));
  CHECK(ds.d == Vector::Ones(m));
  const auto a = manifold::assemble_dense_a(ds);
  REQUIRE(a.a.rows() == k * n_r);
  for (Index kk = 0; kk < k; ++kk)
    for (Index n = 0; n < n_r; ++n)
      for (Index j = 0; j < m; ++j) CHECK(a.a(kk * n_r + n, j) == doctest::Approx(g(j, kk) * p(n, j)));
}

TEST_CASE("cell dataset: Ã entries are local forms against ROM functions") {
  // Two cells on three FOM functions, J⁰ = {0, 1}, J¹ = {1, 2}.
  DenseMatrix lambda(1, 3);
  lambda << 1.0, 2.0, 3.0;
  DenseMatrix local(4, 1);
  local << 0.5, 0.25, 1.0, 2.0;
  const auto ds = manifold::build_cell_dataset(lambda, {{0, 1}, {1, 2}}, local, Vector::Constant(2, 0.5),
                                               Vector::Ones(2), false);
  CHECK(ds.kind == CaseKind::CellGeneral);
  const auto a = manifold::assemble_dense_a(ds);
  CHECK(a.a(0, 0) == doctest::Approx(1.0 * 0.5 + 2.0 * 0.25));
  CHECK(a.a(0, 1) == doctest::Approx(2.0 * 1.0 + 3.0 * 2.0));
  CHECK(ds.d.sum() == doctest::Approx(1.0));
}

TEST_CASE("dense A and C hold the same entries in their fixed orderings") {
  std::mt19937_64 rng(32);
  for (auto kind : {CaseKind::Quadrature, CaseKind::CellGeneral, CaseKind::CellSimplified}) {
    const auto ds = hrtrain::testing::random_dataset(kind, 9, 5, 3, rng);
    const auto a = manifold::assemble_dense_a(ds);
    const auto c = manifold::assemble_dense_c(ds);
    CHECK(sorted_entries(a.a) == sorted_entries(c));
    const DenseMatrix back = manifold::reorder_c_to_a(c, ds.summands(), ds.test_functions(), ds.snapshots());
    CHECK(back == a.a);
    CHECK(manifold::reorder_a_to_c(a.a, ds.summands(), ds.test_functions()) == c);
    // C̃ = N·Ĝ with the explicit factor.
    CHECK((manifold::dense_n(ds.structure) * ds.g_hat - c).norm() <= 1e-12 * c.norm());
  }
}

TEST_CASE("simplified factor: N = T_all·N̆") {
  std::mt19937_64 rng(33);
  const auto ds = hrtrain::testing::random_cells(6, 4, 3, true, rng);
  const DenseMatrix n = manifold::dense_n(ds.structure);
  const DenseMatrix t = manifold::dense_t_all(ds.structure);
  const DenseMatrix nb = manifold::dense_n_breve(ds.structure);
  CHECK((t * nb - n).norm() <= 1e-14 * n.norm());
  // Columns of N in different groups are orthogonal.
  const DenseMatrix gram = n.transpose() * n;
  const auto& off = ds.structure.offsets;
  for (Index g = 0; g < ds.summands(); ++g)
    for (Index h = g + 1; h < ds.summands(); ++h)
      CHECK(gram.block(off[g], off[h], off[g + 1] - off[g], off[h + 1] - off[h]).norm() == 0.0);
}

TEST_CASE("inactive summands are flagged") {
  DenseMatrix p(2, 3);
  p << 1, 0, 2, 3, 0, 4;
  const auto ds = manifold::build_quadrature_dataset(p, DenseMatrix::Ones(3, 2), Vector::Ones(3));
  CHECK(ds.structure.inactive == std::vector<char>{0, 1, 0});
  CHECK(ds.structure.active_count() == 2);
}

TEST_CASE("memory budget and validation errors") {
  std::mt19937_64 rng(34);
  const auto ds = hrtrain::testing::random_quadrature(10, 4, 2, rng);
  CHECK(manifold::dense_a_bytes(ds) == 8u * 4 * 2 * 10);
  try {
    manifold::assemble_dense_a(ds, 100);
    FAIL("expected MemoryBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MemoryBudgetExceeded);
  }
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code_of([] {
          manifold::build_quadrature_dataset(DenseMatrix::Ones(1, 2), DenseMatrix::Ones(3, 1),
                                             Vector::Ones(2));
        }) == Errc::DimensionMismatch);
  CHECK(code_of([] {
          Vector w = Vector::Ones(2);
          w[1] = 0.0;
          manifold::build_quadrature_dataset(DenseMatrix::Ones(1, 2), DenseMatrix::Ones(2, 1), w);
        }) == Errc::NonPositiveTruthWeight);
  CHECK(code_of([] {
          manifold::build_cell_dataset(DenseMatrix::Ones(1, 2), {{0, 1}}, DenseMatrix::Ones(2, 1),
                                       Vector::Zero(1), Vector::Ones(1), false);
        }) == Errc::ZeroCellMeasure);
  CHECK(code_of([] {
          DenseMatrix g = DenseMatrix::Ones(2, 1);
          g(0, 0) = std::numeric_limits<double>::infinity();
          manifold::build_quadrature_dataset(DenseMatrix::Ones(1, 2), g, Vector::Ones(2));
        }) == Errc::NonFinite);
  CHECK(case_kind_from_string("cell_general") == CaseKind::CellGeneral);
  CHECK(to_string(CaseKind::CellSimplified) == "cell_simplified");
  CHECK_THROWS_AS(case_kind_from_string("cells"), Error);
}
