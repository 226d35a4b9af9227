// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/benchfem.hpp"
#include "hrtrain/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hrtrain::benchfem {

RomBasis pod_basis(const SnapshotSet& s, Index n_r) {
  require(n_r >= 1, Errc::InvalidArgument, "N_r must be positive");
  require(s.size() >= 1, Errc::InvalidArgument, "empty snapshot set");
  require(n_r <= std::min(s.states.rows(), s.states.cols()), Errc::RankDeficient,
          "N_r exceeds the snapshot matrix dimensions");
  kernels::require_finite(s.states, "snapshot states");
  auto svd = kernels::truncated_svd(s.states, n_r);
  const Vector& sigma = svd.singular_values;
  // Numerical rank: singular values above machine epsilon relative to σ₁.
  require(sigma[0] > 0.0 && sigma[n_r - 1] > std::numeric_limits<double>::epsilon() * sigma[0],
          Errc::RankDeficient,
          "N_r = " + std::to_string(n_r) + " exceeds the numerical rank of the snapshots");
  RomBasis basis;
  basis.v = std::move(svd.left);
  basis.spectrum = sigma;
  return basis;
}

ReducedSolver::ReducedSolver(const FomProblem& p, const RomBasis& basis, PointRule rule)
    : problem_(p), fem_((validate(p), p.n_cells), p.quadrature_points), v_(basis.v),
      rule_(std::move(rule)) {
  require(v_.rows() == fem_.nodes(), Errc::DimensionMismatch, "basis rows must equal the node count");
  require(static_cast<Index>(rule_.points.size()) == rule_.weights.size(), Errc::DimensionMismatch,
          "point rule: points and weights differ in length");
  const Index r = v_.cols();
  rule_basis_.resize(static_cast<Index>(rule_.points.size()), r);
  for (std::size_t j = 0; j < rule_.points.size(); ++j) {
    const Index m = rule_.points[j];
    require(m >= 0 && m < fem_.points(), Errc::InvalidArgument, "point rule index out of range");
    const Index c = fem_.point_cell(m);
    rule_basis_.row(static_cast<Index>(j)) =
        fem_.phi_left(m) * v_.row(c) + fem_.phi_right(m) * v_.row(c + 1);
  }
  mass_.resize(r, r);
  stiffness_.resize(r, r);
  for (Index j = 0; j < r; ++j) {
    const Vector col = v_.col(j);
    mass_.col(j) = v_.transpose() * fem_.mass().multiply(col);
    stiffness_.col(j) = v_.transpose() * fem_.stiffness().multiply(col);
  }
  boundary_ = v_.row(fem_.nodes() - 1).transpose();
}

Vector ReducedSolver::initial_state() const {
  const FomSolver fom(problem_);
  return v_.transpose() * fom.initial_state();
}

Vector ReducedSolver::nonlinear_term(const Vector& xr) const {
  Vector out = Vector::Zero(dim());
  if (!problem_.reaction) return out;
  const Vector vals = rule_basis_ * xr;
  for (Index j = 0; j < vals.size(); ++j)
    out += (rule_.weights[j] * nonlinearity(vals[j])) * rule_basis_.row(j).transpose();
  return out;
}

Vector ReducedSolver::residual(const Vector& xr, const Vector& xr_old, double t_new) const {
  Vector r = mass_ * (xr - xr_old) / problem_.dt + problem_.diffusion * (stiffness_ * xr) -
             nonlinear_term(xr);
  if (problem_.boundary_flux) r -= boundary_flux(t_new, problem_.scenario) * boundary_;
  return r;
}

Eigen::MatrixXd ReducedSolver::jacobian(const Vector& xr) const {
  Eigen::MatrixXd j = mass_ / problem_.dt + problem_.diffusion * stiffness_;
  if (!problem_.reaction) return j;
  const Vector vals = rule_basis_ * xr;
  for (Index q = 0; q < vals.size(); ++q) {
    const double dfw = rule_.weights[q] * nonlinearity_derivative(vals[q]);
    j.noalias() -= dfw * rule_basis_.row(q).transpose() * rule_basis_.row(q);
  }
  return j;
}

Vector ReducedSolver::step(const Vector& xr_old, double t_new, Index step_index) const {
  Vector x = xr_old;
  Vector r = residual(x, xr_old, t_new);
  const double tol = std::max(problem_.newton.abs_tol, problem_.newton.rel_tol * r.norm());
  for (int it = 0; it < problem_.newton.max_iterations; ++it) {
    x -= jacobian(x).partialPivLu().solve(r);
    r = residual(x, xr_old, t_new);
    require(r.allFinite(), Errc::NewtonDiverged,
            "reduced model: non-finite residual at step " + std::to_string(step_index));
    if (r.norm() <= tol) return x;
  }
  throw Error(Errc::NewtonDiverged, "reduced model: no convergence at step " +
                                        std::to_string(step_index) + " (residual " +
                                        std::to_string(r.norm()) + ")");
}

PointRule truth_rule(const Fem1d& fem) {
  PointRule rule;
  rule.points.resize(static_cast<std::size_t>(fem.points()));
  for (Index m = 0; m < fem.points(); ++m) rule.points[m] = m;
  rule.weights = fem.point_weights();
  return rule;
}

PointRule point_rule_from(const Fem1d& fem, const SparseRule& rule) {
  PointRule out;
  std::vector<double> w;
  const Index q = fem.points_per_cell();
  if (rule.kind == CaseKind::Quadrature) {
    require(rule.weights.size() == fem.points(), Errc::DimensionMismatch,
            "quadrature rule length differs from the point count");
    for (Index m = 0; m < fem.points(); ++m)
      if (rule.weights[m] > 0.0) {
        out.points.push_back(m);
        w.push_back(rule.weights[m]);
      }
  } else {
    require(rule.weights.size() == fem.cells(), Errc::DimensionMismatch,
            "cell rule length differs from the cell count");
    for (Index c = 0; c < fem.cells(); ++c)
      if (rule.weights[c] > 0.0)
        for (Index j = 0; j < q; ++j) {
          out.points.push_back(c * q + j);
          w.push_back(rule.weights[c] * fem.point_weights()[c * q + j]);
        }
  }
  out.weights = Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
  return out;
}

Trajectory run_reduced(const FomProblem& p, const RomBasis& basis, const PointRule& rule) {
  const ReducedSolver solver(p, basis, rule);
  const Index steps = p.steps();
  Trajectory traj;
  traj.states.resize(steps + 1, basis.v.rows());
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  Vector xr = solver.initial_state();
  traj.states.row(0) = (basis.v * xr).transpose();
  traj.times[0] = 0.0;
  for (Index k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * p.dt;
    xr = solver.step(xr, t, k);
    traj.states.row(k) = (basis.v * xr).transpose();
    traj.times[k] = t;
  }
  return traj;
}

Trajectory run_rom(const FomProblem& p, const RomBasis& basis) {
  return run_reduced(p, basis, truth_rule(Fem1d(p.n_cells, p.quadrature_points)));
}

Trajectory run_crom(const FomProblem& p, const RomBasis& basis, const SparseRule& rule) {
  return run_reduced(p, basis, point_rule_from(Fem1d(p.n_cells, p.quadrature_points), rule));
}

double spacetime_l2_error(const Trajectory& a, const Trajectory& b, const Tridiagonal& mass) {
  require(a.times.size() == b.times.size() && a.states.rows() == b.states.rows() &&
              a.states.cols() == b.states.cols() && a.states.cols() == mass.size(),
          Errc::GridMismatch, "trajectories live on different grids");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    require(std::abs(a.times[i] - b.times[i]) <= 1e-12 * (1.0 + std::abs(b.times[i])),
            Errc::GridMismatch, "time grids differ at index " + std::to_string(i));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < a.times.size(); ++i) {
    const double dt = b.times[i] - b.times[i - 1];
    const Vector bt = b.states.row(static_cast<Index>(i)).transpose();
    const Vector diff = a.states.row(static_cast<Index>(i)).transpose() - bt;
    num += dt * diff.dot(mass.multiply(diff));
    den += dt * bt.dot(mass.multiply(bt));
  }
  require(den > 0.0, Errc::InfiniteRelError, "reference trajectory has zero norm");
  return std::sqrt(num / den);
}

TrainingDataset quadrature_dataset(const Fem1d& fem, const RomBasis& basis, const SnapshotSet& s) {
  require(s.nonlinearity.rows() == fem.points(), Errc::DimensionMismatch,
          "nonlinearity snapshots do not match the quadrature");
  const DenseMatrix p = fem.basis_at_points(basis.v).transpose();
  return manifold::build_quadrature_dataset(p, s.nonlinearity, fem.point_weights());
}

TrainingDataset cell_dataset(const Fem1d& fem, const RomBasis& basis, const SnapshotSet& s,
                             bool simplified) {
  require(s.nonlinearity.rows() == fem.points(), Errc::DimensionMismatch,
          "nonlinearity snapshots do not match the quadrature");
  const Index cells = fem.cells();
  const Index q = fem.points_per_cell();
  std::vector<IndexList> connectivity(static_cast<std::size_t>(cells));
  DenseMatrix local(2 * cells, s.size());
  const Vector& w = fem.point_weights();
  for (Index c = 0; c < cells; ++c) {
    connectivity[c] = {c, c + 1};
    for (Index k = 0; k < s.size(); ++k) {
      double left = 0.0;
      double right = 0.0;
      for (Index j = 0; j < q; ++j) {
        const Index m = c * q + j;
        const double fw = w[m] * s.nonlinearity(m, k);
        left += fw * fem.phi_left(m);
        right += fw * fem.phi_right(m);
      }
      local(2 * c, k) = left;
      local(2 * c + 1, k) = right;
    }
  }
  const DenseMatrix rom_coeffs = basis.v.transpose();
  return manifold::build_cell_dataset(rom_coeffs, connectivity, local,
                                      Vector::Constant(cells, fem.cell_size()),
                                      Vector::Ones(cells), simplified);
}

}  // namespace hrtrain::benchfem
