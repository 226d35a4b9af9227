// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// 1D nonlinear reaction–diffusion benchmark on Ω = (0, 1):
//
//   ∂ρ/∂t = ∂ₓ(D ∂ₓρ) + f(ρ),   f(ρ) = ρ / (1 + 0.5ρ),
//   D ∂ₓρ(0) = 0,  D ∂ₓρ(1) = g_Γ(t; C),
//
// discretized with P1 elements, a per-cell Gauss rule for the nonlinear term
// (the "truth quadrature") and implicit Euler + Newton in time. The POD-Galerkin
// ROM and the complexity-reduced CROM share the same time stepper.

#ifndef HRTRAIN_BENCHFEM_HPP
#define HRTRAIN_BENCHFEM_HPP

#include "hrtrain/manifold.hpp"
#include "hrtrain/training.hpp"

#include <functional>
#include <vector>

namespace hrtrain {

struct NewtonOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iterations = 25;
};

struct FomProblem {
  Index n_cells = 2000;
  double diffusion = 1.0;
  double dt = 0.002;
  double t_end = 1.5;
  double scenario = 0.0;      // C ∈ [0, 1]
  int quadrature_points = 2;  // Gauss points per cell, 2..4
  NewtonOptions newton;

  // Test hooks: switch off the reaction term or the boundary flux, or replace
  // the parametrized initial state.
  bool reaction = true;
  bool boundary_flux = true;
  std::function<double(double)> initial_state;

  Index steps() const;
};

/// Symmetric-or-not tridiagonal matrix, rows indexed 0..n-1.
struct Tridiagonal {
  Vector lower;  // lower[i] = T(i, i-1), lower[0] unused
  Vector diag;
  Vector upper;  // upper[i] = T(i, i+1), upper[n-1] unused

  Index size() const { return diag.size(); }
  Vector multiply(const Vector& x) const;
  Vector solve(const Vector& rhs) const;  // Thomas algorithm, no pivoting
  DenseMatrix dense() const;
};

/// Uniform P1 mesh with a Gauss rule on every cell. Quadrature point m lies in
/// cell m / q, where it sees the two hat functions of nodes c and c + 1.
class Fem1d {
 public:
  Fem1d(Index n_cells, int quadrature_points);

  Index cells() const { return n_cells_; }
  Index nodes() const { return n_cells_ + 1; }
  Index points() const { return n_cells_ * q_; }
  int points_per_cell() const { return q_; }
  double cell_size() const { return h_; }

  double node(Index i) const { return static_cast<double>(i) * h_; }
  const Vector& point_coords() const { return coords_; }
  const Vector& point_weights() const { return weights_; }
  Index point_cell(Index m) const { return m / q_; }
  double phi_left(Index m) const { return phi_left_[m]; }
  double phi_right(Index m) const { return 1.0 - phi_left_[m]; }

  const Tridiagonal& mass() const { return mass_; }
  /// Stiffness for unit diffusion.
  const Tridiagonal& stiffness() const { return stiffness_; }

  /// Nodal coefficients → values at every quadrature point.
  Vector at_points(const Vector& nodal) const;
  /// Columns of `basis` (N × r) evaluated at every point (M × r).
  DenseMatrix basis_at_points(const DenseMatrix& basis) const;

 private:
  Index n_cells_;
  int q_;
  double h_;
  Vector coords_;
  Vector weights_;
  Vector phi_left_;
  Tridiagonal mass_;
  Tridiagonal stiffness_;
};

struct Trajectory {
  std::vector<double> times;
  DenseMatrix states;  // one row per time point, FOM nodal coordinates
};

struct SnapshotSet {
  DenseMatrix states;        // N × K
  DenseMatrix nonlinearity;  // M_quad × K, f(ρ^k) at the truth quadrature points
  std::vector<double> times;
  std::vector<double> scenarios;

  Index size() const { return states.cols(); }
};

struct RomBasis {
  DenseMatrix v;    // N × N_r, orthonormal columns
  Vector spectrum;  // all singular values of the state snapshot matrix
  Index dim() const { return v.cols(); }
};

/// Nonlinear term evaluated on a subset of quadrature points with given
/// weights: Σ_q ω_q f(ρ(x_q)) φ(x_q).
struct PointRule {
  IndexList points;
  Vector weights;
};

namespace benchfem {

double initial_condition(double xi, double c);
double nonlinearity(double rho);
double nonlinearity_derivative(double rho);
double boundary_flux(double t, double c);

void validate(const FomProblem& p);

/// Implicit Euler residual/Jacobian of the full model. Exposed for testing.
class FomSolver {
 public:
  explicit FomSolver(const FomProblem& p);

  const Fem1d& fem() const { return fem_; }
  const FomProblem& problem() const { return problem_; }

  Vector initial_state() const;
  /// F(x)_i = Σ_m w̃_m f(x(x_m)) φ_i(x_m)
  Vector reaction_load(const Vector& x) const;
  Vector residual(const Vector& x, const Vector& x_old, double t_new) const;
  Tridiagonal jacobian(const Vector& x) const;
  /// One implicit Euler step; throws NewtonDiverged tagged with `step_index`.
  Vector step(const Vector& x_old, double t_new, Index step_index) const;
  /// ∫_Ω ρ dx = 1ᵀ M x
  double total_mass(const Vector& x) const;

 private:
  FomProblem problem_;
  Fem1d fem_;
};

Trajectory simulate_fom(const FomProblem& p);
SnapshotSet collect_snapshots(const FomProblem& p, const Trajectory& traj, Index stride);
/// Full trajectory, keeping every `stride`-th step (t = stride·dt, 2·stride·dt, …).
SnapshotSet run_fom(const FomProblem& p, Index stride);
SnapshotSet merge_snapshots(const std::vector<SnapshotSet>& sets);

RomBasis pod_basis(const SnapshotSet& s, Index n_r);

/// Galerkin-reduced model with V = W. The nonlinear term is integrated with a
/// PointRule (truth rule for the ROM, a trained sparse rule for the CROM).
class ReducedSolver {
 public:
  ReducedSolver(const FomProblem& p, const RomBasis& basis, PointRule rule);

  Index dim() const { return mass_.rows(); }
  Vector initial_state() const;
  Vector nonlinear_term(const Vector& xr) const;
  Vector residual(const Vector& xr, const Vector& xr_old, double t_new) const;
  Eigen::MatrixXd jacobian(const Vector& xr) const;
  Vector step(const Vector& xr_old, double t_new, Index step_index) const;

 private:
  FomProblem problem_;
  Fem1d fem_;
  DenseMatrix v_;
  PointRule rule_;
  DenseMatrix rule_basis_;  // |rule| × N_r, basis rows at the rule's points
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd stiffness_;
  Vector boundary_;
};

PointRule truth_rule(const Fem1d& fem);
/// Quadrature rule: one point per index. Cell rule: all points of each
/// selected cell, weight w_c·w̃_q.
PointRule point_rule_from(const Fem1d& fem, const SparseRule& rule);

Trajectory run_rom(const FomProblem& p, const RomBasis& basis);
Trajectory run_crom(const FomProblem& p, const RomBasis& basis, const SparseRule& rule);
Trajectory run_reduced(const FomProblem& p, const RomBasis& basis, const PointRule& rule);

/// √(Σ_t Δt‖a_t − b_t‖²_M) / √(Σ_t Δt‖b_t‖²_M) over t_1, …, t_n.
double spacetime_l2_error(const Trajectory& a, const Trajectory& b, const Tridiagonal& mass);

/// Empirical quadrature data: pⁿ = φ_rⁿ at the points, g^k = f(ρ^k) at the
/// points, w̃ = Gauss weights.
TrainingDataset quadrature_dataset(const Fem1d& fem, const RomBasis& basis, const SnapshotSet& s);
/// Cell-based data: Jᶜ = {c, c+1}, ĝ^{k,c} = (∫_c f(ρ^k)φ_c, ∫_c f(ρ^k)φ_{c+1}),
/// d_c = |Ω_c|, w̃_c = 1.
TrainingDataset cell_dataset(const Fem1d& fem, const RomBasis& basis, const SnapshotSet& s,
                             bool simplified);

}  // namespace benchfem
}  // namespace hrtrain

#endif  // HRTRAIN_BENCHFEM_HPP
