// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/benchfem.hpp"
#include "hrtrain/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hrtrain {

Index FomProblem::steps() const { return static_cast<Index>(std::llround(t_end / dt)); }

Vector Tridiagonal::multiply(const Vector& x) const {
  const Index n = size();
  require(x.size() == n, Errc::DimensionMismatch, "tridiagonal multiply: size mismatch");
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += lower[i] * x[i - 1];
    if (i + 1 < n) acc += upper[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

Vector Tridiagonal::solve(const Vector& rhs) const {
  const Index n = size();
  require(rhs.size() == n, Errc::DimensionMismatch, "tridiagonal solve: size mismatch");
  Vector c(n), d(n);
  double denom = diag[0];
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (Index i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  Vector x(n);
  x[n - 1] = d[n - 1];
  for (Index i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

DenseMatrix Tridiagonal::dense() const {
  const Index n = size();
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = diag[i];
    if (i > 0) out(i, i - 1) = lower[i];
    if (i + 1 < n) out(i, i + 1) = upper[i];
  }
  return out;
}

namespace {

// Gauss–Legendre nodes and weights on [0, 1].
void gauss_rule(int q, std::vector<double>& x, std::vector<double>& w) {
  switch (q) {
    case 2: {
      const double a = 0.5 / std::sqrt(3.0);
      x = {0.5 - a, 0.5 + a};
      w = {0.5, 0.5};
      return;
    }
    case 3: {
      const double a = 0.5 * std::sqrt(0.6);
      x = {0.5 - a, 0.5, 0.5 + a};
      w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      return;
    }
    case 4: {
      const std::array<double, 2> t = {0.3399810435848562648, 0.8611363115940525752};
      const std::array<double, 2> s = {0.6521451548625461427, 0.3478548451374538573};
      x = {0.5 - 0.5 * t[1], 0.5 - 0.5 * t[0], 0.5 + 0.5 * t[0], 0.5 + 0.5 * t[1]};
      w = {0.5 * s[1], 0.5 * s[0], 0.5 * s[0], 0.5 * s[1]};
      return;
    }
    default:
      throw Error(Errc::InvalidArgument,
                  "quadrature_points must be 2, 3 or 4 (got " + std::to_string(q) + ")");
  }
}

}  // namespace

Fem1d::Fem1d(Index n_cells, int quadrature_points) : n_cells_(n_cells), q_(quadrature_points) {
  require(n_cells >= 1, Errc::InvalidArgument, "mesh needs at least one cell");
  std::vector<double> gx, gw;
  gauss_rule(quadrature_points, gx, gw);
  h_ = 1.0 / static_cast<double>(n_cells);

  coords_.resize(points());
  weights_.resize(points());
  phi_left_.resize(points());
  for (Index c = 0; c < n_cells; ++c)
    for (int j = 0; j < q_; ++j) {
      const Index m = c * q_ + j;
      coords_[m] = (static_cast<double>(c) + gx[j]) * h_;
      weights_[m] = gw[j] * h_;
      phi_left_[m] = 1.0 - gx[j];
    }

  const Index n = nodes();
  mass_.lower = Vector::Zero(n);
  mass_.diag = Vector::Zero(n);
  mass_.upper = Vector::Zero(n);
  stiffness_ = mass_;
  for (Index c = 0; c < n_cells; ++c) {
    mass_.diag[c] += h_ / 3.0;
    mass_.diag[c + 1] += h_ / 3.0;
    mass_.upper[c] += h_ / 6.0;
    mass_.lower[c + 1] += h_ / 6.0;
    stiffness_.diag[c] += 1.0 / h_;
    stiffness_.diag[c + 1] += 1.0 / h_;
    stiffness_.upper[c] -= 1.0 / h_;
    stiffness_.lower[c + 1] -= 1.0 / h_;
  }
}

Vector Fem1d::at_points(const Vector& nodal) const {
  require(nodal.size() == nodes(), Errc::DimensionMismatch, "nodal vector has the wrong length");
  Vector out(points());
  for (Index m = 0; m < points(); ++m) {
    const Index c = point_cell(m);
    out[m] = phi_left_[m] * nodal[c] + (1.0 - phi_left_[m]) * nodal[c + 1];
  }
  return out;
}

DenseMatrix Fem1d::basis_at_points(const DenseMatrix& basis) const {
  require(basis.rows() == nodes(), Errc::DimensionMismatch, "basis rows must equal the node count");
  DenseMatrix out(points(), basis.cols());
  for (Index m = 0; m < points(); ++m) {
    const Index c = point_cell(m);
    out.row(m) = phi_left_[m] * basis.row(c) + (1.0 - phi_left_[m]) * basis.row(c + 1);
  }
  return out;
}

namespace benchfem {

double initial_condition(double xi, double c) {
  const double s = (xi - 0.5) * (xi - 0.5);
  return (1.0 - c) * std::exp(-s / 0.1) + c * std::exp(-s / 0.5);
}

double nonlinearity(double rho) {
  const double denom = 1.0 + 0.5 * rho;
  require(denom != 0.0, Errc::PoleInput, "f(rho) has a pole at rho = -2");
  return rho / denom;
}

double nonlinearity_derivative(double rho) {
  const double denom = 1.0 + 0.5 * rho;
  require(denom != 0.0, Errc::PoleInput, "f'(rho) has a pole at rho = -2");
  return 1.0 / (denom * denom);
}

double boundary_flux(double t, double c) {
  const double g1 = 1.0;
  const double g2 = std::sin(1.0) + std::cos(6.0) * (0.3 - 1.0);
  return (1.0 - c) * g1 * std::sin(6.0 * t) + c * g2 * (t - 0.2) * std::cos(4.0 * t);
}

void validate(const FomProblem& p) {
  require(p.n_cells >= 1, Errc::InvalidArgument, "n_cells must be positive");
  require(p.diffusion > 0.0, Errc::InvalidArgument, "diffusion must be positive");
  require(p.dt > 0.0, Errc::InvalidArgument, "dt must be positive");
  require(p.t_end > 0.0 && p.steps() >= 1, Errc::InvalidArgument, "t_end must cover at least one step");
  require(p.scenario >= 0.0 && p.scenario <= 1.0, Errc::InvalidArgument, "scenario C must lie in [0, 1]");
  require(p.quadrature_points >= 2 && p.quadrature_points <= 4, Errc::InvalidArgument,
          "quadrature_points must be 2, 3 or 4");
  require(p.newton.max_iterations >= 1, Errc::InvalidArgument, "Newton needs at least one iteration");
}

FomSolver::FomSolver(const FomProblem& p)
    : problem_(p), fem_((validate(p), p.n_cells), p.quadrature_points) {}

Vector FomSolver::initial_state() const {
  Vector x(fem_.nodes());
  for (Index i = 0; i < fem_.nodes(); ++i) {
    const double xi = fem_.node(i);
    x[i] = problem_.initial_state ? problem_.initial_state(xi)
                                  : initial_condition(xi, problem_.scenario);
  }
  return x;
}

Vector FomSolver::reaction_load(const Vector& x) const {
  Vector load = Vector::Zero(fem_.nodes());
  if (!problem_.reaction) return load;
  const Vector vals = fem_.at_points(x);
  const Vector& w = fem_.point_weights();
  for (Index m = 0; m < fem_.points(); ++m) {
    const double fw = w[m] * nonlinearity(vals[m]);
    const Index c = fem_.point_cell(m);
    load[c] += fw * fem_.phi_left(m);
    load[c + 1] += fw * fem_.phi_right(m);
  }
  return load;
}

Vector FomSolver::residual(const Vector& x, const Vector& x_old, double t_new) const {
  Vector r = fem_.mass().multiply(x - x_old) / problem_.dt +
             problem_.diffusion * fem_.stiffness().multiply(x) - reaction_load(x);
  if (problem_.boundary_flux) r[fem_.nodes() - 1] -= boundary_flux(t_new, problem_.scenario);
  return r;
}

Tridiagonal FomSolver::jacobian(const Vector& x) const {
  Tridiagonal j;
  const Tridiagonal& mass = fem_.mass();
  const Tridiagonal& stiff = fem_.stiffness();
  j.lower = mass.lower / problem_.dt + problem_.diffusion * stiff.lower;
  j.diag = mass.diag / problem_.dt + problem_.diffusion * stiff.diag;
  j.upper = mass.upper / problem_.dt + problem_.diffusion * stiff.upper;
  if (!problem_.reaction) return j;
  const Vector vals = fem_.at_points(x);
  const Vector& w = fem_.point_weights();
  for (Index m = 0; m < fem_.points(); ++m) {
    const double dfw = w[m] * nonlinearity_derivative(vals[m]);
    const Index c = fem_.point_cell(m);
    const double pl = fem_.phi_left(m);
    const double pr = fem_.phi_right(m);
    j.diag[c] -= dfw * pl * pl;
    j.diag[c + 1] -= dfw * pr * pr;
    j.upper[c] -= dfw * pl * pr;
    j.lower[c + 1] -= dfw * pl * pr;
  }
  return j;
}

Vector FomSolver::step(const Vector& x_old, double t_new, Index step_index) const {
  Vector x = x_old;
  Vector r = residual(x, x_old, t_new);
  const double tol = std::max(problem_.newton.abs_tol, problem_.newton.rel_tol * r.norm());
  for (int it = 0; it < problem_.newton.max_iterations; ++it) {
    x -= jacobian(x).solve(r);
    r = residual(x, x_old, t_new);
    require(r.allFinite(), Errc::NewtonDiverged,
            "non-finite residual at step " + std::to_string(step_index));
    if (r.norm() <= tol) return x;
  }
  throw Error(Errc::NewtonDiverged, "no convergence at step " + std::to_string(step_index) +
                                        " (residual " + std::to_string(r.norm()) + ")");
}

double FomSolver::total_mass(const Vector& x) const {
  return fem_.mass().multiply(x).sum();
}

Trajectory simulate_fom(const FomProblem& p) {
  const FomSolver solver(p);
  const Index steps = p.steps();
  Trajectory traj;
  traj.states.resize(steps + 1, solver.fem().nodes());
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  Vector x = solver.initial_state();
  traj.states.row(0) = x.transpose();
  traj.times[0] = 0.0;
  for (Index k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * p.dt;
    x = solver.step(x, t, k);
    traj.states.row(k) = x.transpose();
    traj.times[k] = t;
  }
  return traj;
}

SnapshotSet collect_snapshots(const FomProblem& p, const Trajectory& traj, Index stride) {
  require(stride >= 1, Errc::InvalidArgument, "snapshot stride must be positive");
  const Fem1d fem(p.n_cells, p.quadrature_points);
  const Index steps = traj.states.rows() - 1;
  const Index count = steps / stride;
  SnapshotSet s;
  s.states.resize(fem.nodes(), count);
  s.nonlinearity.resize(fem.points(), count);
  for (Index k = 0; k < count; ++k) {
    const Index row = (k + 1) * stride;
    const Vector x = traj.states.row(row).transpose();
    s.states.col(k) = x;
    const Vector vals = fem.at_points(x);
    for (Index m = 0; m < fem.points(); ++m) s.nonlinearity(m, k) = nonlinearity(vals[m]);
    s.times.push_back(traj.times[row]);
    s.scenarios.push_back(p.scenario);
  }
  return s;
}

SnapshotSet run_fom(const FomProblem& p, Index stride) {
  return collect_snapshots(p, simulate_fom(p), stride);
}

SnapshotSet merge_snapshots(const std::vector<SnapshotSet>& sets) {
  require(!sets.empty(), Errc::InvalidArgument, "nothing to merge");
  Index total = 0;
  for (const auto& s : sets) {
    require(s.states.rows() == sets.front().states.rows() &&
                s.nonlinearity.rows() == sets.front().nonlinearity.rows(),
            Errc::DimensionMismatch, "snapshot sets come from different discretizations");
    total += s.size();
  }
  SnapshotSet out;
  out.states.resize(sets.front().states.rows(), total);
  out.nonlinearity.resize(sets.front().nonlinearity.rows(), total);
  Index col = 0;
  for (const auto& s : sets) {
    out.states.middleCols(col, s.size()) = s.states;
    out.nonlinearity.middleCols(col, s.size()) = s.nonlinearity;
    out.times.insert(out.times.end(), s.times.begin(), s.times.end());
    out.scenarios.insert(out.scenarios.end(), s.scenarios.begin(), s.scenarios.end());
    col += s.size();
  }
  return out;
}

}  // namespace benchfem
}  // namespace hrtrain
