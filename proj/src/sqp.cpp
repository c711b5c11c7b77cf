/*
 Copyright 2026 The schwarz-ocp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/nlp.hpp"

namespace schwarz_ocp {

namespace {

struct MeritParts {
  double cost = 0.0;
  double violation = 0.0;  // l1 norm of the constraint residuals
};

MeritParts merit_parts(const NlpOcp& p, const Trajectory& w) {
  MeritParts m;
  const int N = p.horizon();
  for (int k = 0; k < N; ++k) {
    m.cost += p.stage_cost(k, w.x(k), w.u(k));
    m.violation += (w.x(k + 1) - p.dynamics(k, w.x(k), w.u(k))).lpNorm<1>();
  }
  m.cost += p.terminal_cost(w.x(N));
  if (!p.initial_state_free()) {
    m.violation += (w.x(0) - p.initial_state()).lpNorm<1>();
  }
  return m;
}

double max_abs_dual(const Trajectory& w) {
  double m = 0.0;
  for (int k = -1; k < w.horizon(); ++k) {
    m = std::max(m, w.lambda(k).lpNorm<Eigen::Infinity>());
  }
  return m;
}

void regularize(LqProblem& q, double sigma) {
  for (auto& st : q.stages) {
    st.Q.diagonal().array() += sigma;
    st.R.diagonal().array() += sigma;
  }
  q.QN.diagonal().array() += sigma;
}

}  // namespace

LqProblem newton_lq(const NlpOcp& p, const Trajectory& w) {
  check_dimensions(p, w);
  const int N = p.horizon();
  const int nx = p.state_dim();
  const int nu = p.control_dim();
  LqProblem q(N, nx, nu);
  for (int k = 0; k < N; ++k) {
    const Vector& x = w.x(k);
    const Vector& u = w.u(k);
    LqStage& st = q.stages[k];
    Matrix H = p.stage_cost_hessian(k, x, u) -
               p.dynamics_hessian(k, x, u, w.lambda(k));
    H = (0.25 * (H + H.transpose())).eval();
    st.Q = H.topLeftCorner(nx, nx);
    st.S = H.bottomLeftCorner(nu, nx);
    st.R = H.bottomRightCorner(nu, nu);
    p.dynamics_jacobian(k, x, u, st.A, st.B);
    const Vector g = p.stage_cost_gradient(k, x, u);
    st.r = g.head(nx);
    st.s = g.tail(nu);
    st.v = p.dynamics(k, x, u) - w.x(k + 1);
  }
  const Matrix HN = p.terminal_hessian(w.x(N));
  q.QN = 0.25 * (HN + HN.transpose());
  q.rN = p.terminal_gradient(w.x(N));
  q.free_initial_state = p.initial_state_free();
  if (!q.free_initial_state) q.x0 = p.initial_state() - w.x(0);
  return q;
}

std::pair<Trajectory, SqpReport> sqp_solve(const NlpOcp& p,
                                           const Trajectory& start,
                                           const SqpOptions& opts) {
  check_dimensions(p, start);
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 0 ||
      !(opts.backtrack > 0.0 && opts.backtrack < 1.0) ||
      !(opts.armijo_eta > 0.0) || !(opts.min_step > 0.0)) {
    throw Error("invalid SQP options");
  }
  const int N = p.horizon();
  const double eps = std::numeric_limits<double>::epsilon();
  Trajectory w = start;
  SqpReport report;
  double penalty = -1.0;
  double alpha = 0.0;
  const auto t0 = std::chrono::steady_clock::now();

  for (int it = 0;; ++it) {
    const KktResidual res = kkt_residual(p, w);
    const MeritParts mp = merit_parts(p, w);
    report.final_residual = res;
    report.iterations = it;
    report.trace.push_back(
        {it, res.stationarity, res.feasibility, alpha,
         mp.cost + std::max(penalty, 0.0) * mp.violation,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    if (res.stationarity <= opts.tolerance && res.feasibility <= opts.tolerance) {
      report.converged = true;
      report.message = "converged";
      return {w, report};
    }
    if (!std::isfinite(res.stationarity) || !std::isfinite(res.feasibility)) {
      report.message = "non-finite KKT residual";
      if (opts.throw_on_failure) throw EvaluationError(report.message);
      return {w, report};
    }
    if (it >= opts.max_iterations) {
      report.message = "maximum iterations reached";
      if (opts.throw_on_failure) throw MaxIterations(report.message);
      return {w, report};
    }

    // Newton step with inertia correction through the Riccati pivots.
    const LqProblem q = newton_lq(p, w);
    Trajectory step;
    double sigma = 0.0;
    for (;;) {
      try {
        LqProblem qs = q;
        if (sigma > 0.0) regularize(qs, sigma);
        step = lq_solve(qs, riccati_factor(qs));
        break;
      } catch (const IndefiniteW&) {
        sigma = sigma == 0.0 ? opts.regularization_initial
                             : sigma * opts.regularization_growth;
        ++report.regularizations;
        if (sigma > opts.regularization_max) {
          report.message = "Hessian regularization exceeded its cap";
          if (opts.throw_on_failure) throw LineSearchFailure(report.message);
          return {w, report};
        }
      }
    }

    // Directional derivative of the l1 merit along the primal step; the step
    // satisfies the linearized constraints, so the violation drops at rate 1.
    double dcost = 0.0;
    for (int k = 0; k < N; ++k) {
      const Vector g = p.stage_cost_gradient(k, w.x(k), w.u(k));
      dcost += g.head(p.state_dim()).dot(step.x(k)) +
               g.tail(p.control_dim()).dot(step.u(k));
    }
    dcost += p.terminal_gradient(w.x(N)).dot(step.x(N));
    const double dual_sup = max_abs_dual(step);
    if (penalty < dual_sup + opts.penalty_margin) {
      penalty = penalty < 0.0
                    ? dual_sup + opts.penalty_margin
                    : std::max(penalty * opts.penalty_growth,
                               dual_sup + opts.penalty_margin);
    }
    double D = dcost - penalty * mp.violation;
    for (int bump = 0; bump < 30 && D >= 0.0 && mp.violation > 0.0; ++bump) {
      penalty *= opts.penalty_growth;
      D = dcost - penalty * mp.violation;
    }
    const double phi0 = mp.cost + penalty * mp.violation;
    // Constraint residuals cannot be resolved below eps |A||x| + |B||u| + |x+|
    // per stage, which matters for strongly expansive dynamics.
    double noise = 0.0;
    for (int k = 0; k < N; ++k) {
      noise += (q.stages[k].A.cwiseAbs() * w.x(k).cwiseAbs() +
                q.stages[k].B.cwiseAbs() * w.u(k).cwiseAbs() + w.x(k + 1).cwiseAbs())
                   .sum();
    }
    const double slack =
        100.0 * eps * (std::abs(mp.cost) + penalty * (mp.violation + noise) + 1.0);

    alpha = 1.0;
    Trajectory trial;
    for (;;) {
      trial = w;
      for (int k = 0; k <= N; ++k) trial.x(k) += alpha * step.x(k);
      for (int k = 0; k < N; ++k) trial.u(k) += alpha * step.u(k);
      bool ok = true;
      double phi = 0.0;
      try {
        const MeritParts tp = merit_parts(p, trial);
        phi = tp.cost + penalty * tp.violation;
        ok = std::isfinite(phi);
      } catch (const EvaluationError&) {
        ok = false;
      }
      if (ok && phi <= phi0 + opts.armijo_eta * alpha * std::min(D, 0.0) + slack) {
        break;
      }
      alpha *= opts.backtrack;
      if (alpha < opts.min_step) {
        report.message = "line search step below minimum";
        if (opts.throw_on_failure) throw LineSearchFailure(report.message);
        return {w, report};
      }
    }
    for (int k = -1; k < N; ++k) {
      trial.lambda(k) = w.lambda(k) + alpha * (step.lambda(k) - w.lambda(k));
    }
    w = std::move(trial);
  }
}

double check_derivatives(const NlpOcp& p, const Trajectory& at, double h) {
  check_dimensions(p, at);
  if (!(h > 0.0)) throw Error("finite-difference step must be positive");
  const int N = p.horizon();
  const int nx = p.state_dim();
  const int nu = p.control_dim();
  const int nz = nx + nu;
  double worst = 0.0;
  auto compare = [&worst](const Matrix& analytic, const Matrix& fd) {
    for (Eigen::Index i = 0; i < fd.rows(); ++i) {
      for (Eigen::Index j = 0; j < fd.cols(); ++j) {
        const double scale = std::max(1.0, std::abs(fd(i, j)));
        worst = std::max(worst, std::abs(analytic(i, j) - fd(i, j)) / scale);
      }
    }
  };
  Matrix A, B;
  for (int k = 0; k < N; ++k) {
    Vector z(nz);
    z << at.x(k), at.u(k);
    const Vector& lam = at.lambda(k);
    auto lagrangian_grad = [&](const Vector& zz) {
      Matrix Ak, Bk;
      const Vector xx = zz.head(nx), uu = zz.tail(nu);
      p.dynamics_jacobian(k, xx, uu, Ak, Bk);
      Vector g = p.stage_cost_gradient(k, xx, uu);
      g.head(nx) -= Ak.transpose() * lam;
      g.tail(nu) -= Bk.transpose() * lam;
      return g;
    };
    Matrix J_fd(nx, nz), H_fd(nz, nz), g_fd(nz, 1);
    for (int j = 0; j < nz; ++j) {
      Vector zp = z, zm = z;
      zp(j) += h;
      zm(j) -= h;
      const Vector xp = zp.head(nx), up = zp.tail(nu);
      const Vector xm = zm.head(nx), um = zm.tail(nu);
      J_fd.col(j) = (p.dynamics(k, xp, up) - p.dynamics(k, xm, um)) / (2 * h);
      g_fd(j, 0) = (p.stage_cost(k, xp, up) - p.stage_cost(k, xm, um)) / (2 * h);
      H_fd.col(j) = (lagrangian_grad(zp) - lagrangian_grad(zm)) / (2 * h);
    }
    p.dynamics_jacobian(k, at.x(k), at.u(k), A, B);
    Matrix J(nx, nz);
    J << A, B;
    compare(J, J_fd);
    compare(p.stage_cost_gradient(k, at.x(k), at.u(k)), g_fd);
    const Matrix H = p.stage_cost_hessian(k, at.x(k), at.u(k)) -
                     p.dynamics_hessian(k, at.x(k), at.u(k), lam);
    compare(H, H_fd);
  }
  const Vector& xN = at.x(N);
  Matrix gN_fd(nx, 1), HN_fd(nx, nx);
  for (int j = 0; j < nx; ++j) {
    Vector xp = xN, xm = xN;
    xp(j) += h;
    xm(j) -= h;
    gN_fd(j, 0) = (p.terminal_cost(xp) - p.terminal_cost(xm)) / (2 * h);
    HN_fd.col(j) = (p.terminal_gradient(xp) - p.terminal_gradient(xm)) / (2 * h);
  }
  compare(p.terminal_gradient(xN), gN_fd);
  compare(p.terminal_hessian(xN), HN_fd);
  return worst;
}

void write_sqp_trace_csv(std::ostream& os, const SqpReport& report) {
  os << "iter,stationarity,feasibility,step_length,merit\n";
  os.precision(17);
  for (const auto& r : report.trace) {
    os << r.iter << ',' << r.stationarity << ',' << r.feasibility << ','
       << r.step_length << ',' << r.merit << '\n';
  }
}

LqOcp::LqOcp(LqProblem p) : p_(std::move(p)) {
  p_.validate();
  H_.reserve(p_.horizon);
  for (int k = 0; k < p_.horizon; ++k) H_.push_back(p_.hessian(k));
}

double LqOcp::stage_cost(int k, const Vector& x, const Vector& u) const {
  Vector z(p_.nx + p_.nu);
  z << x, u;
  return z.dot(H_.at(k) * z) + p_.linear_x(k).dot(x) + p_.linear_u(k).dot(u);
}

Vector LqOcp::stage_cost_gradient(int k, const Vector& x, const Vector& u) const {
  Vector z(p_.nx + p_.nu);
  z << x, u;
  Vector g = (H_.at(k) + H_.at(k).transpose()) * z;
  g.head(p_.nx) += p_.linear_x(k);
  g.tail(p_.nu) += p_.linear_u(k);
  return g;
}

Matrix LqOcp::stage_cost_hessian(int k, const Vector&, const Vector&) const {
  return H_.at(k) + H_.at(k).transpose();
}

Vector LqOcp::dynamics(int k, const Vector& x, const Vector& u) const {
  const LqStage& st = p_.stages.at(k);
  return st.A * x + st.B * u + p_.drift(k);
}

void LqOcp::dynamics_jacobian(int k, const Vector&, const Vector&, Matrix& A,
                              Matrix& B) const {
  A = p_.stages.at(k).A;
  B = p_.stages.at(k).B;
}

Matrix LqOcp::dynamics_hessian(int, const Vector&, const Vector&,
                               const Vector&) const {
  return Matrix::Zero(p_.nx + p_.nu, p_.nx + p_.nu);
}

double LqOcp::terminal_cost(const Vector& x) const {
  return x.dot(p_.QN * x) + p_.terminal_linear().dot(x);
}

Vector LqOcp::terminal_gradient(const Vector& x) const {
  return (p_.QN + p_.QN.transpose()) * x + p_.terminal_linear();
}

Matrix LqOcp::terminal_hessian(const Vector&) const {
  return p_.QN + p_.QN.transpose();
}

Matrix LqOcp::dynamics_data_jacobian(int, const Vector&, const Vector&) const {
  return Matrix::Identity(p_.nx, p_.nx);
}

}  // namespace schwarz_ocp
