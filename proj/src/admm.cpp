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

#include "schwarz_ocp/admm.hpp"

#include <chrono>
#include <limits>

#include "schwarz_ocp/parallel.hpp"

namespace schwarz_ocp {

namespace {

// Interval [first, last] of the parent with optional augmented-Lagrangian
// couplings at either end. A left coupling frees the initial state.
class AdmmSubproblem : public NlpOcp {
 public:
  AdmmSubproblem(const NlpOcp& parent, int first, int last, double rho,
                 std::optional<Vector> left_anchor,
                 std::optional<Vector> right_anchor)
      : parent_(&parent),
        first_(first),
        last_(last),
        rho_(rho),
        left_(std::move(left_anchor)),
        right_(std::move(right_anchor)) {}

  int horizon() const override { return last_ - first_; }
  int state_dim() const override { return parent_->state_dim(); }
  int control_dim() const override { return parent_->control_dim(); }
  Vector initial_state() const override {
    return left_ ? *left_ : parent_->initial_state();
  }
  bool initial_state_free() const override { return left_.has_value(); }

  double stage_cost(int k, const Vector& x, const Vector& u) const override {
    double c = parent_->stage_cost(first_ + k, x, u);
    if (k == 0 && left_) c += 0.5 * rho_ * (x - *left_).squaredNorm();
    return c;
  }
  Vector stage_cost_gradient(int k, const Vector& x,
                             const Vector& u) const override {
    Vector g = parent_->stage_cost_gradient(first_ + k, x, u);
    if (k == 0 && left_) g.head(x.size()) += rho_ * (x - *left_);
    return g;
  }
  Matrix stage_cost_hessian(int k, const Vector& x,
                            const Vector& u) const override {
    Matrix H = parent_->stage_cost_hessian(first_ + k, x, u);
    if (k == 0 && left_) H.diagonal().head(x.size()).array() += rho_;
    return H;
  }
  Vector dynamics(int k, const Vector& x, const Vector& u) const override {
    return parent_->dynamics(first_ + k, x, u);
  }
  void dynamics_jacobian(int k, const Vector& x, const Vector& u, Matrix& A,
                         Matrix& B) const override {
    parent_->dynamics_jacobian(first_ + k, x, u, A, B);
  }
  Matrix dynamics_hessian(int k, const Vector& x, const Vector& u,
                          const Vector& w) const override {
    return parent_->dynamics_hessian(first_ + k, x, u, w);
  }
  double terminal_cost(const Vector& x) const override {
    if (!right_) return parent_->terminal_cost(x);
    return 0.5 * rho_ * (x - *right_).squaredNorm();
  }
  Vector terminal_gradient(const Vector& x) const override {
    if (!right_) return parent_->terminal_gradient(x);
    return rho_ * (x - *right_);
  }
  Matrix terminal_hessian(const Vector& x) const override {
    if (!right_) return parent_->terminal_hessian(x);
    return rho_ * Matrix::Identity(x.size(), x.size());
  }

 private:
  const NlpOcp* parent_;
  int first_;
  int last_;
  double rho_;
  std::optional<Vector> left_;   // z - y^R
  std::optional<Vector> right_;  // z - y^L
};

}  // namespace

std::pair<Trajectory, ConvergenceRecord> admm_solve(const NlpOcp& p,
                                                    const AdmmConfig& cfg,
                                                    const Trajectory& start) {
  check_dimensions(p, start);
  if (!(cfg.rho > 0.0)) throw Error("ADMM penalty must be positive");
  if (cfg.max_iterations < 1) throw Error("max_iterations must be at least 1");
  if ((start.x(0) - p.initial_state()).norm() >
      1e-10 * (1.0 + p.initial_state().norm())) {
    throw StructuralError("start.x_0 must equal the initial state");
  }
  const Partition part =
      cfg.partition ? make_partition(p.horizon(), cfg.partition->breakpoints(), 0)
                    : make_partition(p.horizon(), cfg.num_subdomains,
                                     AbsoluteOverlap{0});
  if (cfg.reference) check_dimensions(p, *cfg.reference);
  const int T = part.num_subdomains();
  const int N = p.horizon();
  const double rho = cfg.rho;

  // Seam s = 1..T-1 sits at stage m_s; index s-1 in these arrays.
  std::vector<Vector> z(T - 1), yL(T - 1), yR(T - 1);
  for (int s = 1; s < T; ++s) {
    const int m = part.m(s);
    z[s - 1] = start.x(m);
    yR[s - 1] = start.lambda(m - 1) / rho;
    yL[s - 1] = -yR[s - 1];
  }
  std::vector<Trajectory> local(T);
  for (int i = 0; i < T; ++i) {
    local[i] = slice(start, part.m(i), part.m(i + 1));
    if (i > 0) local[i].lambda(-1).setZero();
  }

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  ConvergenceRecord record;
  Trajectory best = start;
  double best_kkt = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.max_iterations; ++it) {
    std::vector<SqpReport> reports(T);
    parallel_for(T, cfg.workers, [&](int i) {
      std::optional<Vector> left, right;
      if (i > 0) left = z[i - 1] - yR[i - 1];
      if (i < T - 1) right = z[i] - yL[i];
      const AdmmSubproblem sub(p, part.m(i), part.m(i + 1), rho, left, right);
      auto [sol, rep] = sqp_solve(sub, local[i], cfg.inner);
      if (!rep.converged) throw SubproblemFailure(i, it, rep);
      local[i] = std::move(sol);
      reports[i] = std::move(rep);
    });

    double eps_pr = 0.0;
    double dz = 0.0;
    for (int s = 1; s < T; ++s) {
      const Vector& xl = local[s - 1].x(local[s - 1].horizon());
      const Vector& xr = local[s].x(0);
      const Vector z_new = 0.5 * ((xl + yL[s - 1]) + (xr + yR[s - 1]));
      dz = std::max(dz, (z_new - z[s - 1]).norm());
      z[s - 1] = z_new;
      yL[s - 1] += xl - z_new;
      yR[s - 1] += xr - z_new;
      eps_pr = std::max({eps_pr, (xl - z_new).norm(), (xr - z_new).norm()});
    }

    Trajectory w(N, p.state_dim(), p.control_dim());
    for (int i = 0; i < T; ++i) {
      const int first = part.m(i);
      for (int k = first; k < part.m(i + 1); ++k) {
        w.x(k) = local[i].x(k - first);
        w.u(k) = local[i].u(k - first);
        w.lambda(k) = local[i].lambda(k - first);
      }
    }
    w.lambda(-1) = local[0].lambda(-1);
    w.x(N) = local[T - 1].x(local[T - 1].horizon());

    IterationRecord row;
    row.iter = it;
    row.eps_pr = eps_pr;
    row.eps_du = rho * dz;
    row.kkt = kkt_residual(p, w);
    if (cfg.reference) row.err_vs_ref = norm_w(w - *cfg.reference);
    row.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
    for (const auto& r : reports) row.inner_iterations.push_back(r.iterations);
    record.rows.push_back(row);

    if (row.kkt.max() < best_kkt) {
      best_kkt = row.kkt.max();
      best = w;
    }
    if (row.eps_pr <= cfg.tol_primal && row.eps_du <= cfg.tol_dual) {
      return {w, record};
    }
  }
  throw MaxOuterIterations(best, record);
}

}  // namespace schwarz_ocp
