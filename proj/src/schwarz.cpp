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

#include "schwarz_ocp/schwarz.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "schwarz_ocp/parallel.hpp"

namespace schwarz_ocp {

SubproblemFailure::SubproblemFailure(int subdomain, int iteration,
                                     SqpReport report)
    : Error("subproblem " + std::to_string(subdomain) + " failed at outer "
            "iteration " + std::to_string(iteration) + ": " + report.message),
      subdomain_(subdomain),
      iteration_(iteration),
      report_(std::move(report)) {}

MaxOuterIterations::MaxOuterIterations(Trajectory best, ConvergenceRecord record)
    : Error("outer iteration limit reached after " +
            std::to_string(record.iterations()) + " iterations"),
      best_(std::move(best)),
      record_(std::move(record)) {}

SubproblemOcp::SubproblemOcp(const NlpOcp& parent, int first, int last,
                             Vector x_init, std::optional<StageBlock> w_term,
                             double mu)
    : parent_(&parent),
      first_(first),
      last_(last),
      x_init_(std::move(x_init)),
      w_term_(std::move(w_term)),
      mu_(mu) {
  if (first < 0 || last > parent.horizon() || last <= first) {
    throw StructuralError("subproblem range outside the parent horizon");
  }
  if (x_init_.size() != parent.state_dim()) {
    throw StructuralError("subproblem initial state has the wrong length");
  }
  if (w_term_ && last_ == parent.horizon()) {
    throw StructuralError("terminal boundary block given at the final stage");
  }
  if (mu_ < 0.0) throw Error("mu must be nonnegative");
}

double SubproblemOcp::stage_cost(int k, const Vector& x, const Vector& u) const {
  return parent_->stage_cost(first_ + k, x, u);
}

Vector SubproblemOcp::stage_cost_gradient(int k, const Vector& x,
                                          const Vector& u) const {
  return parent_->stage_cost_gradient(first_ + k, x, u);
}

Matrix SubproblemOcp::stage_cost_hessian(int k, const Vector& x,
                                         const Vector& u) const {
  return parent_->stage_cost_hessian(first_ + k, x, u);
}

Vector SubproblemOcp::dynamics(int k, const Vector& x, const Vector& u) const {
  return parent_->dynamics(first_ + k, x, u);
}

void SubproblemOcp::dynamics_jacobian(int k, const Vector& x, const Vector& u,
                                      Matrix& A, Matrix& B) const {
  parent_->dynamics_jacobian(first_ + k, x, u, A, B);
}

Matrix SubproblemOcp::dynamics_hessian(int k, const Vector& x, const Vector& u,
                                       const Vector& weights) const {
  return parent_->dynamics_hessian(first_ + k, x, u, weights);
}

double SubproblemOcp::terminal_cost(const Vector& x) const {
  if (!w_term_) return parent_->terminal_cost(x);
  const StageBlock& b = *w_term_;
  return parent_->stage_cost(last_, x, b.u) -
         b.lambda.dot(parent_->dynamics(last_, x, b.u)) +
         0.5 * mu_ * (x - b.x).squaredNorm();
}

Vector SubproblemOcp::terminal_gradient(const Vector& x) const {
  if (!w_term_) return parent_->terminal_gradient(x);
  const StageBlock& b = *w_term_;
  Matrix A, B;
  parent_->dynamics_jacobian(last_, x, b.u, A, B);
  return parent_->stage_cost_gradient(last_, x, b.u).head(x.size()) -
         A.transpose() * b.lambda + mu_ * (x - b.x);
}

Matrix SubproblemOcp::terminal_hessian(const Vector& x) const {
  if (!w_term_) return parent_->terminal_hessian(x);
  const StageBlock& b = *w_term_;
  const Eigen::Index nx = x.size();
  Matrix H = (parent_->stage_cost_hessian(last_, x, b.u) -
              parent_->dynamics_hessian(last_, x, b.u, b.lambda))
                 .topLeftCorner(nx, nx);
  H.diagonal().array() += mu_;
  return H;
}

BoundaryData extract_boundary(const Trajectory& w, const Partition& part, int i) {
  if (w.horizon() != part.horizon()) {
    throw StructuralError("trajectory horizon does not match the partition");
  }
  BoundaryData b;
  b.index = i;
  b.x_init = w.x(part.n1(i));
  const int n2 = part.n2(i);
  if (i < part.num_subdomains() - 1 && n2 < part.horizon()) {
    b.w_term = StageBlock{w.x(n2), w.u(n2), w.lambda(n2)};
  }
  return b;
}

SubproblemOcp build_subproblem(const NlpOcp& p, const Partition& part, int i,
                               const BoundaryData& b, double mu) {
  if (part.horizon() != p.horizon()) {
    throw StructuralError("partition horizon does not match the problem");
  }
  if (i < 0 || i >= part.num_subdomains() || b.index != i) {
    throw StructuralError("boundary data does not belong to subdomain " +
                          std::to_string(i));
  }
  const int n2 = part.n2(i);
  const bool needs_term = i < part.num_subdomains() - 1 && n2 < p.horizon();
  if (needs_term && !b.w_term) {
    throw MissingBoundary("subdomain " + std::to_string(i) +
                          " needs terminal boundary data");
  }
  std::optional<StageBlock> term;
  if (needs_term) term = b.w_term;
  return SubproblemOcp(p, part.n1(i), n2, b.x_init, term, mu);
}

Partition partition_for(const NlpOcp& p, const SchwarzConfig& cfg) {
  if (cfg.partition) {
    if (cfg.partition->horizon() != p.horizon()) {
      throw InvalidPartition("partition horizon does not match the problem");
    }
    return *cfg.partition;
  }
  return make_partition(p.horizon(), cfg.num_subdomains, cfg.overlap);
}

std::pair<double, double> residuals(const Trajectory&, const Trajectory& next,
                                    const std::vector<SubTrajectory>& subs,
                                    const Partition& part) {
  const int T = part.num_subdomains();
  if (static_cast<int>(subs.size()) != T) {
    throw StructuralError("one subsolution per subdomain is required");
  }
  if (T == 1) return {0.0, 0.0};
  if (part.min_overlap() < 1) {
    throw InvalidOverlap("seam residuals need an overlap of at least one stage");
  }
  double eps_pr = 0.0;
  double eps_du = 0.0;
  for (int i = 1; i < T; ++i) {
    const int mi = part.m(i);
    const SubTrajectory& left = subs[i - 1];
    const SubTrajectory& right = subs[i];
    eps_pr = std::max(
        eps_pr, (left.local.x(mi - left.first) - next.x(mi)).norm());
    eps_du = std::max(eps_du, (right.local.lambda(mi - 1 - right.first) -
                               next.lambda(mi - 1))
                                  .norm());
  }
  return {eps_pr, eps_du};
}

std::pair<Trajectory, ConvergenceRecord> schwarz_solve(const NlpOcp& p,
                                                       const SchwarzConfig& cfg,
                                                       const Trajectory& start) {
  check_dimensions(p, start);
  if (cfg.mu < 0.0) throw Error("mu must be nonnegative");
  if (cfg.max_outer < 1) throw Error("max_outer must be at least 1");
  const Partition part = partition_for(p, cfg);
  const int T = part.num_subdomains();
  if (T > 1 && part.min_overlap() < 1) {
    throw InvalidOverlap("overlap tau = 0 with T = " + std::to_string(T) +
                         " leaves the seam residuals undefined");
  }
  if ((start.x(0) - p.initial_state()).norm() >
      1e-10 * (1.0 + p.initial_state().norm())) {
    throw StructuralError("start.x_0 must equal the initial state");
  }
  if (cfg.reference) check_dimensions(p, *cfg.reference);

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  Trajectory w = start;
  ConvergenceRecord record;
  Trajectory best = start;
  double best_kkt = std::numeric_limits<double>::infinity();

  for (int ell = 0; ell < cfg.max_outer; ++ell) {
    const Trajectory& snapshot = w;
    std::vector<SubTrajectory> subs(T);
    std::vector<SqpReport> reports(T);
    parallel_for(T, cfg.workers, [&](int i) {
      const BoundaryData b = extract_boundary(snapshot, part, i);
      const SubproblemOcp sub = build_subproblem(p, part, i, b, cfg.mu);
      Trajectory warm = slice(snapshot, part.n1(i), part.n2(i));
      warm.x(0) = b.x_init;
      auto [sol, rep] = sqp_solve(sub, warm, cfg.inner);
      if (!rep.converged) throw SubproblemFailure(i, ell, rep);
      subs[i] = SubTrajectory{i, part.n1(i), part.n2(i), std::move(sol)};
      reports[i] = std::move(rep);
    });

    std::vector<StageSlice> owned;
    owned.reserve(T);
    for (const auto& s : subs) owned.push_back(restrict_to_owned(s, part));
    Trajectory next = concatenate(owned, p.horizon(), p.state_dim(), p.control_dim());

    IterationRecord row;
    row.iter = ell;
    std::tie(row.eps_pr, row.eps_du) = residuals(w, next, subs, part);
    row.kkt = kkt_residual(p, next);
    if (cfg.reference) row.err_vs_ref = norm_w(next - *cfg.reference);
    row.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
    for (const auto& r : reports) row.inner_iterations.push_back(r.iterations);
    record.rows.push_back(row);

    w = std::move(next);
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

double mu_bar(double upsilon_upper, double gamma_c, int t) {
  if (!(upsilon_upper > 0.0) || !(gamma_c > 0.0) || t < 1) {
    throw Error("mu_bar needs positive inputs");
  }
  return 16.0 * upsilon_upper *
         (std::pow(upsilon_upper, 6 * t) - std::pow(upsilon_upper, 4 * t)) /
         (gamma_c * gamma_c);
}

void write_convergence_csv(std::ostream& os, const ConvergenceRecord& rec,
                           const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "iter,eps_pr,eps_du,kkt_stat,kkt_feas,err_vs_ref,wall_s\n";
  os.precision(17);
  for (const auto& r : rec.rows) {
    os << r.iter << ',' << r.eps_pr << ',' << r.eps_du << ','
       << r.kkt.stationarity << ',' << r.kkt.feasibility << ',';
    if (r.err_vs_ref >= 0.0) os << r.err_vs_ref;
    os << ',' << r.wall_s << '\n';
  }
}

}  // namespace schwarz_ocp
