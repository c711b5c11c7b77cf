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

#ifndef SCHWARZ_OCP_SCHWARZ_HPP
#define SCHWARZ_OCP_SCHWARZ_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/nlp.hpp"
#include "schwarz_ocp/partition.hpp"

namespace schwarz_ocp {

struct SchwarzConfig {
  double mu = 1.0;
  int num_subdomains = 1;
  Overlap overlap = AbsoluteOverlap{1};
  // Overrides num_subdomains and overlap when set.
  std::optional<Partition> partition;
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  int max_outer = 100;
  SqpOptions inner;
  int workers = 0;
  // Centralized solution used only for error tracking.
  std::optional<Trajectory> reference;
};

struct IterationRecord {
  int iter = 0;
  double eps_pr = 0.0;
  double eps_du = 0.0;
  KktResidual kkt;
  double err_vs_ref = -1.0;  // negative when no reference was supplied
  double wall_s = 0.0;       // cumulative since the solve started
  std::vector<int> inner_iterations;
};

struct ConvergenceRecord {
  std::vector<IterationRecord> rows;
  int iterations() const { return static_cast<int>(rows.size()); }
};

// iter,eps_pr,eps_du,kkt_stat,kkt_feas,err_vs_ref,wall_s. An optional comment
// line is written first when `comment` is non-empty.
void write_convergence_csv(std::ostream& os, const ConvergenceRecord& rec,
                           const std::string& comment = "");

class SubproblemFailure : public Error {
 public:
  SubproblemFailure(int subdomain, int iteration, SqpReport report);
  int subdomain() const { return subdomain_; }
  int iteration() const { return iteration_; }
  const SqpReport& report() const { return report_; }

 private:
  int subdomain_;
  int iteration_;
  SqpReport report_;
};

class MaxOuterIterations : public Error {
 public:
  MaxOuterIterations(Trajectory best, ConvergenceRecord record);
  const Trajectory& best() const { return best_; }
  const ConvergenceRecord& record() const { return record_; }

 private:
  Trajectory best_;
  ConvergenceRecord record_;
};

// Subproblem over [n1, n2] of a parent problem. Stage k maps to n1 + k.
class SubproblemOcp : public NlpOcp {
 public:
  SubproblemOcp(const NlpOcp& parent, int first, int last, Vector x_init,
                std::optional<StageBlock> w_term, double mu);

  int first() const { return first_; }
  int last() const { return last_; }

  int horizon() const override { return last_ - first_; }
  int state_dim() const override { return parent_->state_dim(); }
  int control_dim() const override { return parent_->control_dim(); }
  Vector initial_state() const override { return x_init_; }

  double stage_cost(int k, const Vector& x, const Vector& u) const override;
  Vector stage_cost_gradient(int k, const Vector& x,
                             const Vector& u) const override;
  Matrix stage_cost_hessian(int k, const Vector& x,
                            const Vector& u) const override;
  Vector dynamics(int k, const Vector& x, const Vector& u) const override;
  void dynamics_jacobian(int k, const Vector& x, const Vector& u, Matrix& A,
                         Matrix& B) const override;
  Matrix dynamics_hessian(int k, const Vector& x, const Vector& u,
                          const Vector& weights) const override;
  // g(x) = g_{n2}(x, u') - lambda'^T f_{n2}(x, u') + mu/2 |x - x'|^2 with
  // (x', u', lambda') = w_term, or the parent terminal cost without w_term.
  double terminal_cost(const Vector& x) const override;
  Vector terminal_gradient(const Vector& x) const override;
  Matrix terminal_hessian(const Vector& x) const override;

 private:
  const NlpOcp* parent_;
  int first_;
  int last_;
  Vector x_init_;
  std::optional<StageBlock> w_term_;
  double mu_;
};

BoundaryData extract_boundary(const Trajectory& w, const Partition& part, int i);

SubproblemOcp build_subproblem(const NlpOcp& p, const Partition& part, int i,
                               const BoundaryData& b, double mu);

Partition partition_for(const NlpOcp& p, const SchwarzConfig& cfg);

std::pair<Trajectory, ConvergenceRecord> schwarz_solve(const NlpOcp& p,
                                                       const SchwarzConfig& cfg,
                                                       const Trajectory& start);

// Seam mismatches: eps_pr compares x_{m_i} from subproblem i-1 with the
// concatenated iterate, eps_du compares lambda_{m_i - 1} from subproblem i.
std::pair<double, double> residuals(const Trajectory& prev,
                                    const Trajectory& next,
                                    const std::vector<SubTrajectory>& subs,
                                    const Partition& part);

// 16 U (U^{6t} - U^{4t}) / gamma_c^2.
double mu_bar(double upsilon_upper, double gamma_c, int t);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_SCHWARZ_HPP
