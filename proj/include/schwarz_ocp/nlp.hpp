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

#ifndef SCHWARZ_OCP_NLP_HPP
#define SCHWARZ_OCP_NLP_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "schwarz_ocp/lq.hpp"
#include "schwarz_ocp/ocp.hpp"

namespace schwarz_ocp {

struct SqpOptions {
  double tolerance = 1e-8;
  int max_iterations = 200;
  // Hessian shift sigma: first value after an IndefiniteW, growth factor, cap.
  double regularization_initial = 1e-6;
  double regularization_growth = 10.0;
  double regularization_max = 1e12;
  double armijo_eta = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-12;
  // l1 merit penalty: kept above the dual sup-norm plus this margin and
  // multiplied by the growth factor when the step is not a descent direction.
  double penalty_margin = 1.0;
  double penalty_growth = 10.0;
  // Raise MaxIterations / LineSearchFailure instead of returning a report.
  bool throw_on_failure = false;
};

struct SqpTraceRow {
  int iter = 0;
  double stationarity = 0.0;
  double feasibility = 0.0;
  double step_length = 0.0;
  double merit = 0.0;
  double wall_s = 0.0;  // since the solve started; not written to CSV
};

struct SqpReport {
  bool converged = false;
  int iterations = 0;
  KktResidual final_residual;
  int regularizations = 0;
  std::string message;
  std::vector<SqpTraceRow> trace;
};

std::pair<Trajectory, SqpReport> sqp_solve(const NlpOcp& p,
                                           const Trajectory& start,
                                           const SqpOptions& opts = {});

// Newton subproblem at w: H_k = (1/2) Hessian of the Lagrangian, linear terms
// from the cost gradient, drift from the dynamics residual. Its solution holds
// the primal step and the new multipliers.
LqProblem newton_lq(const NlpOcp& p, const Trajectory& w);

// Max relative discrepancy between callback derivatives and central
// differences with step h, over every stage of `at`.
double check_derivatives(const NlpOcp& p, const Trajectory& at, double h);

void write_sqp_trace_csv(std::ostream& os, const SqpReport& report);

// LqProblem viewed as an NlpOcp. Data d_k (dimension nx) is an additive
// disturbance on the dynamics, so C_k = I.
class LqOcp : public NlpOcp {
 public:
  explicit LqOcp(LqProblem p);

  const LqProblem& problem() const { return p_; }

  int horizon() const override { return p_.horizon; }
  int state_dim() const override { return p_.nx; }
  int control_dim() const override { return p_.nu; }
  Vector initial_state() const override { return p_.x0; }
  bool initial_state_free() const override { return p_.free_initial_state; }

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
  double terminal_cost(const Vector& x) const override;
  Vector terminal_gradient(const Vector& x) const override;
  Matrix terminal_hessian(const Vector& x) const override;

  int data_dim() const override { return p_.nx; }
  Matrix dynamics_data_jacobian(int k, const Vector& x,
                                const Vector& u) const override;

 private:
  LqProblem p_;
  std::vector<Matrix> H_;
};

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_NLP_HPP
