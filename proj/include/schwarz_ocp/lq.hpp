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

#ifndef SCHWARZ_OCP_LQ_HPP
#define SCHWARZ_OCP_LQ_HPP

#include <Eigen/Cholesky>
#include <optional>
#include <string>
#include <vector>

#include "schwarz_ocp/trajectory.hpp"

namespace schwarz_ocp {

// Stage data. The stage cost is z'Hz + r'x + s'u with H = [[Q, S'], [S, R]]
// and z = (x, u); no 1/2 factor. Dynamics are x+ = A x + B u + v + C l.
// D1, D2, C and l are empty unless the instance is a sensitivity problem, in
// which case the cost gains 2 l'(D1 x + D2 u).
struct LqStage {
  Matrix Q, S, R, A, B;
  Vector r, s, v;
  Matrix D1, D2, C;
  Vector l;
};

struct LqProblem {
  LqProblem() = default;
  LqProblem(int horizon, int nx, int nu, int nd = 0);

  int horizon = 0;
  int nx = 0;
  int nu = 0;
  int nd = 0;
  std::vector<LqStage> stages;
  Matrix QN;
  Vector rN;
  Matrix DN;  // nd x nx
  Vector lN;
  Vector x0;  // doubles as l_{-1} for sensitivity problems
  bool free_initial_state = false;

  void validate() const;

  // Linear terms after folding in the data couplings.
  Vector linear_x(int k) const;
  Vector linear_u(int k) const;
  Vector drift(int k) const;
  Vector terminal_linear() const;
  Matrix hessian(int k) const;
};

struct RiccatiFactors {
  std::vector<Matrix> W, P, E;  // stages 0..N-1
  std::vector<Matrix> K;        // stages 0..N
  std::vector<Eigen::LLT<Matrix>> W_llt;
  std::optional<Eigen::LLT<Matrix>> K0_llt;  // only for a free x_0
};

RiccatiFactors riccati_factor(const LqProblem& p);

// Primal-dual solution using the factors and the affine backward pass.
Trajectory lq_solve(const LqProblem& p, const RiccatiFactors& f);
Trajectory lq_solve(const LqProblem& p);

// Assembles the full saddle-point system and solves it with LU.
Trajectory dense_kkt_solve(const LqProblem& p);

// Duals evaluated from the stagewise sum
//   lambda_k = -2 K_{k+1} x_{k+1} + 2 sum_i (M_i^{k+1})' l_i
//              + 2 sum_i (V_i^{k+1})' C_i l_i
// with V_i^k = -K_{i+1} E_i...E_k and M_i^k = -(D_i1 + D_i2 P_i) E_{i-1}...E_k.
// Plain linear terms and drifts are treated as their data-coupling analogues.
std::vector<Vector> closed_form_duals(const LqProblem& p,
                                      const RiccatiFactors& f,
                                      const Trajectory& primal);

struct ConvexifiedLq {
  LqProblem problem;
  std::vector<Matrix> q_bar;  // Q-bar_0..Q-bar_N
};

ConvexifiedLq convexify(const LqProblem& p, double beta);

// Recovers the duals of p from the solution of its convexified counterpart:
// lambda_k = lambda^c_k - 2 Q-bar_{k+1} x_{k+1}.
Trajectory shift_duals(const ConvexifiedLq& c, const Trajectory& convex_solution);

// Smallest eigenvalue of Z'HZ, Z an orthonormal basis of the null space of
// the linearized constraints. Dense; for modest sizes only.
double reduced_hessian_min_eig(const LqProblem& p);

// Half the reduced Hessian eigenvalue when it is positive; 1e-2 otherwise.
double default_convexification_beta(const LqProblem& p);

LqProblem read_lq_problem(const std::string& path);
LqProblem parse_lq_problem(const std::string& text);
std::string to_json(const LqProblem& p);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_LQ_HPP
