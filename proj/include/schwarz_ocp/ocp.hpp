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

#ifndef SCHWARZ_OCP_OCP_HPP
#define SCHWARZ_OCP_OCP_HPP

#include "schwarz_ocp/trajectory.hpp"

namespace schwarz_ocp {

// Discrete-time OCP: minimize sum_k g_k(x_k, u_k) + g_N(x_N) subject to
// x_{k+1} = f_k(x_k, u_k) and x_0 = x0. Hessians are over z = (x, u).
//
// Optional data parameters d_k (dimension data_dim()) enter the problem
// through cross Hessians and dynamics Jacobians; they are only needed when
// building sensitivity problems.
class NlpOcp {
 public:
  virtual ~NlpOcp() = default;

  virtual int horizon() const = 0;
  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual Vector initial_state() const = 0;

  // Free initial state: x_0 is a decision variable and lambda_{-1} = 0.
  virtual bool initial_state_free() const { return false; }

  virtual double stage_cost(int k, const Vector& x, const Vector& u) const = 0;
  virtual Vector stage_cost_gradient(int k, const Vector& x,
                                     const Vector& u) const = 0;
  virtual Matrix stage_cost_hessian(int k, const Vector& x,
                                    const Vector& u) const = 0;

  virtual Vector dynamics(int k, const Vector& x, const Vector& u) const = 0;
  virtual void dynamics_jacobian(int k, const Vector& x, const Vector& u,
                                 Matrix& A, Matrix& B) const = 0;
  // sum_i weights_i * Hessian of the i-th component of f_k over z.
  virtual Matrix dynamics_hessian(int k, const Vector& x, const Vector& u,
                                  const Vector& weights) const = 0;

  virtual double terminal_cost(const Vector& x) const = 0;
  virtual Vector terminal_gradient(const Vector& x) const = 0;
  virtual Matrix terminal_hessian(const Vector& x) const = 0;

  virtual int data_dim() const { return 0; }
  // d^2 L_k / dd dz, shape data_dim x (nx + nu).
  virtual Matrix stage_data_hessian(int k, const Vector& x, const Vector& u,
                                    const Vector& lambda) const;
  // df_k / dd, shape nx x data_dim.
  virtual Matrix dynamics_data_jacobian(int k, const Vector& x,
                                        const Vector& u) const;
  // d^2 g_N / dd dx, shape data_dim x nx.
  virtual Matrix terminal_data_hessian(const Vector& x) const;

  Trajectory zero_trajectory() const {
    return Trajectory(horizon(), state_dim(), control_dim());
  }
};

struct KktResidual {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double max() const {
    return stationarity > feasibility ? stationarity : feasibility;
  }
};

// Stationarity rows per stage:
//   x_k: grad_x g_k + lambda_{k-1} - A_k' lambda_k
//   u_k: grad_u g_k - B_k' lambda_k
//   x_N: grad g_N + lambda_{N-1}
// Feasibility rows: x_{k+1} - f_k and x_0 - x0 (lambda_{-1} when x_0 is free).
KktResidual kkt_residual(const NlpOcp& p, const Trajectory& t);

// Objective value sum g_k + g_N.
double objective(const NlpOcp& p, const Trajectory& t);

// Throws StructuralError when t does not match the dimensions of p.
void check_dimensions(const NlpOcp& p, const Trajectory& t);

// Forward simulation from the initial state with the given controls.
Trajectory rollout(const NlpOcp& p, const std::vector<Vector>& controls);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_OCP_HPP
