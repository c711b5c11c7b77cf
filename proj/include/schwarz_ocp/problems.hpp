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

#ifndef SCHWARZ_OCP_PROBLEMS_HPP
#define SCHWARZ_OCP_PROBLEMS_HPP

#include <memory>
#include <vector>

#include "schwarz_ocp/ocp.hpp"

namespace schwarz_ocp {

// State (X, Xdot, Y, Ydot, Z, Zdot, gamma, beta, alpha), control
// (a, omega_X, omega_Y, omega_Z). Explicit Euler with step dt.
struct QuadrotorParams {
  int horizon = 2400;
  double dt = 0.005;
  double gravity = 9.8;
  Vector q_diag = (Vector(9) << 1, 0, 1, 0, 1, 0, 1, 1, 1).finished();
  Vector r_diag = Vector::Constant(4, 0.1);
  Vector x0 = Vector::Zero(9);
  // Reference positions over one horizon:
  //   X = ax sin(2 pi k/N), Y = ay sin(4 pi k/N), Z = az sin(2 pi k/N).
  double ref_amplitude_x = 1.0;
  double ref_amplitude_y = 0.5;
  double ref_amplitude_z = 0.25;
  // Added to the generated reference at stage N.
  Vector terminal_ref_offset = Vector::Zero(9);
  // Overrides the generated reference when it holds N+1 states.
  std::vector<Vector> reference;
};

class Quadrotor : public NlpOcp {
 public:
  explicit Quadrotor(QuadrotorParams params);

  const QuadrotorParams& params() const { return params_; }
  const Vector& reference(int k) const { return ref_.at(k); }

  int horizon() const override { return params_.horizon; }
  int state_dim() const override { return 9; }
  int control_dim() const override { return 4; }
  Vector initial_state() const override { return params_.x0; }

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

  // Data d_k = x_k^ref.
  int data_dim() const override { return 9; }
  Matrix stage_data_hessian(int k, const Vector& x, const Vector& u,
                            const Vector& lambda) const override;
  Matrix terminal_data_hessian(const Vector& x) const override;

  // Continuous-time vector field.
  Vector vector_field(const Vector& x, const Vector& u) const;

 private:
  QuadrotorParams params_;
  std::vector<Vector> ref_;
};

// Square plate on a mesh x mesh grid including the boundary nodes, which sit
// at the Dirichlet value ambient. Interior nodes carry the states and one
// heating input each.
struct ThinPlateParams {
  int mesh = 10;
  int horizon = 8640;  // 24 h at dt = 10 s
  double dt = 10.0;
  double r = 0.1;
  double kappa = 400.0;
  double t_z = 0.01;
  double h_c = 1.0;
  double emissivity = 0.5;
  double stefan_boltzmann = 5.67e-8;
  double ambient = 300.0;
  // d(w, t) = ambient + amplitude sin(pi w1) sin(pi w2) sin(2 pi t / period).
  double desired_amplitude = 10.0;
  double desired_period = 86400.0;
  Vector x0;  // defaults to the ambient temperature everywhere
  // Added to the desired temperature at stage N.
  double terminal_desired_offset = 0.0;
};

class ThinPlate : public NlpOcp {
 public:
  explicit ThinPlate(ThinPlateParams params);

  const ThinPlateParams& params() const { return params_; }
  int nodes_per_side() const { return params_.mesh - 2; }
  double spacing() const { return 1.0 / (params_.mesh - 1); }
  double convection_coefficient() const;
  double radiation_coefficient() const;
  const Vector& desired(int k) const { return desired_.at(k); }

  int horizon() const override { return params_.horizon; }
  int state_dim() const override { return n_; }
  int control_dim() const override { return n_; }
  Vector initial_state() const override { return x0_; }

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

  // Data d_k = desired temperature at stage k.
  int data_dim() const override { return n_; }
  Matrix stage_data_hessian(int k, const Vector& x, const Vector& u,
                            const Vector& lambda) const override;
  Matrix terminal_data_hessian(const Vector& x) const override;

  // Right-hand side of the semi-discrete heat equation.
  Vector vector_field(const Vector& x, const Vector& u) const;

 private:
  double weight() const;  // dt * cell area

  ThinPlateParams params_;
  int n_;
  Vector x0_;
  Matrix laplacian_;  // interior 5-point stencil, without boundary values
  Vector boundary_;   // stencil contribution of the Dirichlet nodes
  std::vector<Vector> desired_;
};

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_PROBLEMS_HPP
