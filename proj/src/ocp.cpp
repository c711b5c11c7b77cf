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

#include "schwarz_ocp/ocp.hpp"

#include "schwarz_ocp/errors.hpp"

namespace schwarz_ocp {

Matrix NlpOcp::stage_data_hessian(int, const Vector&, const Vector&,
                                  const Vector&) const {
  return Matrix::Zero(data_dim(), state_dim() + control_dim());
}

Matrix NlpOcp::dynamics_data_jacobian(int, const Vector&, const Vector&) const {
  return Matrix::Zero(state_dim(), data_dim());
}

Matrix NlpOcp::terminal_data_hessian(const Vector&) const {
  return Matrix::Zero(data_dim(), state_dim());
}

void check_dimensions(const NlpOcp& p, const Trajectory& t) {
  if (t.horizon() != p.horizon() || t.nx() != p.state_dim() ||
      t.nu() != p.control_dim()) {
    throw StructuralError("trajectory (N=" + std::to_string(t.horizon()) +
                          ", nx=" + std::to_string(t.nx()) +
                          ", nu=" + std::to_string(t.nu()) +
                          ") does not match the problem");
  }
  t.validate();
}

KktResidual kkt_residual(const NlpOcp& p, const Trajectory& t) {
  check_dimensions(p, t);
  const int N = p.horizon();
  const int nx = p.state_dim();
  KktResidual r;
  Matrix A, B;
  for (int k = 0; k < N; ++k) {
    const Vector grad = p.stage_cost_gradient(k, t.x(k), t.u(k));
    p.dynamics_jacobian(k, t.x(k), t.u(k), A, B);
    const Vector rx =
        grad.head(nx) + t.lambda(k - 1) - A.transpose() * t.lambda(k);
    const Vector ru = grad.tail(p.control_dim()) - B.transpose() * t.lambda(k);
    r.stationarity = std::max({r.stationarity, rx.norm(), ru.norm()});
    const Vector c = t.x(k + 1) - p.dynamics(k, t.x(k), t.u(k));
    r.feasibility = std::max(r.feasibility, c.norm());
  }
  const Vector rN = p.terminal_gradient(t.x(N)) + t.lambda(N - 1);
  r.stationarity = std::max(r.stationarity, rN.norm());
  if (p.initial_state_free()) {
    r.feasibility = std::max(r.feasibility, t.lambda(-1).norm());
  } else {
    r.feasibility =
        std::max(r.feasibility, (t.x(0) - p.initial_state()).norm());
  }
  return r;
}

double objective(const NlpOcp& p, const Trajectory& t) {
  check_dimensions(p, t);
  double J = 0.0;
  for (int k = 0; k < p.horizon(); ++k) J += p.stage_cost(k, t.x(k), t.u(k));
  return J + p.terminal_cost(t.x(p.horizon()));
}

Trajectory rollout(const NlpOcp& p, const std::vector<Vector>& controls) {
  if (static_cast<int>(controls.size()) != p.horizon()) {
    throw StructuralError("rollout needs one control per stage");
  }
  Trajectory t = p.zero_trajectory();
  t.x(0) = p.initial_state();
  for (int k = 0; k < p.horizon(); ++k) {
    t.u(k) = controls[k];
    t.x(k + 1) = p.dynamics(k, t.x(k), t.u(k));
  }
  return t;
}

}  // namespace schwarz_ocp
