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

#include <cmath>
#include <numbers>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/problems.hpp"

namespace schwarz_ocp {

ThinPlate::ThinPlate(ThinPlateParams params) : params_(std::move(params)) {
  if (params_.mesh < 3) throw StructuralError("thin plate mesh must be >= 3");
  if (params_.horizon < 1) throw StructuralError("thin plate horizon must be >= 1");
  const int m = nodes_per_side();
  n_ = m * m;
  const double h = spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double Tb = params_.ambient;

  laplacian_ = Matrix::Zero(n_, n_);
  boundary_ = Vector::Zero(n_);
  auto idx = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int c = idx(i, j);
      laplacian_(c, c) = -4.0 * inv_h2;
      const int di[4] = {-1, 1, 0, 0};
      const int dj[4] = {0, 0, -1, 1};
      for (int s = 0; s < 4; ++s) {
        const int ii = i + di[s], jj = j + dj[s];
        if (ii < 0 || jj < 0 || ii >= m || jj >= m) {
          boundary_(c) += Tb * inv_h2;
        } else {
          laplacian_(c, idx(ii, jj)) = inv_h2;
        }
      }
    }
  }

  if (params_.x0.size() == 0) {
    x0_ = Vector::Constant(n_, Tb);
  } else if (params_.x0.size() == n_) {
    x0_ = params_.x0;
  } else {
    throw StructuralError("thin plate initial state has the wrong length");
  }

  const double two_pi = 2.0 * std::numbers::pi;
  desired_.assign(params_.horizon + 1, Vector::Constant(n_, Tb));
  for (int k = 0; k <= params_.horizon; ++k) {
    const double time_factor =
        std::sin(two_pi * k * params_.dt / params_.desired_period);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double w1 = (i + 1) * h, w2 = (j + 1) * h;
        desired_[k](idx(i, j)) +=
            params_.desired_amplitude * std::sin(std::numbers::pi * w1) *
            std::sin(std::numbers::pi * w2) * time_factor;
      }
    }
  }
  desired_.back().array() += params_.terminal_desired_offset;
}

double ThinPlate::convection_coefficient() const {
  return 2.0 * params_.h_c / (params_.kappa * params_.t_z);
}

double ThinPlate::radiation_coefficient() const {
  return 2.0 * params_.emissivity * params_.stefan_boltzmann /
         (params_.kappa * params_.t_z);
}

double ThinPlate::weight() const {
  const double h = spacing();
  return params_.dt * h * h;
}

Vector ThinPlate::vector_field(const Vector& x, const Vector& u) const {
  if (x.size() != n_ || u.size() != n_) {
    throw StructuralError("thin plate state/control length mismatch");
  }
  const double Tb = params_.ambient;
  const double Tb4 = Tb * Tb * Tb * Tb;
  const Vector lap = laplacian_ * x + boundary_;
  return -lap + convection_coefficient() * (x.array() - Tb).matrix() +
         radiation_coefficient() * (x.array().pow(4) - Tb4).matrix() -
         u / (params_.kappa * params_.t_z);
}

Vector ThinPlate::dynamics(int, const Vector& x, const Vector& u) const {
  return x + params_.dt * vector_field(x, u);
}

void ThinPlate::dynamics_jacobian(int, const Vector& x, const Vector& u,
                                  Matrix& A, Matrix& B) const {
  if (x.size() != n_ || u.size() != n_) {
    throw StructuralError("thin plate state/control length mismatch");
  }
  const double dt = params_.dt;
  A = -dt * laplacian_;
  A.diagonal().array() +=
      1.0 + dt * convection_coefficient() +
      dt * 4.0 * radiation_coefficient() * x.array().cube();
  B = Matrix::Identity(n_, n_) * (-dt / (params_.kappa * params_.t_z));
}

Matrix ThinPlate::dynamics_hessian(int, const Vector& x, const Vector&,
                                   const Vector& w) const {
  Matrix H = Matrix::Zero(2 * n_, 2 * n_);
  const double c = params_.dt * 12.0 * radiation_coefficient();
  for (int i = 0; i < n_; ++i) H(i, i) = c * w(i) * x(i) * x(i);
  return H;
}

double ThinPlate::stage_cost(int k, const Vector& x, const Vector& u) const {
  return weight() * 0.5 * ((x - desired_.at(k)).squaredNorm() + params_.r * u.squaredNorm());
}

Vector ThinPlate::stage_cost_gradient(int k, const Vector& x,
                                      const Vector& u) const {
  Vector g(2 * n_);
  g << weight() * (x - desired_.at(k)), weight() * params_.r * u;
  return g;
}

Matrix ThinPlate::stage_cost_hessian(int, const Vector&, const Vector&) const {
  Vector d(2 * n_);
  d << Vector::Constant(n_, weight()), Vector::Constant(n_, weight() * params_.r);
  return d.asDiagonal();
}

double ThinPlate::terminal_cost(const Vector& x) const {
  return weight() * 0.5 * (x - desired_.back()).squaredNorm();
}

Vector ThinPlate::terminal_gradient(const Vector& x) const {
  return weight() * (x - desired_.back());
}

Matrix ThinPlate::terminal_hessian(const Vector&) const {
  return weight() * Matrix::Identity(n_, n_);
}

Matrix ThinPlate::stage_data_hessian(int, const Vector&, const Vector&,
                                     const Vector&) const {
  Matrix D = Matrix::Zero(n_, 2 * n_);
  D.leftCols(n_) = -weight() * Matrix::Identity(n_, n_);
  return D;
}

Matrix ThinPlate::terminal_data_hessian(const Vector&) const {
  return -weight() * Matrix::Identity(n_, n_);
}

}  // namespace schwarz_ocp
