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

namespace {

constexpr int kNx = 9;
constexpr int kNu = 4;
// Positions in z = (x, u).
constexpr int kGamma = 6, kBeta = 7, kAlpha = 8;
constexpr int kA = 9, kWx = 10, kWy = 11, kWz = 12;

struct Trig {
  double cg, sg, cb, sb, ca, sa, sec, tb;
};

Trig trig(const Vector& x) {
  Trig t;
  t.cg = std::cos(x(6));
  t.sg = std::sin(x(6));
  t.cb = std::cos(x(7));
  t.sb = std::sin(x(7));
  t.ca = std::cos(x(8));
  t.sa = std::sin(x(8));
  if (std::abs(t.cb) < 1e-10) {
    throw TrigSingularity("quadrotor pitch angle at +-pi/2 (cos beta = 0)");
  }
  t.sec = 1.0 / t.cb;
  t.tb = t.sb * t.sec;
  return t;
}

void check_sizes(const Vector& x, const Vector& u) {
  if (x.size() != kNx || u.size() != kNu) {
    throw StructuralError("quadrotor expects nx = 9, nu = 4");
  }
}

}  // namespace

Quadrotor::Quadrotor(QuadrotorParams params) : params_(std::move(params)) {
  const int N = params_.horizon;
  if (N < 1) throw StructuralError("quadrotor horizon must be >= 1");
  if (params_.q_diag.size() != kNx || params_.r_diag.size() != kNu ||
      params_.x0.size() != kNx || params_.terminal_ref_offset.size() != kNx) {
    throw StructuralError("quadrotor parameter dimensions are inconsistent");
  }
  if (!params_.reference.empty()) {
    if (static_cast<int>(params_.reference.size()) != N + 1) {
      throw StructuralError("quadrotor reference must hold N+1 states");
    }
    ref_ = params_.reference;
  } else {
    const double two_pi = 2.0 * std::numbers::pi;
    ref_.assign(N + 1, Vector::Zero(kNx));
    for (int k = 0; k <= N; ++k) {
      const double s = static_cast<double>(k) / N;
      ref_[k](0) = params_.ref_amplitude_x * std::sin(two_pi * s);
      ref_[k](2) = params_.ref_amplitude_y * std::sin(2.0 * two_pi * s);
      ref_[k](4) = params_.ref_amplitude_z * std::sin(two_pi * s);
    }
  }
  ref_[N] += params_.terminal_ref_offset;
}

Vector Quadrotor::vector_field(const Vector& x, const Vector& u) const {
  check_sizes(x, u);
  const Trig t = trig(x);
  const double a = u(0), wx = u(1), wy = u(2), wz = u(3);
  const double m = wx * t.cg + wy * t.sg;
  Vector F(kNx);
  F(0) = x(1);
  F(1) = a * (t.cg * t.sb * t.ca + t.sg * t.sa);
  F(2) = x(3);
  F(3) = a * (t.cg * t.sb * t.sa - t.sg * t.ca);
  F(4) = x(5);
  F(5) = a * t.cg * t.cb - params_.gravity;
  F(6) = m * t.sec;
  F(7) = -wx * t.sg + wy * t.cg;
  F(8) = m * t.tb + wz;
  return F;
}

Vector Quadrotor::dynamics(int, const Vector& x, const Vector& u) const {
  return x + params_.dt * vector_field(x, u);
}

void Quadrotor::dynamics_jacobian(int, const Vector& x, const Vector& u,
                                  Matrix& A, Matrix& B) const {
  check_sizes(x, u);
  const Trig t = trig(x);
  const double a = u(0), wx = u(1), wy = u(2);
  const double m = wx * t.cg + wy * t.sg;
  const double n = -wx * t.sg + wy * t.cg;
  const double h2 = t.cg * t.sb * t.ca + t.sg * t.sa;
  const double h4 = t.cg * t.sb * t.sa - t.sg * t.ca;
  Matrix J = Matrix::Zero(kNx, kNx + kNu);
  J(0, 1) = 1.0;
  J(2, 3) = 1.0;
  J(4, 5) = 1.0;
  J(1, kGamma) = a * (-t.sg * t.sb * t.ca + t.cg * t.sa);
  J(1, kBeta) = a * t.cg * t.cb * t.ca;
  J(1, kAlpha) = a * (-t.cg * t.sb * t.sa + t.sg * t.ca);
  J(1, kA) = h2;
  J(3, kGamma) = a * (-t.sg * t.sb * t.sa - t.cg * t.ca);
  J(3, kBeta) = a * t.cg * t.cb * t.sa;
  J(3, kAlpha) = a * (t.cg * t.sb * t.ca + t.sg * t.sa);
  J(3, kA) = h4;
  J(5, kGamma) = -a * t.sg * t.cb;
  J(5, kBeta) = -a * t.cg * t.sb;
  J(5, kA) = t.cg * t.cb;
  J(6, kGamma) = n * t.sec;
  J(6, kBeta) = m * t.sec * t.tb;
  J(6, kWx) = t.cg * t.sec;
  J(6, kWy) = t.sg * t.sec;
  J(7, kGamma) = -m;
  J(7, kWx) = -t.sg;
  J(7, kWy) = t.cg;
  J(8, kGamma) = n * t.tb;
  J(8, kBeta) = m * t.sec * t.sec;
  J(8, kWx) = t.cg * t.tb;
  J(8, kWy) = t.sg * t.tb;
  J(8, kWz) = 1.0;
  J *= params_.dt;
  A = J.leftCols(kNx);
  A.diagonal().array() += 1.0;
  B = J.rightCols(kNu);
}

Matrix Quadrotor::dynamics_hessian(int, const Vector& x, const Vector& u,
                                   const Vector& w) const {
  check_sizes(x, u);
  if (w.size() != kNx) throw StructuralError("weights must have length 9");
  const Trig t = trig(x);
  const double a = u(0), wx = u(1), wy = u(2);
  const double m = wx * t.cg + wy * t.sg;
  const double n = -wx * t.sg + wy * t.cg;
  const double sec2 = t.sec * t.sec;
  Matrix H = Matrix::Zero(kNx + kNu, kNx + kNu);
  auto add = [&H](int i, int j, double v) {
    H(i, j) += v;
    if (i != j) H(j, i) += v;
  };

  // Xddot = a h2(gamma, beta, alpha).
  {
    const double c = w(1);
    const double h2 = t.cg * t.sb * t.ca + t.sg * t.sa;
    add(kA, kGamma, c * (-t.sg * t.sb * t.ca + t.cg * t.sa));
    add(kA, kBeta, c * t.cg * t.cb * t.ca);
    add(kA, kAlpha, c * (-t.cg * t.sb * t.sa + t.sg * t.ca));
    add(kGamma, kGamma, -c * a * h2);
    add(kGamma, kBeta, -c * a * t.sg * t.cb * t.ca);
    add(kGamma, kAlpha, c * a * (t.sg * t.sb * t.sa + t.cg * t.ca));
    add(kBeta, kBeta, -c * a * t.cg * t.sb * t.ca);
    add(kBeta, kAlpha, -c * a * t.cg * t.cb * t.sa);
    add(kAlpha, kAlpha, -c * a * h2);
  }
  // Yddot = a h4(gamma, beta, alpha).
  {
    const double c = w(3);
    const double h4 = t.cg * t.sb * t.sa - t.sg * t.ca;
    add(kA, kGamma, c * (-t.sg * t.sb * t.sa - t.cg * t.ca));
    add(kA, kBeta, c * t.cg * t.cb * t.sa);
    add(kA, kAlpha, c * (t.cg * t.sb * t.ca + t.sg * t.sa));
    add(kGamma, kGamma, -c * a * h4);
    add(kGamma, kBeta, -c * a * t.sg * t.cb * t.sa);
    add(kGamma, kAlpha, c * a * (-t.sg * t.sb * t.ca + t.cg * t.sa));
    add(kBeta, kBeta, -c * a * t.cg * t.sb * t.sa);
    add(kBeta, kAlpha, c * a * t.cg * t.cb * t.ca);
    add(kAlpha, kAlpha, -c * a * h4);
  }
  // Zddot = a cos(gamma) cos(beta) - g.
  {
    const double c = w(5);
    add(kA, kGamma, -c * t.sg * t.cb);
    add(kA, kBeta, -c * t.cg * t.sb);
    add(kGamma, kGamma, -c * a * t.cg * t.cb);
    add(kGamma, kBeta, c * a * t.sg * t.sb);
    add(kBeta, kBeta, -c * a * t.cg * t.cb);
  }
  // gammadot = m sec(beta).
  {
    const double c = w(6);
    add(kWx, kGamma, -c * t.sg * t.sec);
    add(kWx, kBeta, c * t.cg * t.sec * t.tb);
    add(kWy, kGamma, c * t.cg * t.sec);
    add(kWy, kBeta, c * t.sg * t.sec * t.tb);
    add(kGamma, kGamma, -c * m * t.sec);
    add(kGamma, kBeta, c * n * t.sec * t.tb);
    add(kBeta, kBeta, c * m * t.sec * (t.tb * t.tb + sec2));
  }
  // betadot = n.
  {
    const double c = w(7);
    add(kWx, kGamma, -c * t.cg);
    add(kWy, kGamma, -c * t.sg);
    add(kGamma, kGamma, -c * n);
  }
  // alphadot = m tan(beta) + omega_Z.
  {
    const double c = w(8);
    add(kWx, kGamma, -c * t.sg * t.tb);
    add(kWx, kBeta, c * t.cg * sec2);
    add(kWy, kGamma, c * t.cg * t.tb);
    add(kWy, kBeta, c * t.sg * sec2);
    add(kGamma, kGamma, -c * m * t.tb);
    add(kGamma, kBeta, c * n * sec2);
    add(kBeta, kBeta, 2.0 * c * m * sec2 * t.tb);
  }
  return params_.dt * H;
}

double Quadrotor::stage_cost(int k, const Vector& x, const Vector& u) const {
  check_sizes(x, u);
  const Vector e = x - ref_.at(k);
  return 0.5 * e.dot(params_.q_diag.cwiseProduct(e)) +
         0.5 * u.dot(params_.r_diag.cwiseProduct(u));
}

Vector Quadrotor::stage_cost_gradient(int k, const Vector& x,
                                      const Vector& u) const {
  check_sizes(x, u);
  Vector g(kNx + kNu);
  g << params_.q_diag.cwiseProduct(x - ref_.at(k)), params_.r_diag.cwiseProduct(u);
  return g;
}

Matrix Quadrotor::stage_cost_hessian(int, const Vector&, const Vector&) const {
  Vector d(kNx + kNu);
  d << params_.q_diag, params_.r_diag;
  return d.asDiagonal();
}

double Quadrotor::terminal_cost(const Vector& x) const {
  const Vector e = x - ref_.back();
  return 0.5 / params_.dt * e.dot(params_.q_diag.cwiseProduct(e));
}

Vector Quadrotor::terminal_gradient(const Vector& x) const {
  return params_.q_diag.cwiseProduct(x - ref_.back()) / params_.dt;
}

Matrix Quadrotor::terminal_hessian(const Vector&) const {
  return Matrix(params_.q_diag.asDiagonal()) / params_.dt;
}

Matrix Quadrotor::stage_data_hessian(int, const Vector&, const Vector&,
                                     const Vector&) const {
  Matrix D = Matrix::Zero(kNx, kNx + kNu);
  D.leftCols(kNx) = -Matrix(params_.q_diag.asDiagonal());
  return D;
}

Matrix Quadrotor::terminal_data_hessian(const Vector&) const {
  return -Matrix(params_.q_diag.asDiagonal()) / params_.dt;
}

}  // namespace schwarz_ocp
