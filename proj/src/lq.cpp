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

#include "schwarz_ocp/lq.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>

#include "schwarz_ocp/errors.hpp"

namespace schwarz_ocp {

namespace {

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const char* name, int k) {
  if (m.rows() != rows || m.cols() != cols) {
    throw StructuralError(std::string("LQ block ") + name + " at stage " +
                          std::to_string(k) + " has shape " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void expect_size(const Vector& v, Eigen::Index n, const char* name, int k) {
  if (v.size() != n) {
    throw StructuralError(std::string("LQ vector ") + name + " at stage " +
                          std::to_string(k) + " has length " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(n));
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

LqProblem::LqProblem(int horizon_, int nx_, int nu_, int nd_)
    : horizon(horizon_), nx(nx_), nu(nu_), nd(nd_) {
  if (horizon < 1 || nx < 1 || nu < 1 || nd < 0) {
    throw StructuralError("LQ problem needs N >= 1, nx >= 1, nu >= 1");
  }
  LqStage st;
  st.Q = Matrix::Zero(nx, nx);
  st.S = Matrix::Zero(nu, nx);
  st.R = Matrix::Zero(nu, nu);
  st.A = Matrix::Zero(nx, nx);
  st.B = Matrix::Zero(nx, nu);
  st.r = Vector::Zero(nx);
  st.s = Vector::Zero(nu);
  st.v = Vector::Zero(nx);
  st.D1 = Matrix::Zero(nd, nx);
  st.D2 = Matrix::Zero(nd, nu);
  st.C = Matrix::Zero(nx, nd);
  st.l = Vector::Zero(nd);
  stages.assign(horizon, st);
  QN = Matrix::Zero(nx, nx);
  rN = Vector::Zero(nx);
  DN = Matrix::Zero(nd, nx);
  lN = Vector::Zero(nd);
  x0 = Vector::Zero(nx);
}

void LqProblem::validate() const {
  if (horizon < 1 || static_cast<int>(stages.size()) != horizon) {
    throw StructuralError("LQ problem stage count does not match N");
  }
  for (int k = 0; k < horizon; ++k) {
    const LqStage& st = stages[k];
    expect_shape(st.Q, nx, nx, "Q", k);
    expect_shape(st.S, nu, nx, "S", k);
    expect_shape(st.R, nu, nu, "R", k);
    expect_shape(st.A, nx, nx, "A", k);
    expect_shape(st.B, nx, nu, "B", k);
    expect_size(st.r, nx, "r", k);
    expect_size(st.s, nu, "s", k);
    expect_size(st.v, nx, "v", k);
    expect_shape(st.D1, nd, nx, "D1", k);
    expect_shape(st.D2, nd, nu, "D2", k);
    expect_shape(st.C, nx, nd, "C", k);
    expect_size(st.l, nd, "l", k);
  }
  expect_shape(QN, nx, nx, "QN", horizon);
  expect_size(rN, nx, "rN", horizon);
  expect_shape(DN, nd, nx, "DN", horizon);
  expect_size(lN, nd, "lN", horizon);
  expect_size(x0, nx, "x0", -1);
}

Vector LqProblem::linear_x(int k) const {
  const LqStage& st = stages.at(k);
  if (nd == 0) return st.r;
  return st.r + 2.0 * st.D1.transpose() * st.l;
}

Vector LqProblem::linear_u(int k) const {
  const LqStage& st = stages.at(k);
  if (nd == 0) return st.s;
  return st.s + 2.0 * st.D2.transpose() * st.l;
}

Vector LqProblem::drift(int k) const {
  const LqStage& st = stages.at(k);
  if (nd == 0) return st.v;
  return st.v + st.C * st.l;
}

Vector LqProblem::terminal_linear() const {
  if (nd == 0) return rN;
  return rN + 2.0 * DN.transpose() * lN;
}

Matrix LqProblem::hessian(int k) const {
  const LqStage& st = stages.at(k);
  Matrix H(nx + nu, nx + nu);
  H << st.Q, st.S.transpose(), st.S, st.R;
  return H;
}

RiccatiFactors riccati_factor(const LqProblem& p) {
  p.validate();
  const int N = p.horizon;
  RiccatiFactors f;
  f.W.resize(N);
  f.P.resize(N);
  f.E.resize(N);
  f.W_llt.resize(N);
  f.K.resize(N + 1);
  f.K[N] = symmetrize(p.QN);
  for (int k = N - 1; k >= 0; --k) {
    const LqStage& st = p.stages[k];
    const Matrix& Kn = f.K[k + 1];
    const Matrix KB = Kn * st.B;
    const Matrix G = KB.transpose() * st.A + st.S;  // B'K'A + S
    f.W[k] = symmetrize(st.R + st.B.transpose() * KB);
    f.W_llt[k].compute(f.W[k]);
    if (f.W_llt[k].info() != Eigen::Success) throw IndefiniteW(k);
    f.P[k] = -f.W_llt[k].solve(G);
    f.E[k] = st.A + st.B * f.P[k];
    f.K[k] = symmetrize(st.Q + st.A.transpose() * Kn * st.A +
                        G.transpose() * f.P[k]);
  }
  if (p.free_initial_state) {
    f.K0_llt.emplace(f.K[0]);
    if (f.K0_llt->info() != Eigen::Success) throw IndefiniteW(-1);
  }
  return f;
}

Trajectory lq_solve(const LqProblem& p, const RiccatiFactors& f) {
  const int N = p.horizon;
  if (static_cast<int>(f.K.size()) != N + 1) {
    throw StructuralError("Riccati factors do not match the problem");
  }
  // Affine part of the value function V_k(x) = x'K_k x + kappa_k'x + const.
  std::vector<Vector> kappa(N + 1), ff(N);
  kappa[N] = p.terminal_linear();
  for (int k = N - 1; k >= 0; --k) {
    const LqStage& st = p.stages[k];
    const Matrix& Kn = f.K[k + 1];
    const Vector v = p.drift(k);
    const Vector Kv = Kn * v;
    ff[k] = -0.5 * f.W_llt[k].solve(p.linear_u(k) +
                                    st.B.transpose() * (kappa[k + 1] + 2.0 * Kv));
    kappa[k] = p.linear_x(k) + st.A.transpose() * kappa[k + 1] +
               2.0 * st.A.transpose() * (Kn * (st.B * ff[k]) + Kv) +
               2.0 * st.S.transpose() * ff[k];
  }
  Trajectory t(N, p.nx, p.nu);
  if (p.free_initial_state) {
    if (!f.K0_llt) throw StructuralError("factors lack the free x_0 block");
    t.x(0) = -0.5 * f.K0_llt->solve(kappa[0]);
  } else {
    t.x(0) = p.x0;
  }
  for (int k = 0; k < N; ++k) {
    const LqStage& st = p.stages[k];
    t.u(k) = f.P[k] * t.x(k) + ff[k];
    t.x(k + 1) = st.A * t.x(k) + st.B * t.u(k) + p.drift(k);
  }
  for (int k = -1; k < N; ++k) {
    t.lambda(k) = -(2.0 * f.K[k + 1] * t.x(k + 1) + kappa[k + 1]);
  }
  if (p.free_initial_state) t.lambda(-1).setZero();
  return t;
}

Trajectory lq_solve(const LqProblem& p) { return lq_solve(p, riccati_factor(p)); }

Trajectory dense_kkt_solve(const LqProblem& p) {
  p.validate();
  const int N = p.horizon;
  const int nx = p.nx;
  const int nu = p.nu;
  const int nX = (N + 1) * nx;
  const int nU = N * nu;
  const int n = nX + nU + (N + 1) * nx;
  auto xi = [&](int k) { return k * nx; };
  auto ui = [&](int k) { return nX + k * nu; };
  auto li = [&](int k) { return nX + nU + (k + 1) * nx; };

  Matrix K = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  const Matrix I = Matrix::Identity(nx, nx);
  for (int k = 0; k < N; ++k) {
    const LqStage& st = p.stages[k];
    // Stationarity in x_k and u_k.
    K.block(xi(k), xi(k), nx, nx) = 2.0 * st.Q;
    K.block(xi(k), ui(k), nx, nu) = 2.0 * st.S.transpose();
    K.block(xi(k), li(k - 1), nx, nx) = I;
    K.block(xi(k), li(k), nx, nx) = -st.A.transpose();
    rhs.segment(xi(k), nx) = -p.linear_x(k);
    K.block(ui(k), xi(k), nu, nx) = 2.0 * st.S;
    K.block(ui(k), ui(k), nu, nu) = 2.0 * st.R;
    K.block(ui(k), li(k), nu, nx) = -st.B.transpose();
    rhs.segment(ui(k), nu) = -p.linear_u(k);
    // Dynamics row.
    K.block(li(k), xi(k + 1), nx, nx) = I;
    K.block(li(k), xi(k), nx, nx) = -st.A;
    K.block(li(k), ui(k), nx, nu) = -st.B;
    rhs.segment(li(k), nx) = p.drift(k);
  }
  K.block(xi(N), xi(N), nx, nx) = 2.0 * p.QN;
  K.block(xi(N), li(N - 1), nx, nx) = I;
  rhs.segment(xi(N), nx) = -p.terminal_linear();
  if (p.free_initial_state) {
    K.block(li(-1), li(-1), nx, nx) = I;
  } else {
    K.block(li(-1), xi(0), nx, nx) = I;
    rhs.segment(li(-1), nx) = p.x0;
  }

  Eigen::FullPivLU<Matrix> lu(K);
  const double rcond = lu.isInvertible() ? lu.rcond() : 0.0;
  if (!(rcond > 1e-14)) {
    throw SingularKkt("KKT matrix is numerically singular (rcond " +
                      std::to_string(rcond) + ")");
  }
  const Vector sol = lu.solve(rhs);
  if (!sol.allFinite()) throw SingularKkt("KKT solve produced non-finite values");

  Trajectory t(N, nx, nu);
  for (int k = 0; k <= N; ++k) t.x(k) = sol.segment(xi(k), nx);
  for (int k = 0; k < N; ++k) t.u(k) = sol.segment(ui(k), nu);
  for (int k = -1; k < N; ++k) t.lambda(k) = sol.segment(li(k), nx);
  return t;
}

std::vector<Vector> closed_form_duals(const LqProblem& p,
                                      const RiccatiFactors& f,
                                      const Trajectory& primal) {
  const int N = p.horizon;
  const int nx = p.nx;
  // Effective data terms: a_i stands for D_i1' l_i, b_i for D_i2' l_i and
  // c_i for C_i l_i.
  std::vector<Vector> a(N + 1), b(N), c(N);
  for (int i = 0; i < N; ++i) {
    a[i] = 0.5 * p.linear_x(i);
    b[i] = 0.5 * p.linear_u(i);
    c[i] = p.drift(i);
  }
  a[N] = 0.5 * p.terminal_linear();

  std::vector<Vector> duals(N + 1);
  for (int k = -1; k < N; ++k) {
    const int s = k + 1;
    Vector z = -2.0 * f.K[s] * primal.x(s);
    Matrix prod = Matrix::Identity(nx, nx);  // E_{i-1} ... E_s
    for (int i = s; i <= N; ++i) {
      // M_i^s' l_i with the product up to E_{i-1}.
      Vector Dl = a[i];
      if (i < N) Dl += f.P[i].transpose() * b[i];
      z += -2.0 * prod.transpose() * Dl;
      if (i < N) {
        prod = f.E[i] * prod;
        // V_i^s' C_i l_i with the product up to E_i.
        z += -2.0 * prod.transpose() * (f.K[i + 1] * c[i]);
      }
    }
    duals[k + 1] = z;
  }
  return duals;
}

ConvexifiedLq convexify(const LqProblem& p, double beta) {
  p.validate();
  if (!(beta > 0.0)) throw Error("convexification needs beta > 0");
  const int N = p.horizon;
  const int nx = p.nx;
  ConvexifiedLq out;
  out.problem = p;
  out.q_bar.resize(N + 1);
  const Matrix I = Matrix::Identity(nx, nx);
  out.problem.QN = beta * I;
  out.q_bar[N] = p.QN - beta * I;
  for (int k = N - 1; k >= 0; --k) {
    const LqStage& st = p.stages[k];
    LqStage& ct = out.problem.stages[k];
    const Matrix& Qb = out.q_bar[k + 1];
    const Matrix QbA = Qb * st.A;
    const Matrix QbB = Qb * st.B;
    const Matrix Q_hat = symmetrize(st.Q + st.A.transpose() * QbA);
    ct.S = st.S + st.B.transpose() * QbA;
    ct.R = symmetrize(st.R + st.B.transpose() * QbB);
    if (p.nd > 0) {
      ct.D1 = st.D1 + st.C.transpose() * QbA;
      ct.D2 = st.D2 + st.C.transpose() * QbB;
    }
    // Drift enters the same rank update as C l.
    const Vector Qbv = Qb * st.v;
    ct.r = st.r + 2.0 * st.A.transpose() * Qbv;
    ct.s = st.s + 2.0 * st.B.transpose() * Qbv;
    Eigen::LLT<Matrix> llt(ct.R);
    if (llt.info() != Eigen::Success) throw ConvexifyBreakdown(k);
    ct.Q = symmetrize(ct.S.transpose() * llt.solve(ct.S)) + beta * I;
    out.q_bar[k] = Q_hat - ct.Q;
  }
  return out;
}

Trajectory shift_duals(const ConvexifiedLq& c, const Trajectory& sol) {
  Trajectory t = sol;
  for (int k = -1; k < sol.horizon(); ++k) {
    t.lambda(k) = sol.lambda(k) - 2.0 * c.q_bar[k + 1] * sol.x(k + 1);
  }
  return t;
}

double reduced_hessian_min_eig(const LqProblem& p) {
  p.validate();
  const int N = p.horizon;
  const int nx = p.nx;
  const int nu = p.nu;
  const int nz = (N + 1) * nx + N * nu;
  const int free_dim = p.free_initial_state ? nx : 0;
  const int m = N * nu + free_dim;
  // Null-space parameterization: the controls (and a free x_0) determine all
  // states through the homogeneous dynamics.
  Matrix Y = Matrix::Zero(nz, m);
  auto xi = [&](int k) { return k * (nx + nu); };
  auto ui = [&](int k) { return k * (nx + nu) + nx; };
  if (free_dim > 0) Y.block(xi(0), N * nu, nx, nx).setIdentity();
  for (int k = 0; k < N; ++k) {
    const LqStage& st = p.stages[k];
    Y.block(ui(k), k * nu, nu, nu).setIdentity();
    Y.middleRows(xi(k + 1), nx) =
        st.A * Y.middleRows(xi(k), nx) + st.B * Y.middleRows(ui(k), nu);
  }
  Matrix H = Matrix::Zero(nz, nz);
  for (int k = 0; k < N; ++k) H.block(xi(k), xi(k), nx + nu, nx + nu) = p.hessian(k);
  H.block(xi(N), xi(N), nx, nx) = p.QN;

  Eigen::HouseholderQR<Matrix> qr(Y);
  const Matrix Z = qr.householderQ() * Matrix::Identity(nz, m);
  const Matrix reduced = symmetrize(Z.transpose() * H * Z);
  Eigen::SelfAdjointEigenSolver<Matrix> es(reduced, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double default_convexification_beta(const LqProblem& p) {
  const double gamma = reduced_hessian_min_eig(p);
  return gamma > 0.0 ? 0.5 * gamma : 1e-2;
}

}  // namespace schwarz_ocp
