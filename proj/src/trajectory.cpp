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

#include "schwarz_ocp/trajectory.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/partition.hpp"

namespace schwarz_ocp {

Trajectory::Trajectory(int horizon, int nx, int nu)
    : horizon_(horizon), nx_(nx), nu_(nu) {
  if (horizon < 1 || nx < 1 || nu < 1) {
    throw StructuralError("trajectory needs N >= 1, nx >= 1, nu >= 1");
  }
  x_.assign(horizon + 1, Vector::Zero(nx));
  u_.assign(horizon, Vector::Zero(nu));
  lambda_.assign(horizon + 1, Vector::Zero(nx));
}

Trajectory Trajectory::from_blocks(std::vector<Vector> x, std::vector<Vector> u,
                                   std::vector<Vector> lambda) {
  if (u.empty() || x.size() != u.size() + 1 || lambda.size() != x.size()) {
    throw StructuralError("trajectory blocks must have lengths N+1, N, N+1");
  }
  Trajectory t;
  t.horizon_ = static_cast<int>(u.size());
  t.nx_ = static_cast<int>(x.front().size());
  t.nu_ = static_cast<int>(u.front().size());
  t.x_ = std::move(x);
  t.u_ = std::move(u);
  t.lambda_ = std::move(lambda);
  t.validate();
  return t;
}

void Trajectory::validate() const {
  if (nx_ < 1 || nu_ < 1) throw StructuralError("empty stage dimension");
  for (const auto& v : x_) {
    if (v.size() != nx_) throw StructuralError("state dimension mismatch");
  }
  for (const auto& v : u_) {
    if (v.size() != nu_) throw StructuralError("control dimension mismatch");
  }
  for (const auto& v : lambda_) {
    if (v.size() != nx_) throw StructuralError("dual dimension mismatch");
  }
}

std::size_t Trajectory::check_x(int k) const {
  if (k < 0 || k > horizon_) {
    throw StructuralError("state index " + std::to_string(k) + " out of range");
  }
  return static_cast<std::size_t>(k);
}

std::size_t Trajectory::check_u(int k) const {
  if (k < 0 || k >= horizon_) {
    throw StructuralError("control index " + std::to_string(k) +
                          " out of range");
  }
  return static_cast<std::size_t>(k);
}

std::size_t Trajectory::check_lambda(int k) const {
  if (k < -1 || k >= horizon_) {
    throw StructuralError("dual index " + std::to_string(k) + " out of range");
  }
  return static_cast<std::size_t>(k + 1);
}

bool Trajectory::same_shape(const Trajectory& other) const {
  return horizon_ == other.horizon_ && nx_ == other.nx_ && nu_ == other.nu_;
}

Trajectory& Trajectory::operator+=(const Trajectory& other) {
  if (!same_shape(other)) throw StructuralError("trajectory shape mismatch");
  for (std::size_t j = 0; j < x_.size(); ++j) x_[j] += other.x_[j];
  for (std::size_t j = 0; j < u_.size(); ++j) u_[j] += other.u_[j];
  for (std::size_t j = 0; j < lambda_.size(); ++j) lambda_[j] += other.lambda_[j];
  return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& other) {
  if (!same_shape(other)) throw StructuralError("trajectory shape mismatch");
  for (std::size_t j = 0; j < x_.size(); ++j) x_[j] -= other.x_[j];
  for (std::size_t j = 0; j < u_.size(); ++j) u_[j] -= other.u_[j];
  for (std::size_t j = 0; j < lambda_.size(); ++j) lambda_[j] -= other.lambda_[j];
  return *this;
}

Trajectory& Trajectory::operator*=(double c) {
  for (auto& v : x_) v *= c;
  for (auto& v : u_) v *= c;
  for (auto& v : lambda_) v *= c;
  return *this;
}

Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
Trajectory operator*(double c, Trajectory a) { return a *= c; }

double norm_w(const Trajectory& t) {
  t.validate();
  double best = 0.0;
  const int N = t.horizon();
  for (int k = 0; k <= N; ++k) best = std::max(best, t.x(k).norm());
  for (int k = 0; k < N; ++k) best = std::max(best, t.u(k).norm());
  for (int k = -1; k < N; ++k) best = std::max(best, t.lambda(k).norm());
  return best;
}

Trajectory slice(const Trajectory& t, int first, int last) {
  if (first < 0 || last > t.horizon() || last <= first) {
    throw StructuralError("slice [" + std::to_string(first) + ", " +
                          std::to_string(last) + "] outside the horizon");
  }
  Trajectory s(last - first, t.nx(), t.nu());
  for (int k = first; k <= last; ++k) s.x(k - first) = t.x(k);
  for (int k = first; k < last; ++k) s.u(k - first) = t.u(k);
  for (int k = first - 1; k < last; ++k) s.lambda(k - first) = t.lambda(k);
  return s;
}

StageSlice restrict_to_owned(const SubTrajectory& sub, const Partition& part) {
  const int i = sub.index;
  const int T = part.num_subdomains();
  if (i < 0 || i >= T) throw StructuralError("subdomain index out of range");
  if (sub.first != part.n1(i) || sub.last != part.n2(i) ||
      sub.local.horizon() != sub.last - sub.first) {
    throw StructuralError("subtrajectory range does not match the partition");
  }
  StageSlice out;
  out.begin = part.m(i);
  out.end = part.m(i + 1);
  const Trajectory& w = sub.local;
  const int off = sub.first;
  for (int k = out.begin; k < out.end; ++k) {
    out.x.push_back(w.x(k - off));
    out.u.push_back(w.u(k - off));
    out.lambda.push_back(w.lambda(k - off));
  }
  if (i == 0) out.initial_dual = w.lambda(-1);
  if (i == T - 1) out.terminal_state = w.x(w.horizon());
  return out;
}

Trajectory concatenate(const std::vector<StageSlice>& slices, int horizon,
                       int nx, int nu) {
  Trajectory t(horizon, nx, nu);
  std::vector<int> hits(horizon, 0);
  int initial_hits = 0;
  int terminal_hits = 0;
  for (const auto& s : slices) {
    if (s.begin < 0 || s.end > horizon || s.begin >= s.end ||
        static_cast<int>(s.x.size()) != s.end - s.begin ||
        s.u.size() != s.x.size() || s.lambda.size() != s.x.size()) {
      throw StructuralError("malformed stage slice");
    }
    for (int k = s.begin; k < s.end; ++k) {
      ++hits[k];
      t.x(k) = s.x[k - s.begin];
      t.u(k) = s.u[k - s.begin];
      t.lambda(k) = s.lambda[k - s.begin];
    }
    if (s.initial_dual) {
      ++initial_hits;
      t.lambda(-1) = *s.initial_dual;
    }
    if (s.terminal_state) {
      ++terminal_hits;
      t.x(horizon) = *s.terminal_state;
    }
  }
  for (int k = 0; k < horizon; ++k) {
    if (hits[k] != 1) {
      throw StructuralError("stage " + std::to_string(k) + " covered " +
                            std::to_string(hits[k]) + " times");
    }
  }
  if (initial_hits != 1 || terminal_hits != 1) {
    throw StructuralError("boundary blocks must be covered exactly once");
  }
  t.validate();
  return t;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const int nx = t.nx();
  const int nu = t.nu();
  os << "stage";
  for (int j = 0; j < nx; ++j) os << ",x_" << j;
  for (int j = 0; j < nu; ++j) os << ",u_" << j;
  for (int j = 0; j < nx; ++j) os << ",lambda_" << j;
  os << '\n';
  os << std::setprecision(17);
  const int N = t.horizon();
  // Row k carries x_k, u_k and lambda_k; a leading row -1 holds lambda_{-1}.
  os << -1;
  for (int j = 0; j < nx + nu; ++j) os << ',';
  for (int j = 0; j < nx; ++j) os << ',' << t.lambda(-1)(j);
  os << '\n';
  for (int k = 0; k <= N; ++k) {
    os << k;
    for (int j = 0; j < nx; ++j) os << ',' << t.x(k)(j);
    for (int j = 0; j < nu; ++j) {
      os << ',';
      if (k < N) os << t.u(k)(j);
    }
    for (int j = 0; j < nx; ++j) {
      os << ',';
      if (k < N) os << t.lambda(k)(j);
    }
    os << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_trajectory_csv(os, t);
}

}  // namespace schwarz_ocp
