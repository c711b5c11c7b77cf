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

#ifndef SCHWARZ_OCP_TRAJECTORY_HPP
#define SCHWARZ_OCP_TRAJECTORY_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace schwarz_ocp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Primal-dual iterate w = (x_0..x_N, u_0..u_{N-1}, lambda_{-1}..lambda_{N-1}).
// Duals are addressed by their stage index, so lambda(-1) is the multiplier
// of the initial condition.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(int horizon, int nx, int nu);

  // Builds from explicit blocks; lambda[j] holds lambda_{j-1}.
  static Trajectory from_blocks(std::vector<Vector> x, std::vector<Vector> u,
                                std::vector<Vector> lambda);

  int horizon() const { return horizon_; }
  int nx() const { return nx_; }
  int nu() const { return nu_; }

  Vector& x(int k) { return x_[check_x(k)]; }
  const Vector& x(int k) const { return x_[check_x(k)]; }
  Vector& u(int k) { return u_[check_u(k)]; }
  const Vector& u(int k) const { return u_[check_u(k)]; }
  Vector& lambda(int k) { return lambda_[check_lambda(k)]; }
  const Vector& lambda(int k) const { return lambda_[check_lambda(k)]; }

  Trajectory& operator+=(const Trajectory& other);
  Trajectory& operator-=(const Trajectory& other);
  Trajectory& operator*=(double c);

  bool same_shape(const Trajectory& other) const;
  void validate() const;

 private:
  std::size_t check_x(int k) const;
  std::size_t check_u(int k) const;
  std::size_t check_lambda(int k) const;

  int horizon_ = 0;
  int nx_ = 0;
  int nu_ = 0;
  std::vector<Vector> x_;
  std::vector<Vector> u_;
  std::vector<Vector> lambda_;
};

Trajectory operator+(Trajectory a, const Trajectory& b);
Trajectory operator-(Trajectory a, const Trajectory& b);
Trajectory operator*(double c, Trajectory a);

// Stagewise norm: max over all x_k, u_k, lambda_k blocks of their l2 norms.
double norm_w(const Trajectory& t);

// Copy of stages [first, last] re-indexed from zero. The local lambda(-1)
// is lambda_{first-1} of the source.
Trajectory slice(const Trajectory& t, int first, int last);

// Subproblem solution over [first, last] in local stage indexing.
struct SubTrajectory {
  int index = 0;
  int first = 0;
  int last = 0;
  Trajectory local;
};

// Stage triple (x_k, u_k, lambda_k).
struct StageBlock {
  Vector x;
  Vector u;
  Vector lambda;
};

// Parameters of subproblem i: the state pinned at the left end and, for all
// but the last subdomain, the primal-dual block at the right end.
struct BoundaryData {
  int index = 0;
  Vector x_init;
  std::optional<StageBlock> w_term;
};

// Stage-indexed piece of a trajectory that owns stages [begin, end) plus
// lambda_{-1} when begin == 0 and x_N when end == N.
struct StageSlice {
  int begin = 0;
  int end = 0;
  std::vector<Vector> x;
  std::vector<Vector> u;
  std::vector<Vector> lambda;
  std::optional<Vector> initial_dual;
  std::optional<Vector> terminal_state;
};

class Partition;

StageSlice restrict_to_owned(const SubTrajectory& sub, const Partition& part);

// Reassembles a full trajectory; every stage must be covered exactly once.
Trajectory concatenate(const std::vector<StageSlice>& slices, int horizon,
                       int nx, int nu);

void write_trajectory_csv(std::ostream& os, const Trajectory& t);
void write_trajectory_csv(const std::string& path, const Trajectory& t);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_TRAJECTORY_HPP
