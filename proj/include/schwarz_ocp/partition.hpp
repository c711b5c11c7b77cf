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

#ifndef SCHWARZ_OCP_PARTITION_HPP
#define SCHWARZ_OCP_PARTITION_HPP

#include <iosfwd>
#include <variant>
#include <vector>

namespace schwarz_ocp {

// Overlap in stages per side.
struct AbsoluteOverlap {
  int tau = 0;
};

// Each subdomain of length len grows by ceil(tau_rel * len / 2) per side.
struct RelativeOverlap {
  double tau_rel = 0.0;
};

using Overlap = std::variant<AbsoluteOverlap, RelativeOverlap>;

// Breakpoints 0 = m_0 < ... < m_T = N and expanded subdomains
// [n1_i, n2_i] with n1_i = max(m_i - tau_i, 0), n2_i = min(m_{i+1} + tau_i, N).
class Partition {
 public:
  Partition(int horizon, std::vector<int> breakpoints, std::vector<int> tau);

  int horizon() const { return horizon_; }
  int num_subdomains() const { return static_cast<int>(tau_.size()); }
  int m(int i) const { return breakpoints_.at(i); }
  int tau(int i) const { return tau_.at(i); }
  int n1(int i) const;
  int n2(int i) const;
  const std::vector<int>& breakpoints() const { return breakpoints_; }
  int min_overlap() const;

 private:
  int horizon_;
  std::vector<int> breakpoints_;
  std::vector<int> tau_;
};

// Near-equal intervals; leftover stages go to the leading intervals.
Partition make_partition(int horizon, int num_subdomains, Overlap overlap);

// Explicit breakpoints with a uniform absolute overlap.
Partition make_partition(int horizon, std::vector<int> breakpoints, int tau);

// Rows i,m_i,m_{i+1},n1_i,n2_i.
void write_partition_csv(std::ostream& os, const Partition& part);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_PARTITION_HPP
