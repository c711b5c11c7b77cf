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

#include "schwarz_ocp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "schwarz_ocp/errors.hpp"

namespace schwarz_ocp {

Partition::Partition(int horizon, std::vector<int> breakpoints,
                     std::vector<int> tau)
    : horizon_(horizon),
      breakpoints_(std::move(breakpoints)),
      tau_(std::move(tau)) {
  if (breakpoints_.size() < 2 || tau_.size() + 1 != breakpoints_.size()) {
    throw InvalidPartition("need T+1 breakpoints and T overlaps");
  }
  if (breakpoints_.front() != 0 || breakpoints_.back() != horizon_) {
    throw InvalidPartition("breakpoints must start at 0 and end at N");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (breakpoints_[i] >= breakpoints_[i + 1]) {
      throw InvalidPartition("breakpoints must be strictly increasing");
    }
  }
  for (int t : tau_) {
    if (t < 0) throw InvalidPartition("overlap must be nonnegative");
  }
}

int Partition::n1(int i) const { return std::max(m(i) - tau(i), 0); }

int Partition::n2(int i) const { return std::min(m(i + 1) + tau(i), horizon_); }

int Partition::min_overlap() const {
  return *std::min_element(tau_.begin(), tau_.end());
}

Partition make_partition(int horizon, int num_subdomains, Overlap overlap) {
  if (num_subdomains < 1) throw InvalidPartition("T must be at least 1");
  if (num_subdomains > horizon) {
    throw InvalidPartition("T = " + std::to_string(num_subdomains) +
                           " exceeds N = " + std::to_string(horizon));
  }
  const int base = horizon / num_subdomains;
  const int extra = horizon % num_subdomains;
  std::vector<int> m{0};
  for (int i = 0; i < num_subdomains; ++i) {
    m.push_back(m.back() + base + (i < extra ? 1 : 0));
  }
  std::vector<int> tau(num_subdomains, 0);
  if (const auto* a = std::get_if<AbsoluteOverlap>(&overlap)) {
    std::fill(tau.begin(), tau.end(), a->tau);
  } else {
    const double rel = std::get<RelativeOverlap>(overlap).tau_rel;
    if (!(rel >= 0.0)) throw InvalidPartition("relative overlap must be >= 0");
    for (int i = 0; i < num_subdomains; ++i) {
      const double len = m[i + 1] - m[i];
      // Guard against 0.3 * 10 / 2 = 1.5000000000000002 style round-up.
      tau[i] = static_cast<int>(std::ceil(rel * len / 2.0 - 1e-9));
    }
  }
  return Partition(horizon, std::move(m), std::move(tau));
}

Partition make_partition(int horizon, std::vector<int> breakpoints, int tau) {
  std::vector<int> taus(breakpoints.size() > 0 ? breakpoints.size() - 1 : 0,
                        tau);
  return Partition(horizon, std::move(breakpoints), std::move(taus));
}

void write_partition_csv(std::ostream& os, const Partition& part) {
  os << "i,m_i,m_{i+1},n1_i,n2_i\n";
  for (int i = 0; i < part.num_subdomains(); ++i) {
    os << i << ',' << part.m(i) << ',' << part.m(i + 1) << ',' << part.n1(i)
       << ',' << part.n2(i) << '\n';
  }
}

}  // namespace schwarz_ocp
