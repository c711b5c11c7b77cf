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

#ifndef SCHWARZ_OCP_ADMM_HPP
#define SCHWARZ_OCP_ADMM_HPP

#include <optional>
#include <utility>

#include "schwarz_ocp/schwarz.hpp"

namespace schwarz_ocp {

// Consensus ADMM over the non-overlapping intervals [m_i, m_{i+1}]. Only the
// seam states x_{m_i} are duplicated: subdomain i-1 ends at a local copy and
// subdomain i starts from a free local copy; both are pulled to the consensus
// value z by rho/2 |x - z + y|^2 with scaled duals y.
struct AdmmConfig {
  double rho = 1.0;
  int num_subdomains = 1;
  std::optional<Partition> partition;  // overlap is ignored
  int max_iterations = 500;
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  SqpOptions inner;
  int workers = 0;
  std::optional<Trajectory> reference;
};

// Record columns eps_pr / eps_du hold the seam primal residual
// max |x_copy - z| and the dual residual rho |z - z_prev|.
std::pair<Trajectory, ConvergenceRecord> admm_solve(const NlpOcp& p,
                                                    const AdmmConfig& cfg,
                                                    const Trajectory& start);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_ADMM_HPP
