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

#ifndef SCHWARZ_OCP_SENSITIVITY_HPP
#define SCHWARZ_OCP_SENSITIVITY_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "schwarz_ocp/lq.hpp"
#include "schwarz_ocp/ocp.hpp"

namespace schwarz_ocp {

// Perturbation direction l_{-1:N}: initial has length nx, the stage and
// terminal entries have length data_dim (empty entries mean zero).
struct SensitivityDirection {
  Vector initial;
  std::vector<Vector> stage;
  Vector terminal;
};

// LQ problem whose primal-dual solution is the directional derivative of the
// solution of p at `at` along l. Uses H_k = (1/2) Hessian of the Lagrangian
// and D_k = (1/2) cross Hessian in data, so the duals are derivatives of the
// multipliers without extra scaling.
LqProblem build_sensitivity_lqp(const NlpOcp& p, const Trajectory& at,
                                const SensitivityDirection& l,
                                double kkt_tolerance = 1e-8);

// Shift of x0 and of the terminal-stage data.
struct BoundaryPerturbation {
  Vector initial_shift;   // empty: unperturbed
  Vector terminal_shift;  // empty: unperturbed
  std::string boundary() const;
  double magnitude() const;
};

struct EdsReport {
  // d_k for k = -1..N at index k + 1.
  std::vector<double> deviation;
  std::optional<double> rho_hat;
  std::optional<double> upsilon_hat;
  std::string boundary;
  double magnitude = 0.0;
  int fit_points = 0;
};

struct EdsOptions {
  int fit_skip = 5;          // stages ignored next to each perturbed boundary
  double noise_floor = 1e-12;
  int workers = 0;
};

using ProblemFactory =
    std::function<std::unique_ptr<NlpOcp>(const BoundaryPerturbation&)>;
using FullSolver =
    std::function<Trajectory(const NlpOcp&, const Trajectory& warm)>;

// d_k = max block l2 norm of the difference at stage k; stage -1 holds
// lambda_{-1} only and stage N holds x_N only.
std::vector<double> stage_deviation(const Trajectory& a, const Trajectory& b);

// Log-linear fit of d_k against the distance to the perturbed boundary.
void fit_decay(EdsReport& report, bool initial, bool terminal,
               const EdsOptions& opts);

std::vector<EdsReport> eds_probe(const ProblemFactory& make_problem,
                                 const FullSolver& solve,
                                 const Trajectory& reference,
                                 const std::vector<BoundaryPerturbation>& perts,
                                 const EdsOptions& opts = {});

// Seeded Gaussian perturbations of x0 and/or the terminal data, each
// scaled by magnitude.
std::vector<BoundaryPerturbation> gaussian_perturbations(
    int count, double magnitude, int nx, int nd, bool initial, bool terminal,
    std::uint64_t seed);

void write_eds_csv(std::ostream& os, const EdsReport& report);
void write_eds_summary_csv(std::ostream& os,
                           const std::vector<EdsReport>& reports);

}  // namespace schwarz_ocp

#endif  // SCHWARZ_OCP_SENSITIVITY_HPP
