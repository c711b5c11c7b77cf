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

#ifndef SCHWARZ_OCP_TOOLS_CLI_HPP
#define SCHWARZ_OCP_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace schwarz_ocp::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

// Parsed command line. Unset optionals fall back to per-problem defaults.
struct RunSpec {
  std::string command;
  std::string problem = "quadrotor";  // quadrotor | thinplate | lqfile:<path>
  std::optional<int> N;
  std::optional<int> T;
  std::optional<int> mesh;
  std::optional<int> tau;
  std::optional<double> tau_rel;
  double mu = 1.0;
  std::vector<double> mu_list = {0.1, 1.0, 10.0};
  double tol_pr = 1e-6;
  double tol_du = 1e-6;
  double tol = 1e-8;  // centralized and inner SQP
  std::optional<int> max_outer;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out = ".";
  std::vector<double> sweep;
  std::vector<double> admm_rho = {0.1, 1.0, 10.0};
  double magnitude = 0.1;
  int perturbations = 30;
  std::string boundary = "both";
};

// args excludes the program name. Diagnostics go to err; logging follows
// SCHWARZ_OCP_LOG (trace, debug, info, warn, error, off; default warn).
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace schwarz_ocp::cli

#endif  // SCHWARZ_OCP_TOOLS_CLI_HPP
