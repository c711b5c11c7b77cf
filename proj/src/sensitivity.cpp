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

#include "schwarz_ocp/sensitivity.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/parallel.hpp"

namespace schwarz_ocp {

LqProblem build_sensitivity_lqp(const NlpOcp& p, const Trajectory& at,
                                const SensitivityDirection& l,
                                double kkt_tolerance) {
  check_dimensions(p, at);
  const KktResidual res = kkt_residual(p, at);
  if (!(res.max() <= kkt_tolerance)) {
    throw NotAtKkt("base point is not a KKT point (residual " +
                   std::to_string(res.max()) + ")");
  }
  const int N = p.horizon();
  const int nx = p.state_dim();
  const int nu = p.control_dim();
  const int nd = p.data_dim();
  auto data_vec = [nd](const Vector& v, const char* what) {
    if (v.size() == 0) return Vector(Vector::Zero(nd));
    if (v.size() != nd) {
      throw StructuralError(std::string("direction block ") + what +
                            " must have length data_dim");
    }
    return v;
  };
  if (!l.stage.empty() && static_cast<int>(l.stage.size()) != N) {
    throw StructuralError("direction must list one stage block per stage");
  }

  LqProblem q(N, nx, nu, nd);
  for (int k = 0; k < N; ++k) {
    const Vector& x = at.x(k);
    const Vector& u = at.u(k);
    LqStage& st = q.stages[k];
    Matrix H = p.stage_cost_hessian(k, x, u) - p.dynamics_hessian(k, x, u, at.lambda(k));
    H = (0.25 * (H + H.transpose())).eval();
    st.Q = H.topLeftCorner(nx, nx);
    st.S = H.bottomLeftCorner(nu, nx);
    st.R = H.bottomRightCorner(nu, nu);
    p.dynamics_jacobian(k, x, u, st.A, st.B);
    if (nd > 0) {
      const Matrix D = 0.5 * p.stage_data_hessian(k, x, u, at.lambda(k));
      st.D1 = D.leftCols(nx);
      st.D2 = D.rightCols(nu);
      st.C = p.dynamics_data_jacobian(k, x, u);
      st.l = l.stage.empty() ? Vector(Vector::Zero(nd)) : data_vec(l.stage[k], "l_k");
    }
  }
  const Matrix HN = p.terminal_hessian(at.x(N));
  q.QN = 0.25 * (HN + HN.transpose());
  if (nd > 0) {
    q.DN = 0.5 * p.terminal_data_hessian(at.x(N));
    q.lN = data_vec(l.terminal, "l_N");
  }
  if (l.initial.size() == 0) {
    q.x0.setZero();
  } else if (l.initial.size() == nx) {
    q.x0 = l.initial;
  } else {
    throw StructuralError("direction block l_{-1} must have length nx");
  }
  q.validate();
  return q;
}

std::string BoundaryPerturbation::boundary() const {
  const bool a = initial_shift.size() > 0;
  const bool b = terminal_shift.size() > 0;
  if (a && b) return "both";
  if (a) return "initial";
  if (b) return "terminal";
  return "none";
}

double BoundaryPerturbation::magnitude() const {
  double m = 0.0;
  if (initial_shift.size() > 0) m = std::max(m, initial_shift.norm());
  if (terminal_shift.size() > 0) m = std::max(m, terminal_shift.norm());
  return m;
}

std::vector<double> stage_deviation(const Trajectory& a, const Trajectory& b) {
  if (!a.same_shape(b)) throw StructuralError("trajectory shape mismatch");
  const int N = a.horizon();
  std::vector<double> d(N + 2, 0.0);
  d[0] = (a.lambda(-1) - b.lambda(-1)).norm();
  for (int k = 0; k < N; ++k) {
    d[k + 1] = std::max({(a.x(k) - b.x(k)).norm(), (a.u(k) - b.u(k)).norm(),
                         (a.lambda(k) - b.lambda(k)).norm()});
  }
  d[N + 1] = (a.x(N) - b.x(N)).norm();
  return d;
}

void fit_decay(EdsReport& report, bool initial, bool terminal,
               const EdsOptions& opts) {
  report.rho_hat.reset();
  report.upsilon_hat.reset();
  report.fit_points = 0;
  const int N = static_cast<int>(report.deviation.size()) - 2;
  if (N < 1 || (!initial && !terminal)) return;
  std::vector<double> dist, logd;
  auto collect = [&](int from, int to, int step, auto distance) {
    for (int k = from; step > 0 ? k <= to : k >= to; k += step) {
      const double d = report.deviation[k + 1];
      if (!(d > opts.noise_floor)) break;
      dist.push_back(distance(k));
      logd.push_back(std::log(d));
    }
  };
  const int half = N / 2;
  if (initial) collect(opts.fit_skip, half, 1, [](int k) { return double(k); });
  if (terminal) {
    collect(N - opts.fit_skip, N - half, -1, [N](int k) { return double(N - k); });
  }
  report.fit_points = static_cast<int>(dist.size());
  if (dist.size() < 5) return;
  const double n = static_cast<double>(dist.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    sx += dist[j];
    sy += logd[j];
    sxx += dist[j] * dist[j];
    sxy += dist[j] * logd[j];
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  report.rho_hat = std::exp(slope);
  report.upsilon_hat = std::exp(intercept);
}

std::vector<EdsReport> eds_probe(const ProblemFactory& make_problem,
                                 const FullSolver& solve,
                                 const Trajectory& reference,
                                 const std::vector<BoundaryPerturbation>& perts,
                                 const EdsOptions& opts) {
  std::vector<EdsReport> reports(perts.size());
  parallel_for(static_cast<int>(perts.size()), opts.workers, [&](int j) {
    const BoundaryPerturbation& pert = perts[j];
    EdsReport& rep = reports[j];
    rep.boundary = pert.boundary();
    rep.magnitude = pert.magnitude();
    try {
      const std::unique_ptr<NlpOcp> problem = make_problem(pert);
      Trajectory warm = reference;
      warm.x(0) = problem->initial_state();
      const Trajectory sol = solve(*problem, warm);
      rep.deviation = stage_deviation(sol, reference);
    } catch (const std::exception& e) {
      throw Error("perturbation " + std::to_string(j) + " (" + rep.boundary +
                  ", magnitude " + std::to_string(rep.magnitude) +
                  ") failed: " + e.what());
    }
    fit_decay(rep, pert.initial_shift.size() > 0, pert.terminal_shift.size() > 0,
              opts);
  });
  return reports;
}

std::vector<BoundaryPerturbation> gaussian_perturbations(
    int count, double magnitude, int nx, int nd, bool initial, bool terminal,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<BoundaryPerturbation> out(count);
  for (auto& p : out) {
    if (initial) {
      p.initial_shift = Vector(nx);
      for (int i = 0; i < nx; ++i) p.initial_shift(i) = magnitude * normal(rng);
    }
    if (terminal) {
      p.terminal_shift = Vector(nd);
      for (int i = 0; i < nd; ++i) p.terminal_shift(i) = magnitude * normal(rng);
    }
  }
  return out;
}

void write_eds_csv(std::ostream& os, const EdsReport& report) {
  os << "stage,deviation\n";
  os.precision(17);
  for (std::size_t j = 0; j < report.deviation.size(); ++j) {
    os << static_cast<long>(j) - 1 << ',' << report.deviation[j] << '\n';
  }
}

void write_eds_summary_csv(std::ostream& os,
                           const std::vector<EdsReport>& reports) {
  os << "rho_hat,upsilon_hat,boundary,magnitude\n";
  os.precision(17);
  for (const auto& r : reports) {
    if (r.rho_hat) os << *r.rho_hat;
    os << ',';
    if (r.upsilon_hat) os << *r.upsilon_hat;
    os << ',' << r.boundary << ',' << r.magnitude << '\n';
  }
}

}  // namespace schwarz_ocp
