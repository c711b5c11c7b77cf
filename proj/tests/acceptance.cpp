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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "schwarz_ocp/admm.hpp"
#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/lq.hpp"
#include "schwarz_ocp/nlp.hpp"
#include "schwarz_ocp/problems.hpp"
#include "schwarz_ocp/schwarz.hpp"
#include "schwarz_ocp/sensitivity.hpp"
#include "test_support.hpp"

namespace schwarz_ocp {
namespace {

using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Trajectory pinned_zero(const NlpOcp& p) {
  Trajectory t = p.zero_trajectory();
  t.x(0) = p.initial_state();
  return t;
}

// Reduced Hessian positive definite, either from SPD blocks or by shifting
// an indefinite instance.
LqProblem random_sosc_lq(Rng& rng, int N, int nx, int nu) {
  testing::LqOptions o;
  o.indefinite = uniform_int(rng, 0, 1) == 1;
  if (o.indefinite) o.target_min_eig = uniform(rng, 0.05, 1.0);
  return testing::random_lq(rng, N, nx, nu, o);
}

// ---------------------------------------------------------------------------

Outcome riccati_vs_dense() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int N = uniform_int(rng, 1, 50);
    const int nx = uniform_int(rng, 1, 6);
    const int nu = uniform_int(rng, 1, 3);
    testing::LqOptions o;
    o.indefinite = trial % 2 == 1;
    if (o.indefinite) o.target_min_eig = uniform(rng, 0.05, 1.0);
    const LqProblem p = testing::random_lq(rng, N, nx, nu, o);
    const Trajectory a = lq_solve(p);
    const Trajectory b = dense_kkt_solve(p);
    worst = std::max(worst, norm_w(a - b) / (1.0 + norm_w(a)));
  }
  return {worst <= 1e-8, "max relative gap " + fmt("%.2e", worst)};
}

Outcome convexification_identities() {
  Rng rng(202);
  double primal = 0.0, dual = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int N = uniform_int(rng, 2, 30);
    const int nx = uniform_int(rng, 1, 5);
    const int nu = uniform_int(rng, 1, 3);
    testing::LqOptions o;
    o.indefinite = true;
    o.target_min_eig = uniform(rng, 0.05, 1.0);
    const LqProblem p = testing::random_lq(rng, N, nx, nu, o);
    const double gamma = reduced_hessian_min_eig(p);
    if (!(gamma > 0.0)) return {false, "instance without a positive reduced Hessian"};
    const ConvexifiedLq c = convexify(p, 0.5 * gamma);
    const Trajectory orig = lq_solve(p);
    const Trajectory conv = lq_solve(c.problem);
    for (int k = 0; k <= N; ++k) primal = std::max(primal, (orig.x(k) - conv.x(k)).norm());
    for (int k = 0; k < N; ++k) primal = std::max(primal, (orig.u(k) - conv.u(k)).norm());
    for (int k = -1; k < N; ++k) {
      const Vector z = conv.lambda(k) - 2.0 * c.q_bar[k + 1] * conv.x(k + 1);
      dual = std::max(dual, (orig.lambda(k) - z).norm());
    }
  }
  return {primal <= 1e-8 && dual <= 1e-7,
          "primal " + fmt("%.2e", primal) + ", dual " + fmt("%.2e", dual)};
}

Outcome closed_form_dual_sum() {
  Rng rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    testing::LqOptions o;
    o.nd = uniform_int(rng, 1, 4);
    o.linear_terms = false;
    const int N = uniform_int(rng, 2, 40);
    const int nx = uniform_int(rng, 1, 6);
    const int nu = uniform_int(rng, 1, 3);
    const LqProblem p = testing::random_lq(rng, N, nx, nu, o);
    const RiccatiFactors f = riccati_factor(p);
    const Trajectory sol = lq_solve(p, f);
    const std::vector<Vector> z = closed_form_duals(p, f, sol);
    for (int k = -1; k < N; ++k) {
      worst = std::max(worst, (z[k + 1] - sol.lambda(k)).norm());
    }
  }
  return {worst <= 1e-8, "max dual gap " + fmt("%.2e", worst)};
}

Outcome sensitivity_vs_differences() {
  const double hs[] = {1e-4, 1e-5, 1e-6};
  // LQ base: the solution is affine in the perturbation, so the difference
  // quotient is exact up to round-off and must respect err(h) <= h.
  Rng rng(404);
  testing::LqOptions o;
  o.nd = 3;
  const LqProblem lq = testing::random_lq(rng, 30, 4, 2, o);
  const LqOcp lq_ocp(lq);
  const Trajectory lq_ref = lq_solve(lq);
  SensitivityDirection l;
  l.initial = testing::random_vector(rng, 4);
  for (int k = 0; k < 30; ++k) l.stage.push_back(testing::random_vector(rng, 4));
  const Trajectory lq_sens = lq_solve(build_sensitivity_lqp(lq_ocp, lq_ref, l));
  bool lq_ok = true;
  std::string lq_errs;
  for (double h : hs) {
    LqProblem moved = lq;
    moved.x0 += h * l.initial;
    for (int k = 0; k < 30; ++k) moved.stages[k].v += h * l.stage[k];
    Trajectory fd = lq_solve(moved) - lq_ref;
    fd *= 1.0 / h;
    const double err = norm_w(fd - lq_sens);
    lq_ok = lq_ok && err <= h;
    lq_errs += fmt(" %.1e", err);
  }

  // Nonlinear base: forward differences carry an O(h) truncation term, so
  // the error has to shrink with h.
  QuadrotorParams qp;
  qp.horizon = 80;
  const Quadrotor quad(qp);
  SqpOptions tight;
  tight.tolerance = 1e-11;
  const Trajectory ref = sqp_solve(quad, quad.zero_trajectory(), tight).first;
  SensitivityDirection lx;
  lx.initial = testing::random_vector(rng, 9);
  const Trajectory sens = lq_solve(build_sensitivity_lqp(quad, ref, lx));
  std::vector<double> errs;
  std::string nl_errs;
  for (double h : hs) {
    QuadrotorParams moved = qp;
    moved.x0 = h * lx.initial;
    const Quadrotor qm(moved);
    Trajectory warm = ref;
    warm.x(0) = qm.initial_state();
    Trajectory fd = sqp_solve(qm, warm, tight).first - ref;
    fd *= 1.0 / h;
    errs.push_back(norm_w(fd - sens));
    nl_errs += fmt(" %.1e", errs.back());
  }
  const bool nl_ok = errs[1] < errs[0] && errs[2] < errs[1];
  return {lq_ok && nl_ok, "LQ err(h)" + lq_errs + "; quadrotor err(h)" + nl_errs};
}

Outcome overlap_trend() {
  QuadrotorParams qp;
  qp.horizon = 2400;
  const Quadrotor quad(qp);
  std::vector<int> iters;
  std::string detail;
  for (double tau_rel : {0.3, 0.5, 1.0}) {
    SchwarzConfig cfg;
    cfg.num_subdomains = 3;
    cfg.mu = 1.0;
    cfg.overlap = RelativeOverlap{tau_rel};
    cfg.tol_primal = cfg.tol_dual = 1e-6;
    cfg.max_outer = 200;
    try {
      iters.push_back(schwarz_solve(quad, cfg, quad.zero_trajectory()).second.iterations());
    } catch (const Error& e) {
      return {false, fmt("tau_rel %.1f: ", tau_rel) + e.what()};
    }
    detail += fmt(" tau_rel=%.1f:", tau_rel) + std::to_string(iters.back());
  }
  return {iters[0] > iters[1] && iters[1] >= iters[2], "outer iterations" + detail};
}

double fitted_contraction(const ConvergenceRecord& rec, double floor) {
  std::vector<double> xs, ys;
  for (const auto& r : rec.rows) {
    if (r.err_vs_ref > floor) {
      xs.push_back(r.iter);
      ys.push_back(std::log(r.err_vs_ref));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::exp(sxy / sxx);
}

Outcome contraction_vs_overlap() {
  // Time-invariant double integrator with seeded linear terms.
  Rng rng(606);
  LqProblem lq(200, 2, 1);
  for (auto& st : lq.stages) {
    st.A << 1.0, 0.1, 0.0, 1.0;
    st.B << 0.0, 0.1;
    st.Q = Matrix::Identity(2, 2);
    st.R(0, 0) = 0.1;
    st.r = testing::random_vector(rng, 2);
  }
  lq.QN = Matrix::Identity(2, 2);
  lq.x0 << 1.0, 0.0;
  const LqOcp p(lq);
  const Trajectory ref = lq_solve(lq);

  const std::vector<int> taus = {2, 4, 6, 8};
  std::vector<double> alpha;
  for (int tau : taus) {
    SchwarzConfig cfg;
    cfg.num_subdomains = 4;
    cfg.overlap = AbsoluteOverlap{tau};
    cfg.tol_primal = cfg.tol_dual = 1e-13;
    cfg.max_outer = 60;
    cfg.reference = ref;
    ConvergenceRecord rec;
    try {
      rec = schwarz_solve(p, cfg, pinned_zero(p)).second;
    } catch (const MaxOuterIterations& e) {
      rec = e.record();
    }
    alpha.push_back(fitted_contraction(rec, 1e-7));
  }
  // -log alpha against tau: ordinary least squares and R^2.
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    mx += taus[i];
    my += -std::log(alpha[i]);
  }
  mx /= taus.size();
  my /= taus.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double dx = taus[i] - mx, dy = -std::log(alpha[i]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r2 = sxy * sxy / (sxx * syy);
  const bool halving = alpha[1] < alpha[0] && alpha[3] < alpha[1];
  std::string detail = "alpha(tau)";
  for (std::size_t i = 0; i < taus.size(); ++i) {
    detail += " " + std::to_string(taus[i]) + ":" + fmt("%.3f", alpha[i]);
  }
  return {halving && r2 >= 0.9, detail + ", R^2 " + fmt("%.4f", r2)};
}

Outcome indefinite_global_convergence() {
  Rng rng(707);
  const int N = 100, nx = 3, nu = 2;
  LqProblem lq;
  double gamma = -1.0;
  // One stage gets an indefinite Q; resample until the reduced Hessian is
  // still positive definite.
  for (int attempt = 0; attempt < 100 && !(gamma > 0.0); ++attempt) {
    lq = testing::random_lq(rng, N, nx, nu);
    lq.stages[N / 2].Q = Eigen::Vector3d(-0.3, 1.0, 1.0).asDiagonal();
    lq.stages[N / 2].S.setZero();
    gamma = reduced_hessian_min_eig(lq);
  }
  if (!(gamma > 0.0)) return {false, "no SOSC instance found"};
  Eigen::SelfAdjointEigenSolver<Matrix> es(lq.stages[N / 2].Q);
  const Trajectory oracle = dense_kkt_solve(lq);
  const LqOcp p(lq);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Trajectory start = testing::random_trajectory(rng, N, nx, nu, 1.0);
    start *= 1000.0 * uniform(rng, 0.1, 1.0) / norm_w(start);
    start.x(0) = p.initial_state();
    SchwarzConfig cfg;
    cfg.num_subdomains = 4;
    cfg.overlap = AbsoluteOverlap{8};
    cfg.tol_primal = cfg.tol_dual = 1e-10;
    cfg.max_outer = 200;
    try {
      worst = std::max(worst, norm_w(schwarz_solve(p, cfg, start).first - oracle));
    } catch (const Error& e) {
      return {false, std::string("start ") + std::to_string(trial) + ": " + e.what()};
    }
  }
  return {worst <= 1e-6, "min eig Q " + fmt("%.2f", es.eigenvalues()(0)) +
                             ", reduced Hessian min eig " + fmt("%.3f", gamma) +
                             ", max error " + fmt("%.2e", worst)};
}

Outcome eds_coalescence() {
  QuadrotorParams qp;
  qp.horizon = 2400;
  const int N = qp.horizon;
  SqpOptions so;
  so.tolerance = 1e-10;
  const Quadrotor quad(qp);
  const Trajectory ref = sqp_solve(quad, quad.zero_trajectory(), so).first;
  const auto perts = gaussian_perturbations(30, 0.1, 9, 9, true, true, 808);
  EdsOptions eo;
  eo.noise_floor = 1e-9;
  const auto reports = eds_probe(
      [&](const BoundaryPerturbation& b) {
        QuadrotorParams m = qp;
        m.x0 = b.initial_shift;
        m.terminal_ref_offset = b.terminal_shift;
        return std::make_unique<Quadrotor>(m);
      },
      [&](const NlpOcp& q, const Trajectory& warm) {
        Trajectory s = warm;
        s.x(0) = q.initial_state();
        return sqp_solve(q, s, so).first;
      },
      ref, perts, eo);
  double worst_ratio = 0.0, worst_rho = 0.0;
  bool fitted = true;
  for (const auto& r : reports) {
    const double boundary = std::max({r.deviation[0], r.deviation[1], r.deviation[N + 1]});
    worst_ratio = std::max(worst_ratio, r.deviation[N / 2 + 1] / boundary);
    if (r.rho_hat) {
      worst_rho = std::max(worst_rho, *r.rho_hat);
    } else {
      fitted = false;
    }
  }
  return {fitted && worst_ratio <= 1e-3 && worst_rho < 1.0,
          "max mid/boundary " + fmt("%.2e", worst_ratio) + ", max rho_hat " +
              fmt("%.5f", worst_rho)};
}

Outcome fixed_point() {
  SqpOptions inner;
  inner.tolerance = 1e-8;
  std::string detail;
  bool ok = true;
  auto probe = [&](const NlpOcp& p, const std::string& name) {
    const Trajectory ref = sqp_solve(p, p.zero_trajectory(), inner).first;
    SchwarzConfig cfg;
    cfg.num_subdomains = 4;
    cfg.overlap = RelativeOverlap{0.5};
    cfg.inner = inner;
    cfg.max_outer = 1;
    cfg.tol_primal = cfg.tol_dual = 1e-6;
    ConvergenceRecord rec;
    try {
      rec = schwarz_solve(p, cfg, ref).second;
    } catch (const MaxOuterIterations& e) {
      rec = e.record();
    }
    const auto& r = rec.rows.front();
    ok = ok && r.eps_pr <= 10 * inner.tolerance && r.eps_du <= 10 * inner.tolerance;
    detail += name + " eps_pr " + fmt("%.1e", r.eps_pr) + " eps_du " + fmt("%.1e", r.eps_du) + "; ";
  };
  QuadrotorParams qp;
  qp.horizon = 2400;
  probe(Quadrotor(qp), "quadrotor");
  ThinPlateParams tp;
  tp.horizon = 864;
  probe(ThinPlate(tp), "thin plate");
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome admm_comparison() {
  // T = 20 at N = 24000 scaled to N = 2400 keeps 1200-stage subdomains.
  QuadrotorParams qp;
  qp.horizon = 2400;
  const int T = 2;
  const int budget = 50;
  const Quadrotor quad(qp);
  std::vector<double> sch, adm;
  for (double mu : {0.1, 1.0, 10.0}) {
    SchwarzConfig cfg;
    cfg.num_subdomains = T;
    cfg.mu = mu;
    cfg.overlap = RelativeOverlap{1.0};
    cfg.tol_primal = cfg.tol_dual = 1e-8;
    cfg.max_outer = budget;
    try {
      const auto [w, rec] = schwarz_solve(quad, cfg, quad.zero_trajectory());
      sch.push_back(rec.rows.back().kkt.max());
    } catch (const MaxOuterIterations& e) {
      sch.push_back(e.record().rows.back().kkt.max());
    } catch (const Error& e) {
      return {false, fmt("Schwarz mu %.1f: ", mu) + e.what()};
    }
  }
  for (double rho : {0.1, 1.0, 10.0}) {
    AdmmConfig cfg;
    cfg.num_subdomains = T;
    cfg.rho = rho;
    cfg.max_iterations = budget;
    cfg.tol_primal = cfg.tol_dual = 1e-12;
    try {
      const auto [w, rec] = admm_solve(quad, cfg, quad.zero_trajectory());
      adm.push_back(rec.rows.back().kkt.max());
    } catch (const MaxOuterIterations& e) {
      adm.push_back(e.record().rows.back().kkt.max());
    } catch (const Error& e) {
      return {false, fmt("ADMM rho %.1f: ", rho) + e.what()};
    }
  }
  const auto [smin, smax] = std::minmax_element(sch.begin(), sch.end());
  const auto [amin, amax] = std::minmax_element(adm.begin(), adm.end());
  const bool ok = *smax <= 1e-6 && *amin > *smax && *smax < 10.0 * *smin &&
                  *amax > 10.0 * *amin;
  return {ok, "Schwarz KKT [" + fmt("%.1e", *smin) + ", " + fmt("%.1e", *smax) +
                  "], ADMM KKT [" + fmt("%.1e", *amin) + ", " + fmt("%.1e", *amax) + "]"};
}

// ---------------------------------------------------------------------------

bool norm_axioms(Rng& rng) {
  const int N = uniform_int(rng, 1, 8), nx = uniform_int(rng, 1, 4), nu = uniform_int(rng, 1, 3);
  const Trajectory a = testing::random_trajectory(rng, N, nx, nu);
  const Trajectory b = testing::random_trajectory(rng, N, nx, nu);
  const double c = uniform(rng, -5.0, 5.0);
  const double na = norm_w(a), nb = norm_w(b);
  return na > 0.0 && norm_w(Trajectory(N, nx, nu)) == 0.0 &&
         std::abs(norm_w(c * a) - std::abs(c) * na) <= 1e-12 * (1.0 + na) &&
         norm_w(a + b) <= na + nb + 1e-12;
}

bool partition_identities(Rng& rng) {
  const int N = uniform_int(rng, 1, 400);
  const int T = uniform_int(rng, 1, std::min(N, 12));
  const Overlap ov = uniform_int(rng, 0, 1) == 0
                         ? Overlap(AbsoluteOverlap{uniform_int(rng, 1, 30)})
                         : Overlap(RelativeOverlap{uniform(rng, 0.05, 2.0)});
  const Partition part = make_partition(N, T, ov);
  if (part.m(0) != 0 || part.m(T) != N || part.num_subdomains() != T) return false;
  int shortest = N, longest = 0;
  for (int i = 0; i < T; ++i) {
    const int len = part.m(i + 1) - part.m(i);
    if (len < 1) return false;
    shortest = std::min(shortest, len);
    longest = std::max(longest, len);
    if (part.n1(i) != std::max(part.m(i) - part.tau(i), 0)) return false;
    if (part.n2(i) != std::min(part.m(i + 1) + part.tau(i), N)) return false;
    if (T > 1 && part.tau(i) < 1) return false;
  }
  return longest - shortest <= 1;
}

bool restriction_roundtrip(Rng& rng) {
  const int N = uniform_int(rng, 1, 60);
  const int T = uniform_int(rng, 1, std::min(N, 6));
  const Partition part = make_partition(N, T, AbsoluteOverlap{uniform_int(rng, 1, 10)});
  const int nx = uniform_int(rng, 1, 3), nu = uniform_int(rng, 1, 2);
  const Trajectory full = testing::random_trajectory(rng, N, nx, nu);
  std::vector<StageSlice> slices;
  for (int i = 0; i < T; ++i) {
    const SubTrajectory sub{i, part.n1(i), part.n2(i), slice(full, part.n1(i), part.n2(i))};
    slices.push_back(restrict_to_owned(sub, part));
  }
  std::shuffle(slices.begin(), slices.end(), rng);
  return norm_w(concatenate(slices, N, nx, nu) - full) == 0.0;
}

bool convexified_pd(Rng& rng) {
  const int N = uniform_int(rng, 1, 8), nx = uniform_int(rng, 1, 3), nu = uniform_int(rng, 1, 2);
  testing::LqOptions o;
  o.indefinite = true;
  o.target_min_eig = uniform(rng, 0.05, 1.0);
  const LqProblem p = testing::random_lq(rng, N, nx, nu, o);
  const ConvexifiedLq c = convexify(p, 0.5 * reduced_hessian_min_eig(p));
  for (int k = 0; k < N; ++k) {
    if (!(Eigen::SelfAdjointEigenSolver<Matrix>(c.problem.hessian(k)).eigenvalues()(0) > 0.0)) {
      return false;
    }
  }
  return Eigen::SelfAdjointEigenSolver<Matrix>(c.problem.QN).eigenvalues()(0) > 0.0;
}

bool sqp_one_step(Rng& rng) {
  const int N = uniform_int(rng, 1, 10), nx = uniform_int(rng, 1, 4), nu = uniform_int(rng, 1, 3);
  const LqProblem lq = random_sosc_lq(rng, N, nx, nu);
  const LqOcp p(lq);
  Trajectory start = testing::random_trajectory(rng, N, nx, nu, 10.0);
  start.x(0) = p.initial_state();
  const auto [sol, rep] = sqp_solve(p, start);
  return rep.converged && rep.iterations == 1 &&
         norm_w(sol - lq_solve(lq)) <= 1e-8 * (1.0 + norm_w(sol));
}

bool worker_determinism(Rng& rng) {
  const int N = uniform_int(rng, 8, 30), nx = uniform_int(rng, 1, 3), nu = uniform_int(rng, 1, 2);
  testing::LqOptions o;
  o.a_scale = 0.7;
  const LqProblem lq = testing::random_lq(rng, N, nx, nu, o);
  const LqOcp p(lq);
  SchwarzConfig cfg;
  cfg.num_subdomains = uniform_int(rng, 2, 4);
  cfg.overlap = AbsoluteOverlap{uniform_int(rng, 1, 4)};
  cfg.max_outer = 5;
  cfg.tol_primal = cfg.tol_dual = 0.0;
  auto run = [&](int workers) {
    SchwarzConfig c = cfg;
    c.workers = workers;
    try {
      return schwarz_solve(p, c, pinned_zero(p)).first;
    } catch (const MaxOuterIterations& e) {
      return e.best();
    }
  };
  return norm_w(run(1) - run(uniform_int(rng, 2, 8))) == 0.0;
}

Outcome property_suites() {
  struct Suite {
    const char* name;
    std::function<bool(Rng&)> check;
  };
  const std::vector<Suite> suites = {
      {"norm", norm_axioms},           {"restriction", restriction_roundtrip},
      {"partition", partition_identities}, {"convexified", convexified_pd},
      {"sqp", sqp_one_step},           {"workers", worker_determinism},
  };
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 1100;
  for (const auto& s : suites) {
    Rng rng(seed++);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      try {
        if (!s.check(rng)) ++failures;
      } catch (const std::exception&) {
        ++failures;
      }
    }
    ok = ok && failures == 0;
    detail += std::string(s.name) + " " + std::to_string(1000 - failures) + "/1000, ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

struct Criterion {
  int id;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace schwarz_ocp

int main() {
  using namespace schwarz_ocp;
  const std::vector<Criterion> criteria = {
      {1, 10, riccati_vs_dense},
      {2, 10, convexification_identities},
      {3, 5, closed_form_dual_sum},
      {4, 10, sensitivity_vs_differences},
      {5, 300, overlap_trend},
      {6, 60, contraction_vs_overlap},
      {7, 60, indefinite_global_convergence},
      {8, 300, eds_coalescence},
      {9, 120, fixed_point},
      {10, 600, admm_comparison},
      {11, 60, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("Criterion %d: %s (%s; %.1f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
