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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/nlp.hpp"
#include "schwarz_ocp/problems.hpp"
#include "schwarz_ocp/sensitivity.hpp"
#include "test_support.hpp"

namespace schwarz_ocp {
namespace {

using testing::Rng;

Trajectory solve_tight(const NlpOcp& p, const Trajectory& start) {
  SqpOptions o;
  o.tolerance = 1e-11;
  auto [sol, rep] = sqp_solve(p, start, o);
  EXPECT_TRUE(rep.converged) << rep.message;
  return sol;
}

Trajectory fd_delta(const Trajectory& plus, const Trajectory& base, double h) {
  Trajectory d = plus - base;
  d *= 1.0 / h;
  return d;
}

TEST(SensitivityLqp, ZeroDirectionGivesZeroSolution) {
  QuadrotorParams qp;
  qp.horizon = 60;
  const Quadrotor p(qp);
  const Trajectory ref = solve_tight(p, p.zero_trajectory());
  const LqProblem q = build_sensitivity_lqp(p, ref, SensitivityDirection{});
  EXPECT_EQ(norm_w(lq_solve(q)), 0.0);
}

TEST(SensitivityLqp, RejectsNonKktBase) {
  QuadrotorParams qp;
  qp.horizon = 20;
  const Quadrotor p(qp);
  EXPECT_THROW(build_sensitivity_lqp(p, p.zero_trajectory(), {}), NotAtKkt);
}

TEST(SensitivityLqp, RejectsBadDirectionShapes) {
  Rng rng(1);
  const LqProblem lq = testing::random_lq(rng, 5, 2, 1);
  const LqOcp p(lq);
  const Trajectory ref = lq_solve(lq);
  SensitivityDirection l;
  l.initial = Vector::Ones(3);
  EXPECT_THROW(build_sensitivity_lqp(p, ref, l), StructuralError);
  l.initial.resize(0);
  l.stage.assign(4, Vector::Ones(2));
  EXPECT_THROW(build_sensitivity_lqp(p, ref, l), StructuralError);
}

// An LQ problem is affine in x0, so differences are exact up to round-off.
TEST(SensitivityLqp, LinearQuadraticInitialStateDirection) {
  Rng rng(2);
  const LqProblem lq = testing::random_lq(rng, 20, 3, 2);
  const LqOcp p(lq);
  const Trajectory ref = lq_solve(lq);
  SensitivityDirection l;
  l.initial = Vector::Unit(3, 1);
  const Trajectory sens = lq_solve(build_sensitivity_lqp(p, ref, l));
  for (double h : {1e-4, 1e-5, 1e-6}) {
    LqProblem moved = lq;
    moved.x0 += h * l.initial;
    const double err = norm_w(fd_delta(lq_solve(moved), ref, h) - sens);
    EXPECT_LE(err, h) << "h = " << h;
  }
}

TEST(SensitivityLqp, LinearQuadraticDisturbanceDirection) {
  Rng rng(3);
  const LqProblem lq = testing::random_lq(rng, 15, 3, 2);
  const LqOcp p(lq);
  const Trajectory ref = lq_solve(lq);
  SensitivityDirection l;
  for (int k = 0; k < 15; ++k) l.stage.push_back(testing::random_vector(rng, 3));
  const Trajectory sens = lq_solve(build_sensitivity_lqp(p, ref, l));
  const double h = 1e-5;
  LqProblem moved = lq;
  for (int k = 0; k < 15; ++k) moved.stages[k].v += h * l.stage[k];
  EXPECT_LE(norm_w(fd_delta(lq_solve(moved), ref, h) - sens), 1e-6);
}

TEST(SensitivityLqp, QuadrotorInitialStateErrorShrinksWithStep) {
  QuadrotorParams qp;
  qp.horizon = 80;
  const Quadrotor p(qp);
  const Trajectory ref = solve_tight(p, p.zero_trajectory());
  Rng rng(4);
  SensitivityDirection l;
  l.initial = testing::random_vector(rng, 9);
  const Trajectory sens = lq_solve(build_sensitivity_lqp(p, ref, l));
  std::vector<double> errs;
  for (double h : {1e-4, 1e-5, 1e-6}) {
    QuadrotorParams moved = qp;
    moved.x0 = h * l.initial;
    const Quadrotor pm(moved);
    Trajectory warm = ref;
    warm.x(0) = pm.initial_state();
    errs.push_back(norm_w(fd_delta(solve_tight(pm, warm), ref, h) - sens));
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[2], errs[1]);
  EXPECT_LE(errs[2], 1e-4);
}

TEST(SensitivityLqp, QuadrotorTerminalReferenceDirection) {
  QuadrotorParams qp;
  qp.horizon = 80;
  const Quadrotor p(qp);
  const Trajectory ref = solve_tight(p, p.zero_trajectory());
  Rng rng(5);
  SensitivityDirection l;
  l.terminal = testing::random_vector(rng, 9);
  const Trajectory sens = lq_solve(build_sensitivity_lqp(p, ref, l));
  const double h = 1e-5;
  QuadrotorParams moved = qp;
  moved.terminal_ref_offset = h * l.terminal;
  const Trajectory plus = solve_tight(Quadrotor(moved), ref);
  EXPECT_LE(norm_w(fd_delta(plus, ref, h) - sens), 1e-3 * (1.0 + norm_w(sens)));
  EXPECT_GT(norm_w(sens), 1e-3);
}

TEST(SensitivityLqp, Superposition) {
  Rng rng(6);
  const LqProblem lq = testing::random_lq(rng, 25, 3, 2);
  const LqOcp p(lq);
  const Trajectory ref = lq_solve(lq);
  SensitivityDirection a, b, both;
  a.initial = testing::random_vector(rng, 3);
  b.stage.assign(25, Vector::Zero(3));
  b.stage[24] = testing::random_vector(rng, 3);
  both.initial = a.initial;
  both.stage = b.stage;
  const Trajectory sa = lq_solve(build_sensitivity_lqp(p, ref, a));
  const Trajectory sb = lq_solve(build_sensitivity_lqp(p, ref, b));
  const Trajectory sab = lq_solve(build_sensitivity_lqp(p, ref, both));
  EXPECT_LE(norm_w(sab - sa - sb), 1e-12 * (1.0 + norm_w(sab)));
}

TEST(Eds, ZeroPerturbationGivesZeroDeviation) {
  Rng rng(7);
  const LqProblem lq = testing::random_lq(rng, 20, 2, 1);
  const Trajectory ref = lq_solve(lq);
  BoundaryPerturbation none;
  none.initial_shift = Vector::Zero(2);
  const auto reports = eds_probe(
      [&](const BoundaryPerturbation& b) {
        LqProblem q = lq;
        q.x0 += b.initial_shift;
        return std::make_unique<LqOcp>(q);
      },
      [](const NlpOcp& p, const Trajectory& warm) { return sqp_solve(p, warm).first; },
      ref, {none});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].deviation.size(), 22u);
  for (double d : reports[0].deviation) EXPECT_EQ(d, 0.0);
  EXPECT_FALSE(reports[0].rho_hat);
  EXPECT_EQ(reports[0].boundary, "initial");
}

TEST(Eds, ScalarDecayMatchesClosedLoopEigenvalue) {
  LqProblem lq(60, 1, 1);
  for (auto& st : lq.stages) {
    st.Q(0, 0) = 1.0;
    st.R(0, 0) = 1.0;
    st.A(0, 0) = 0.5;
    st.B(0, 0) = 1.0;
  }
  lq.QN(0, 0) = 1.0;
  lq.x0(0) = 1.0;
  const RiccatiFactors f = riccati_factor(lq);
  const double e0 = std::abs(f.E[0](0, 0));
  const Trajectory ref = lq_solve(lq);
  BoundaryPerturbation pert;
  pert.initial_shift = Vector::Constant(1, 0.1);
  EdsOptions opts;
  opts.fit_skip = 1;
  const auto reports = eds_probe(
      [&](const BoundaryPerturbation& b) {
        LqProblem q = lq;
        q.x0 += b.initial_shift;
        return std::make_unique<LqOcp>(q);
      },
      [](const NlpOcp& p, const Trajectory& warm) { return sqp_solve(p, warm).first; },
      ref, {pert}, opts);
  const auto& d = reports[0].deviation;
  for (int k = 1; k < 20; ++k) {
    EXPECT_NEAR(d[k + 2] / d[k + 1], e0, 1e-8) << "stage " << k;
  }
  ASSERT_TRUE(reports[0].rho_hat);
  EXPECT_NEAR(*reports[0].rho_hat, e0, 1e-6);
}

TEST(Eds, MonotoneAwayFromBoundary) {
  Rng rng(8);
  testing::LqOptions o;
  o.a_scale = 0.6;
  o.linear_terms = false;
  const LqProblem lq = testing::random_lq(rng, 80, 3, 2, o);
  LqProblem moved = lq;
  moved.x0 += testing::random_vector(rng, 3);
  const auto d = stage_deviation(lq_solve(moved), lq_solve(lq));
  const int t = 5;
  double running = d[t + 1];
  for (int k = t + 1; k < 40; ++k) {
    EXPECT_LE(d[k + 1], running * (1.0 + 1e-9)) << "stage " << k;
    running = std::max(running, d[k + 1]);
  }
  EXPECT_LT(d[41], 1e-3 * d[1]);
}

TEST(FitDecay, RecoversSyntheticRates) {
  EdsReport r;
  const int N = 40;
  r.deviation.assign(N + 2, 0.0);
  for (int k = 0; k <= N; ++k) {
    r.deviation[k + 1] = 3.0 * std::pow(0.8, k) + 2.0 * std::pow(0.8, N - k);
  }
  EdsOptions o;
  o.fit_skip = 0;
  // One-sided: the far-boundary term is negligible over [0, N/4].
  EdsReport one = r;
  for (int k = 0; k <= N; ++k) one.deviation[k + 1] = 3.0 * std::pow(0.8, k);
  fit_decay(one, true, false, o);
  ASSERT_TRUE(one.rho_hat);
  EXPECT_NEAR(*one.rho_hat, 0.8, 1e-12);
  EXPECT_NEAR(*one.upsilon_hat, 3.0, 1e-10);
  EXPECT_EQ(one.fit_points, N / 2 + 1);

  EdsReport term = r;
  for (int k = 0; k <= N; ++k) term.deviation[k + 1] = 2.0 * std::pow(0.7, N - k);
  fit_decay(term, false, true, o);
  ASSERT_TRUE(term.rho_hat);
  EXPECT_NEAR(*term.rho_hat, 0.7, 1e-12);
  EXPECT_NEAR(*term.upsilon_hat, 2.0, 1e-10);
}

TEST(FitDecay, NoiseFloorAndMinimumPoints) {
  EdsReport r;
  r.deviation = {0, 1.0, 0.5, 0.25, 0.125, 1e-13, 1e-13, 1e-13, 1e-13, 1e-13, 0};
  EdsOptions o;
  o.fit_skip = 0;
  fit_decay(r, true, false, o);
  EXPECT_EQ(r.fit_points, 4);
  EXPECT_FALSE(r.rho_hat);
  r.deviation[5] = 0.0625;
  fit_decay(r, true, false, o);
  EXPECT_EQ(r.fit_points, 5);
  ASSERT_TRUE(r.rho_hat);
  EXPECT_NEAR(*r.rho_hat, 0.5, 1e-12);
}

TEST(Perturbations, SeededAndShaped) {
  const auto a = gaussian_perturbations(4, 0.1, 9, 9, true, true, 42);
  const auto b = gaussian_perturbations(4, 0.1, 9, 9, true, true, 42);
  const auto c = gaussian_perturbations(4, 0.1, 9, 9, true, true, 43);
  ASSERT_EQ(a.size(), 4u);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(a[j].initial_shift, b[j].initial_shift);
    EXPECT_EQ(a[j].terminal_shift, b[j].terminal_shift);
    EXPECT_EQ(a[j].boundary(), "both");
  }
  EXPECT_NE(a[0].initial_shift, c[0].initial_shift);
  const auto only = gaussian_perturbations(2, 1.0, 3, 5, false, true, 1);
  EXPECT_EQ(only[0].initial_shift.size(), 0);
  EXPECT_EQ(only[0].terminal_shift.size(), 5);
  EXPECT_EQ(only[0].boundary(), "terminal");
  EXPECT_DOUBLE_EQ(only[0].magnitude(), only[0].terminal_shift.norm());
}

TEST(EdsCsv, Formats) {
  EdsReport r;
  r.deviation = {0.5, 0.25, 0.125};
  r.rho_hat = 0.5;
  r.upsilon_hat = 2.0;
  r.boundary = "initial";
  r.magnitude = 0.1;
  std::ostringstream a, b;
  write_eds_csv(a, r);
  EXPECT_EQ(a.str(), "stage,deviation\n-1,0.5\n0,0.25\n1,0.125\n");
  EdsReport empty;
  empty.boundary = "terminal";
  write_eds_summary_csv(b, {r, empty});
  EXPECT_EQ(b.str(),
            "rho_hat,upsilon_hat,boundary,magnitude\n0.5,2,initial,0.10000000000000001\n"
            ",,terminal,0\n");
}

}  // namespace
}  // namespace schwarz_ocp
