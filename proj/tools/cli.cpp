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

#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>

#include "schwarz_ocp/admm.hpp"
#include "schwarz_ocp/errors.hpp"
#include "schwarz_ocp/lq.hpp"
#include "schwarz_ocp/nlp.hpp"
#include "schwarz_ocp/problems.hpp"
#include "schwarz_ocp/schwarz.hpp"
#include "schwarz_ocp/sensitivity.hpp"

namespace schwarz_ocp::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Full-scale horizons; benchmark partitions shrink with N relative to these.
constexpr int kQuadrotorFullN = 24000;
constexpr int kThinPlateFullN = 8640;
constexpr int kBenchmarkFullT = 20;

std::shared_ptr<spdlog::logger> logger() {
  auto log = spdlog::get("schwarz_ocp");
  if (!log) {
    log = spdlog::stderr_logger_mt("schwarz_ocp");
    const char* env = std::getenv("SCHWARZ_OCP_LOG");
    log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  }
  return log;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Problem selection

enum class Kind { Quadrotor, ThinPlate, LqFile };

struct Source {
  Kind kind = Kind::Quadrotor;
  QuadrotorParams quad;
  ThinPlateParams plate;
  LqProblem lq;

  std::string name() const {
    switch (kind) {
      case Kind::Quadrotor: return "quadrotor";
      case Kind::ThinPlate: return "thinplate";
      default: return "lqfile";
    }
  }

  int horizon() const {
    switch (kind) {
      case Kind::Quadrotor: return quad.horizon;
      case Kind::ThinPlate: return plate.horizon;
      default: return lq.horizon;
    }
  }

  // Terminal perturbations: quadrotor reference (9), uniform plate offset
  // (1), LQ terminal linear term (nx).
  int terminal_dim() const {
    switch (kind) {
      case Kind::Quadrotor: return 9;
      case Kind::ThinPlate: return 1;
      default: return lq.nx;
    }
  }

  std::unique_ptr<NlpOcp> build(const BoundaryPerturbation& b = {}) const {
    switch (kind) {
      case Kind::Quadrotor: {
        QuadrotorParams q = quad;
        if (b.initial_shift.size() > 0) q.x0 += b.initial_shift;
        if (b.terminal_shift.size() > 0) q.terminal_ref_offset += b.terminal_shift;
        return std::make_unique<Quadrotor>(q);
      }
      case Kind::ThinPlate: {
        ThinPlateParams t = plate;
        if (b.initial_shift.size() > 0) {
          t.x0 = ThinPlate(plate).initial_state() + b.initial_shift;
        }
        if (b.terminal_shift.size() > 0) t.terminal_desired_offset += b.terminal_shift(0);
        return std::make_unique<ThinPlate>(t);
      }
      default: {
        LqProblem p = lq;
        if (b.initial_shift.size() > 0) p.x0 += b.initial_shift;
        if (b.terminal_shift.size() > 0) p.rN += b.terminal_shift;
        return std::make_unique<LqOcp>(p);
      }
    }
  }
};

Source make_source(const RunSpec& spec) {
  Source s;
  const std::string& p = spec.problem;
  if (p == "quadrotor") {
    s.kind = Kind::Quadrotor;
    if (spec.N) s.quad.horizon = *spec.N;
  } else if (p == "thinplate") {
    s.kind = Kind::ThinPlate;
    s.plate.mesh = spec.mesh.value_or(5);
    if (spec.N) s.plate.horizon = *spec.N;
  } else if (p.rfind("lqfile:", 0) == 0) {
    s.kind = Kind::LqFile;
    const std::string path = p.substr(7);
    if (!fs::exists(path)) throw StructuralError("LQ file not found: " + path);
    s.lq = read_lq_problem(path);
    if (spec.N && *spec.N != s.lq.horizon) {
      throw StructuralError("--N does not apply to LQ files (file has N = " +
                            std::to_string(s.lq.horizon) + ")");
    }
  } else {
    throw StructuralError("unknown problem '" + p +
                          "' (expected quadrotor, thinplate or lqfile:<path>)");
  }
  if (s.kind != Kind::ThinPlate && spec.mesh) {
    throw StructuralError("--mesh applies to thinplate only");
  }
  if (s.horizon() < 1) throw StructuralError("horizon must be at least 1");
  return s;
}

Trajectory pinned_zero(const NlpOcp& p) {
  Trajectory t = p.zero_trajectory();
  t.x(0) = p.initial_state();
  return t;
}

// ---------------------------------------------------------------------------
// Output

fs::path prepare_out(const RunSpec& spec) {
  const fs::path dir(spec.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = dir / ".schwarz_ocp_write_test";
  {
    std::ofstream f(probe);
    if (ec || !f) throw StructuralError("output directory not writable: " + spec.out);
  }
  fs::remove(probe, ec);
  return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ofstream f(path);
  if (!f) throw StructuralError("cannot write " + path.string());
  w(f);
  logger()->info("wrote {}", path.string());
}

// ---------------------------------------------------------------------------
// Solver configuration

SqpOptions sqp_options(const RunSpec& spec) {
  SqpOptions o;
  o.tolerance = spec.tol;
  return o;
}

Overlap overlap_of(const RunSpec& spec) {
  if (spec.tau) return AbsoluteOverlap{*spec.tau};
  return RelativeOverlap{spec.tau_rel.value_or(1.0)};
}

SchwarzConfig schwarz_config(const RunSpec& spec, int T, double mu) {
  SchwarzConfig cfg;
  cfg.mu = mu;
  cfg.num_subdomains = T;
  cfg.overlap = overlap_of(spec);
  cfg.tol_primal = spec.tol_pr;
  cfg.tol_dual = spec.tol_du;
  cfg.max_outer = spec.max_outer.value_or(100);
  cfg.inner = sqp_options(spec);
  cfg.workers = spec.workers;
  return cfg;
}

// Centralized reference, used for error tracking only.
std::optional<Trajectory> reference_solution(const Source& src, const NlpOcp& p,
                                             const RunSpec& spec) {
  if (src.kind == Kind::LqFile) return lq_solve(src.lq);
  auto [w, rep] = sqp_solve(p, pinned_zero(p), sqp_options(spec));
  if (!rep.converged) {
    logger()->warn("centralized reference did not converge ({}); err_vs_ref left empty",
                   rep.message);
    return std::nullopt;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_solve(const RunSpec& spec) {
  const Source src = make_source(spec);
  const fs::path dir = prepare_out(spec);
  const auto p = src.build();
  Trajectory sol;
  SqpReport rep;
  if (src.kind == Kind::LqFile) {
    const auto t0 = Clock::now();
    sol = dense_kkt_solve(src.lq);
    const KktResidual res = kkt_residual(*p, sol);
    rep.converged = true;
    rep.iterations = 1;
    rep.final_residual = res;
    rep.message = "dense KKT solve";
    rep.trace.push_back({1, res.stationarity, res.feasibility, 1.0, objective(*p, sol),
                         seconds_since(t0)});
  } else {
    std::tie(sol, rep) = sqp_solve(*p, pinned_zero(*p), sqp_options(spec));
  }
  write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, sol); });
  write_file(dir / "solver_trace.csv", [&](std::ostream& os) { write_sqp_trace_csv(os, rep); });
  logger()->info("{}: {} after {} iterations, KKT {:.3e}", src.name(), rep.message,
                 rep.iterations, rep.final_residual.max());
  if (!rep.converged) {
    logger()->error("solver failed: {}", rep.message);
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_schwarz(const RunSpec& spec) {
  const Source src = make_source(spec);
  const fs::path dir = prepare_out(spec);
  const auto p = src.build();
  const int T = spec.T.value_or(3);
  const auto reference = reference_solution(src, *p, spec);

  struct Run {
    std::string tag;
    SchwarzConfig cfg;
  };
  std::vector<Run> runs;
  if (spec.sweep.empty()) {
    runs.push_back({"", schwarz_config(spec, T, spec.mu)});
  } else {
    for (double v : spec.sweep) {
      RunSpec s = spec;
      s.tau.reset();
      s.tau_rel = v;
      runs.push_back({"_tau_rel_" + num(v), schwarz_config(s, T, spec.mu)});
    }
  }

  int code = kOk;
  std::vector<std::pair<int, double>> summary;
  Trajectory last;
  for (auto& run : runs) {
    run.cfg.reference = reference;
    const Partition part = partition_for(*p, run.cfg);
    write_file(dir / ("partition" + run.tag + ".csv"),
               [&](std::ostream& os) { write_partition_csv(os, part); });
    const auto t0 = Clock::now();
    ConvergenceRecord rec;
    try {
      std::tie(last, rec) = schwarz_solve(*p, run.cfg, pinned_zero(*p));
    } catch (const MaxOuterIterations& e) {
      logger()->error("Schwarz{} hit the outer iteration cap", run.tag);
      last = e.best();
      rec = e.record();
      code = kNumericalFailure;
    }
    summary.emplace_back(rec.iterations(), seconds_since(t0));
    write_file(dir / ("convergence" + run.tag + ".csv"),
               [&](std::ostream& os) { write_convergence_csv(os, rec); });
    logger()->info("Schwarz{}: {} outer iterations", run.tag, rec.iterations());
  }
  write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, last); });
  if (!spec.sweep.empty()) {
    write_file(dir / "overlap_sweep.csv", [&](std::ostream& os) {
      os << "tau_rel,outer_iters,wall_s\n";
      for (std::size_t i = 0; i < spec.sweep.size(); ++i) {
        os << num(spec.sweep[i]) << ',' << summary[i].first << ',' << summary[i].second << '\n';
      }
    });
  }
  return code;
}

int cmd_eds(const RunSpec& spec) {
  const Source src = make_source(spec);
  const fs::path dir = prepare_out(spec);
  const auto p = src.build();
  const bool initial = spec.boundary != "terminal";
  const bool terminal = spec.boundary != "initial";
  SqpOptions so = sqp_options(spec);
  auto [ref, rep] = sqp_solve(*p, pinned_zero(*p), so);
  if (!rep.converged) throw MaxIterations("reference solve failed: " + rep.message);

  const auto perts = gaussian_perturbations(spec.perturbations, spec.magnitude, p->state_dim(),
                                            src.terminal_dim(), initial, terminal, spec.seed);
  EdsOptions eo;
  // Quadratic sources are solved in one exact Newton step, so only round-off limits the tail.
  eo.noise_floor = src.kind == Kind::LqFile ? 1e-12 : 10.0 * spec.tol;
  eo.workers = spec.workers;
  const auto reports = eds_probe(
      [&](const BoundaryPerturbation& b) { return src.build(b); },
      [&](const NlpOcp& q, const Trajectory& warm) {
        Trajectory start = warm;
        start.x(0) = q.initial_state();
        auto [w, r] = sqp_solve(q, start, so);
        if (!r.converged) throw MaxIterations("perturbed solve failed: " + r.message);
        return w;
      },
      ref, perts, eo);
  for (std::size_t j = 0; j < reports.size(); ++j) {
    write_file(dir / ("eds_" + std::to_string(j) + ".csv"),
               [&](std::ostream& os) { write_eds_csv(os, reports[j]); });
  }
  write_file(dir / "eds_summary.csv",
             [&](std::ostream& os) { write_eds_summary_csv(os, reports); });
  return kOk;
}

int benchmark_subdomains(const Source& src, const RunSpec& spec) {
  if (spec.T) return *spec.T;
  const int N = src.horizon();
  switch (src.kind) {
    case Kind::Quadrotor:
      return std::max(2, static_cast<int>(std::lround(double(kBenchmarkFullT) * N / kQuadrotorFullN)));
    case Kind::ThinPlate:
      return std::max(2, static_cast<int>(std::lround(double(kBenchmarkFullT) * N / kThinPlateFullN)));
    default:
      return std::clamp(N / 10, 1, kBenchmarkFullT);
  }
}

struct BenchRow {
  std::string method;
  std::string param;
  int iter;
  double kkt;
  double wall_s;
};

int cmd_benchmark(const RunSpec& spec) {
  const Source src = make_source(spec);
  const fs::path dir = prepare_out(spec);
  const auto p = src.build();
  const int T = benchmark_subdomains(src, spec);
  const int budget = spec.max_outer.value_or(50);
  logger()->info("benchmark on {} with N = {}, T = {}", src.name(), src.horizon(), T);
  std::vector<BenchRow> rows;

  auto [central, rep] = sqp_solve(*p, pinned_zero(*p), sqp_options(spec));
  for (const auto& r : rep.trace) {
    rows.push_back({"sqp", "", r.iter, std::max(r.stationarity, r.feasibility), r.wall_s});
  }
  if (!rep.converged) logger()->error("centralized SQP failed: {}", rep.message);
  write_file(dir / "trajectory_sqp.csv",
             [&](std::ostream& os) { write_trajectory_csv(os, central); });

  auto add_record = [&](const std::string& method, double param, const ConvergenceRecord& rec,
                        const Trajectory& final) {
    for (const auto& r : rec.rows) rows.push_back({method, num(param), r.iter, r.kkt.max(), r.wall_s});
    write_file(dir / ("trajectory_" + method + "_" + num(param) + ".csv"),
               [&](std::ostream& os) { write_trajectory_csv(os, final); });
  };

  for (double mu : spec.mu_list) {
    SchwarzConfig cfg = schwarz_config(spec, T, mu);
    cfg.max_outer = budget;
    try {
      const auto [w, rec] = schwarz_solve(*p, cfg, pinned_zero(*p));
      add_record("schwarz", mu, rec, w);
    } catch (const MaxOuterIterations& e) {
      add_record("schwarz", mu, e.record(), e.best());
    } catch (const Error& e) {
      logger()->error("Schwarz mu = {} failed: {}", mu, e.what());
    }
  }
  for (double rho : spec.admm_rho) {
    AdmmConfig cfg;
    cfg.rho = rho;
    cfg.num_subdomains = T;
    cfg.max_iterations = budget;
    cfg.tol_primal = spec.tol_pr;
    cfg.tol_dual = spec.tol_du;
    cfg.inner = sqp_options(spec);
    cfg.workers = spec.workers;
    try {
      const auto [w, rec] = admm_solve(*p, cfg, pinned_zero(*p));
      add_record("admm", rho, rec, w);
    } catch (const MaxOuterIterations& e) {
      add_record("admm", rho, e.record(), e.best());
    } catch (const Error& e) {
      logger()->error("ADMM rho = {} failed: {}", rho, e.what());
    }
  }

  write_file(dir / "benchmark.csv", [&](std::ostream& os) {
    os << "method,param,iter,kkt_residual,wall_s\n";
    os.precision(17);
    for (const auto& r : rows) {
      os << r.method << ',' << r.param << ',' << r.iter << ',' << r.kkt << ',' << r.wall_s << '\n';
    }
  });
  return rep.converged ? kOk : kNumericalFailure;
}

// ---------------------------------------------------------------------------
// Error mapping

struct Classified {
  const char* kind;
  int code;
};

Classified classify(const std::exception& e) {
  if (dynamic_cast<const InvalidOverlap*>(&e)) return {"InvalidOverlap", kInputError};
  if (dynamic_cast<const InvalidPartition*>(&e)) return {"InvalidPartition", kInputError};
  if (dynamic_cast<const StructuralError*>(&e)) return {"StructuralError", kInputError};
  if (dynamic_cast<const SubproblemFailure*>(&e)) return {"SubproblemFailure", kNumericalFailure};
  if (dynamic_cast<const MaxOuterIterations*>(&e)) return {"MaxOuterIterations", kNumericalFailure};
  if (dynamic_cast<const MaxIterations*>(&e)) return {"MaxIterations", kNumericalFailure};
  if (dynamic_cast<const LineSearchFailure*>(&e)) return {"LineSearchFailure", kNumericalFailure};
  if (dynamic_cast<const IndefiniteW*>(&e)) return {"IndefiniteW", kNumericalFailure};
  if (dynamic_cast<const SingularKkt*>(&e)) return {"SingularKkt", kNumericalFailure};
  if (dynamic_cast<const ConvexifyBreakdown*>(&e)) return {"ConvexifyBreakdown", kNumericalFailure};
  if (dynamic_cast<const NotAtKkt*>(&e)) return {"NotAtKkt", kNumericalFailure};
  if (dynamic_cast<const TrigSingularity*>(&e)) return {"TrigSingularity", kNumericalFailure};
  if (dynamic_cast<const EvaluationError*>(&e)) return {"EvaluationError", kNumericalFailure};
  if (dynamic_cast<const Error*>(&e)) return {"Error", kNumericalFailure};
  return {"exception", kNumericalFailure};
}

// ---------------------------------------------------------------------------
// Command line

void add_common(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--problem", spec.problem, "quadrotor | thinplate | lqfile:<path>")
      ->capture_default_str();
  sub->add_option("--N", spec.N, "horizon override")->check(CLI::PositiveNumber);
  sub->add_option("--mesh", spec.mesh, "thin plate grid points per side (default 5)")
      ->check(CLI::Range(3, 1000));
  sub->add_option("--tol", spec.tol, "SQP tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", spec.seed, "random seed")->capture_default_str();
  sub->add_option("--workers", spec.workers, "worker threads (0: hardware)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", spec.out, "output directory")->capture_default_str();
}

void add_decomposition(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--T", spec.T, "number of subdomains")->check(CLI::PositiveNumber);
  auto* tau = sub->add_option("--tau", spec.tau, "overlap in stages per side")
                  ->check(CLI::NonNegativeNumber);
  auto* rel = sub->add_option("--tau-rel", spec.tau_rel, "relative overlap (default 1.0)")
                  ->check(CLI::PositiveNumber);
  tau->excludes(rel);
  sub->add_option("--tol-pr", spec.tol_pr, "primal seam tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--tol-du", spec.tol_du, "dual seam tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-outer", spec.max_outer, "outer iteration budget")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Overlapping Schwarz decomposition for long-horizon optimal control",
               "schwarz-ocp"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "centralized solve");
  add_common(solve, spec);

  auto* schwarz = app.add_subcommand("schwarz", "Schwarz decomposition solve");
  add_common(schwarz, spec);
  add_decomposition(schwarz, spec);
  schwarz->add_option("--mu", spec.mu, "terminal proximal weight")->check(CLI::NonNegativeNumber);
  schwarz->add_option("--sweep-overlap", spec.sweep, "relative overlaps to sweep")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  auto* eds = app.add_subcommand("eds", "exponential decay of sensitivity probe");
  add_common(eds, spec);
  eds->add_option("--magnitude", spec.magnitude, "perturbation magnitude")
      ->check(CLI::NonNegativeNumber);
  eds->add_option("--perturbations", spec.perturbations, "number of perturbations")
      ->check(CLI::PositiveNumber);
  eds->add_option("--boundary", spec.boundary, "initial | terminal | both")
      ->check(CLI::IsMember({"initial", "terminal", "both"}));

  auto* bench = app.add_subcommand("benchmark", "centralized SQP vs Schwarz vs ADMM");
  add_common(bench, spec);
  add_decomposition(bench, spec);
  bench->add_option("--mu", spec.mu_list, "Schwarz weights")->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--admm-rho", spec.admm_rho, "ADMM penalties")->delimiter(',')
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    const int rc = app.exit(e, out, err);
    std::cout << out.str();
    return rc == 0 ? kOk : kInputError;
  }

  try {
    auto log = logger();
    if (solve->parsed()) return cmd_solve(spec);
    if (schwarz->parsed()) return cmd_schwarz(spec);
    if (eds->parsed()) return cmd_eds(spec);
    return cmd_benchmark(spec);
  } catch (const std::exception& e) {
    const Classified c = classify(e);
    err << "error [" << c.kind << "]: " << e.what() << '\n';
    return c.code;
  }
}

}  // namespace schwarz_ocp::cli
