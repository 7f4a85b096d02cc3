#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsconic/edesign.hpp"
#include "nsconic/error.hpp"
#include "nsconic/io.hpp"
#include "nsconic/random_lp.hpp"
#include "nsconic/sampling.hpp"
#include "nsconic/simple.hpp"
#include "nsconic/solver.hpp"

namespace nsconic::cli {

enum ExitCode : int {
  kOptimal = 0,
  kInfeasible = 2,
  kIterationLimit = 3,
  kInputError = 4,
  kNumericalError = 5,
};

inline int exit_code(Status s) {
  switch (s) {
    case Status::Optimal: return kOptimal;
    case Status::PrimalInfeasible:
    case Status::DualInfeasible: return kInfeasible;
    case Status::IterationLimit: return kIterationLimit;
    case Status::NumericalError: return kNumericalError;
  }
  return kNumericalError;
}

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InputError:
    case ErrorKind::BadSpec:
    case ErrorKind::BadInstance:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ExteriorStart:
    case ErrorKind::RangeError:
    case ErrorKind::NonFinite:
    case ErrorKind::TooLarge: return kInputError;
    default: return kNumericalError;
  }
}

struct CommonFlags {
  double tol = 1e-6;
  int max_iter = 500;
  bool verbose = false;
  std::string output;

  void attach(CLI::App* app) {
    app->add_option("--tol", tol, "optimality tolerance")->capture_default_str();
    app->add_option("--max-iter", max_iter, "iteration limit")->capture_default_str();
    app->add_flag("--verbose", verbose, "per-iteration log on stderr");
    app->add_option("--output", output, "write the result here instead of stdout");
  }

  SolverOptions options() const {
    SolverOptions o;
    o.optimTol = tol;
    o.maxIter = max_iter;
    o.verbose = verbose;
    return o;
  }
};

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InputError, "cannot write " + path);
  f << text;
}

inline int report(const SolverResult& r, const CommonFlags& flags, std::ostream& out) {
  emit(dump_result(r), flags.output, out);
  return exit_code(r.status);
}

struct BarrierCheck {
  std::string cone = "lp";
  Eigen::Index dim = 0;
  std::vector<double> lambda;
  Eigen::Index n = 3;
  Eigen::Index p = 6;
  std::uint64_t seed = 1;
  int points = 100;
  std::string output;
};

/// Runs fd_check at seeded interior points and reports worst-case errors.
inline int check_barrier(const BarrierCheck& cfg, std::ostream& out) {
  if (cfg.points < 1) throw Error(ErrorKind::InputError, "--points must be >= 1");
  Rng rng(cfg.seed);
  BarrierOracle oracle;
  std::function<Vector()> sample;
  if (cfg.cone == "edesign") {
    const auto data = random_edesign(cfg.n, cfg.p, cfg.seed);
    const auto built = build_edesign(data);
    oracle = built.oracle;
    sample = [&rng, v = data.V] { return sample_edesign_point(v, rng); };
  } else {
    const auto type = parse_cone_type(cfg.cone);
    if (!type) throw Error(ErrorKind::InputError, "unknown cone tag \"" + cfg.cone + "\"");
    ConeSpec spec;
    spec.type = *type;
    switch (*type) {
      case ConeType::Exp: spec.dim = 3; break;
      case ConeType::Gpow:
        spec.lambda = cfg.lambda.empty()
                          ? Vector(Vector::Constant(2, 0.5))
                          : Vector(Eigen::Map<const Vector>(
                                cfg.lambda.data(), static_cast<Eigen::Index>(cfg.lambda.size())));
        spec.dim = spec.lambda.size() + 1;
        break;
      default: spec.dim = cfg.dim > 0 ? cfg.dim : 5; break;
    }
    if (cfg.dim > 0 && cfg.dim != spec.dim) {
      throw Error(ErrorKind::InputError, "--dim does not fit cone " + cfg.cone);
    }
    auto built = build({spec});
    oracle = built.oracle;
    sample = [&rng, spec] { return sample_interior(spec, rng); };
  }

  FdReport worst;
  for (int k = 0; k < cfg.points; ++k) {
    const auto r = fd_check(oracle, sample());
    worst.gradient_error = std::max(worst.gradient_error, r.gradient_error);
    worst.hessian_error = std::max(worst.hessian_error, r.hessian_error);
    worst.euler_gradient = std::max(worst.euler_gradient, r.euler_gradient);
    worst.euler_hessian = std::max(worst.euler_hessian, r.euler_hessian);
    worst.homogeneity = std::max(worst.homogeneity, r.homogeneity);
  }
  const bool pass = worst.gradient_error <= 1e-5 && worst.hessian_error <= 1e-5 &&
                    worst.euler_gradient <= 1e-8 && worst.euler_hessian <= 1e-7 &&
                    worst.homogeneity <= 1e-9;
  Json doc = {{"cone", cfg.cone},
              {"dim", oracle.dim()},
              {"nu", oracle.nu()},
              {"points", cfg.points},
              {"seed", cfg.seed},
              {"maxGradientError", worst.gradient_error},
              {"maxHessianError", worst.hessian_error},
              {"maxEulerGradient", worst.euler_gradient},
              {"maxEulerHessian", worst.euler_hessian},
              {"maxHomogeneityError", worst.homogeneity},
              {"pass", pass}};
  emit(doc.dump(2) + "\n", cfg.output, out);
  return pass ? kOptimal : kNumericalError;
}

inline int cli_main(int argc, char** argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Nonsymmetric conic interior-point solver"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string problem_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  solve_cmd->add_option("file", problem_path, "problem document")->required();
  solve_flags.attach(solve_cmd);

  CommonFlags lp_flags;
  Eigen::Index lp_m = 0, lp_n = 0;
  std::uint64_t lp_seed = 0;
  std::string emit_path;
  auto* lp_cmd = app.add_subcommand("random-lp", "generate and solve a random feasible LP");
  lp_cmd->add_option("--m", lp_m, "rows")->required();
  lp_cmd->add_option("--n", lp_n, "columns")->required();
  lp_cmd->add_option("--seed", lp_seed, "generator seed")->required();
  lp_cmd->add_option("--emit", emit_path, "also write the generated problem document");
  lp_flags.attach(lp_cmd);

  CommonFlags ed_flags;
  Eigen::Index ed_n = 0, ed_p = 0;
  std::uint64_t ed_seed = 0;
  auto* ed_cmd = app.add_subcommand("edesign", "solve a random E-optimal design instance");
  ed_cmd->add_option("--n", ed_n, "regressor dimension")->required();
  ed_cmd->add_option("--p", ed_p, "number of experiments (default 2n)");
  ed_cmd->add_option("--seed", ed_seed, "generator seed")->required();
  ed_flags.attach(ed_cmd);

  BarrierCheck check;
  auto* check_cmd = app.add_subcommand("check-barrier", "finite-difference self-check of a barrier");
  check_cmd->add_option("--cone", check.cone, "lp, socp, exp, gpow, free or edesign")->required();
  check_cmd->add_option("--dim", check.dim, "cone dimension (lp, socp, free)");
  check_cmd->add_option("--lambda", check.lambda, "gpow signature")->expected(1, -1);
  check_cmd->add_option("--n", check.n, "edesign rows")->capture_default_str();
  check_cmd->add_option("--p", check.p, "edesign columns")->capture_default_str();
  check_cmd->add_option("--seed", check.seed, "sampling seed")->required();
  check_cmd->add_option("--points", check.points, "number of sample points")->capture_default_str();
  check_cmd->add_option("--output", check.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*solve_cmd) {
      const auto file = read_problem_file(problem_path);
      auto opts = solve_flags.options();
      opts.validate();
      const auto problem = file.to_problem();
      return report(solve_simple(problem.c, problem.A, problem.b, file.cones, file.x0, opts),
                    solve_flags, out);
    }
    if (*lp_cmd) {
      const auto gen = random_lp(lp_m, lp_n, lp_seed);
      const std::vector<ConeSpec> cones{ConeSpec::lp(lp_n)};
      if (!emit_path.empty()) {
        write_problem_file(emit_path, ProblemFile::from_problem(gen.problem, cones));
      }
      auto opts = lp_flags.options();
      opts.validate();
      return report(solve_simple(gen.problem.c, gen.problem.A, gen.problem.b, cones,
                                 std::nullopt, opts),
                    lp_flags, out);
    }
    if (*ed_cmd) {
      const auto data = random_edesign(ed_n, ed_p > 0 ? ed_p : 2 * ed_n, ed_seed);
      const auto inst = build_edesign(data);
      auto opts = ed_flags.options();
      opts.validate();
      return report(solve(inst.problem, inst.oracle, inst.x0, opts), ed_flags, out);
    }
    if (*check_cmd) return check_barrier(check, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kInputError;
}

}  // namespace nsconic::cli
