#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "framelab/frame.hpp"

namespace framelab {

/// A pair of equal-dimension subspaces X, Y and an operator T: X -> Y with
/// ||I - T|| < 1 on X. Float throughout (operator norms).
struct PerturbationSetup {
  Eigen::MatrixXd x_basis;  // n x d
  Eigen::MatrixXd y_basis;  // n x d
  Eigen::MatrixXd t;        // n x n; only the action on X matters
};

struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

struct BoundReport {
  double epsilon = 0;  // ||(I-T)P||, the operator norm of I-T on X
  std::vector<BoundCheck> checks;
  bool all_pass = true;
};

/// Builds S = TP + (I-P) and Q = S P S^{-1} and verifies the norm bounds on
/// S, S^{-1}, Q and the perturbed complement, each with `slack` added to the
/// asserted side. Item "Q small on ..." is checked for x perp X (following
/// the computation that proves it), and the P-Q bound is checked both in the
/// tight 2e/(1-e) form and the looser (1+e^2)/(1-e) form.
BoundReport build_s_operator(const PerturbationSetup& setup, double slack = 1e-8,
                             int unit_samples = 64, std::uint64_t seed = 1);

/// Convenience generator: random d-dim subspace of R^n, Y a perturbed copy,
/// T mapping the orthonormal basis of X onto one of Y. `scale` controls the
/// perturbation size (epsilon comes out near it).
PerturbationSetup random_setup(int n, int d, double scale, std::mt19937_64& rng);

struct ExperimentReport {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;  // meaning depends on the experiment
  double epsilon = 0;      // perturbation budget used
  bool pass = false;
};

/// Perturbation stability of norm-retrieval failure: every sampled frame
/// within the computed budget must still fail. `hits` counts samples that
/// stayed CertifiedNo; pass means hits == samples.
ExperimentReport nr_failure_stability_experiment(const Frame& f, std::uint64_t samples,
                                                 std::uint64_t seed,
                                                 const SweepOptions& opt = {});

/// Small random rational perturbations on a 1/grid_den grid; `hits` counts
/// full-spark (hence, for m >= 2n-1, phase retrievable) outcomes.
ExperimentReport full_spark_density_experiment(const Frame& f, std::uint64_t samples,
                                               std::uint64_t seed, long grid_den = 1000,
                                               const SweepOptions& opt = {});

/// Normalization stability: sum ||phi_i/|phi_i| - psi_i/|psi_i||| bounded by
/// (2B/A^2) sum ||phi_i - psi_i||. Both families must satisfy
/// A <= ||.|| <= B.
BoundReport normalization_stability_check(const Frame& phi, const Frame& psi, double a, double b,
                                          double slack = 1e-8);

struct SuiteReport {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  bool pass = false;
};

/// Random independent n-sets: norm retrieval holds iff the Gram matrix is
/// diagonal; includes near-orthogonal families e_i + x_i which must fail
/// whenever some x_i breaks orthogonality.
SuiteReport riesz_nr_orthogonality_suite(std::uint64_t samples, std::uint64_t seed,
                                         const SweepOptions& opt = {});

}  // namespace framelab
