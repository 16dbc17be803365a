#include <doctest.h>

#include <random>

#include "framelab/perturbation.hpp"

using namespace framelab;

namespace {

Frame frame_from(std::initializer_list<std::initializer_list<int>> vectors_as_rows) {
  const Mat rows = Mat::from_rows(vectors_as_rows);
  return Frame(rows.cols(), rows.transpose());
}

}  // namespace

TEST_CASE("operator bounds: T = I is the trivial setup with epsilon 0") {
  PerturbationSetup setup;
  setup.x_basis = Eigen::MatrixXd::Identity(3, 3).leftCols(2);
  setup.y_basis = setup.x_basis;
  setup.t = Eigen::MatrixXd::Identity(3, 3);
  const auto rep = build_s_operator(setup);
  CHECK(rep.epsilon == doctest::Approx(0.0));
  CHECK(rep.all_pass);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("operator bounds hold for a small planar rotation") {
  // X = span{e1} in R^2, T rotates by theta = 0.1: epsilon = 2 sin(theta/2)
  const double theta = 0.1;
  PerturbationSetup setup;
  setup.x_basis = Eigen::MatrixXd::Identity(2, 2).leftCols(1);
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  setup.t = rot;
  setup.y_basis = rot.leftCols(1);
  const auto rep = build_s_operator(setup);
  CHECK(rep.epsilon == doctest::Approx(2 * std::sin(theta / 2)).epsilon(1e-9));
  CHECK(rep.all_pass);
}

TEST_CASE("operator bounds hold on random subspace pairs") {
  std::mt19937_64 rng(5);
  for (double scale : {0.01, 0.1, 0.4}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 3 + int(rng() % 4);
      const int d = 1 + int(rng() % (n - 1));
      const auto setup = random_setup(n, d, scale, rng);
      const auto rep = build_s_operator(setup);
      CHECK(rep.epsilon < 1.0);
      if (!rep.all_pass)
        for (const auto& c : rep.checks)
          CHECK_MESSAGE(c.pass, c.name, " lhs=", c.lhs, " rhs=", c.rhs);
      CHECK(rep.all_pass);
    }
  }
}

TEST_CASE("operator bounds reject a too-large perturbation") {
  PerturbationSetup setup;
  setup.x_basis = Eigen::MatrixXd::Identity(2, 2).leftCols(1);
  setup.y_basis = setup.x_basis;
  setup.t = -Eigen::MatrixXd::Identity(2, 2);  // ||I-T|| = 2 on X
  CHECK_THROWS_AS(build_s_operator(setup), PreconditionViolation);
}

TEST_CASE("norm-retrieval failure survives small perturbations") {
  // {e1, e1+e2} fails norm retrieval and m = 2 = 2n-2
  const Frame f = frame_from({{1, 0}, {1, 1}});
  const auto rep = nr_failure_stability_experiment(f, 50, 7);
  CHECK(rep.samples == 50);
  CHECK(rep.hits == 50);
  CHECK(rep.pass);
  CHECK(rep.epsilon > 0);
  // preconditions: too many vectors, or a frame that retrieves norms
  CHECK_THROWS_AS(nr_failure_stability_experiment(frame_from({{1, 0}, {0, 1}, {1, 1}}), 5, 1),
                  PreconditionViolation);
  CHECK_THROWS_AS(nr_failure_stability_experiment(frame_from({{1, 0}, {0, 1}}), 5, 1),
                  PreconditionViolation);
}

TEST_CASE("full spark is generic: random perturbations restore it") {
  // {e1, e2, e1} is degenerate; almost every perturbation is full spark,
  // hence phase retrieving at m = 2n-1
  const Frame f = frame_from({{1, 0}, {0, 1}, {1, 0}});
  const auto rep = full_spark_density_experiment(f, 50, 11);
  CHECK(rep.samples == 50);
  CHECK(rep.hits == rep.samples);
  CHECK(rep.pass);
  CHECK_THROWS_AS(full_spark_density_experiment(frame_from({{1, 0}, {0, 1}}), 5, 1),
                  PreconditionViolation);
}

TEST_CASE("normalization stability bound") {
  const Frame phi = frame_from({{2, 0}, {0, 2}});
  const Frame psi = frame_from({{2, 0}, {1, 2}});  // small tilt on the second vector
  const auto rep = normalization_stability_check(phi, psi, 1.9, 2.4);
  CHECK(rep.all_pass);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].lhs <= rep.checks[0].rhs + 1e-8);
  // the single-vector example 2 e1 vs 2 e1 + 0.1 e2
  Mat a(2, 1), b(2, 1);
  a.set_col(0, {Rat(2), Rat(0)});
  Rat tenth(1, 10);
  b.set_col(0, {Rat(2), tenth});
  const auto rep1 = normalization_stability_check(Frame(2, a), Frame(2, b), 1.9, 2.1);
  CHECK(rep1.all_pass);
  // norms outside the sandwich are rejected
  CHECK_THROWS_AS(normalization_stability_check(phi, psi, 3.0, 4.0), PreconditionViolation);
  CHECK_THROWS_AS(normalization_stability_check(phi, frame_from({{2, 0}}), 1.9, 2.4),
                  DimensionMismatch);
}

TEST_CASE("independent n-sets retrieve norms exactly when orthogonal") {
  const auto rep = riesz_nr_orthogonality_suite(60, 13);
  CHECK(rep.samples == 60);
  CHECK(rep.failures == 0);
  CHECK(rep.pass);
}
