#include "framelab/perturbation.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace framelab {

namespace {

double op_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double smallest_sv(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& b) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  return qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
}

void add_check(BoundReport& rep, const std::string& name, double lhs, double rhs, double slack) {
  const bool pass = lhs <= rhs + slack;
  rep.checks.push_back({name, lhs, rhs, pass});
  rep.all_pass = rep.all_pass && pass;
}

}  // namespace

BoundReport build_s_operator(const PerturbationSetup& setup, double slack, int unit_samples,
                             std::uint64_t seed) {
  const int n = int(setup.x_basis.rows());
  const int d = int(setup.x_basis.cols());
  if (setup.y_basis.rows() != n || setup.y_basis.cols() != d)
    throw DimensionMismatch("X and Y must have equal dimension");
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd ox = orthonormalize(setup.x_basis);
  const Eigen::MatrixXd oy = orthonormalize(setup.y_basis);
  const Eigen::MatrixXd p = ox * ox.transpose();

  BoundReport rep;
  rep.epsilon = op_norm((id - setup.t) * p);
  const double eps = rep.epsilon;
  if (eps >= 1.0) throw PreconditionViolation("||I-T|| on X must be below 1");

  const Eigen::MatrixXd s = setup.t * p + (id - p);
  const Eigen::MatrixXd sinv = s.fullPivLu().inverse();
  const Eigen::MatrixXd q = s * p * sinv;

  add_check(rep, "norm(I-S) <= eps", op_norm(id - s), eps, slack);
  add_check(rep, "norm(S) <= 1+eps", op_norm(s), 1 + eps, slack);
  add_check(rep, "norm(S^-1) <= 1/(1-eps)", op_norm(sinv), 1 / (1 - eps), slack);
  add_check(rep, "norm(I-S^-1) <= eps/(1-eps)", op_norm(id - sinv), eps / (1 - eps), slack);
  add_check(rep, "Q idempotent", op_norm(q * q - q), 0, slack);
  add_check(rep, "range(Q) = Y", op_norm((id - oy * oy.transpose()) * q) +
                                     op_norm(q * oy - oy),
            0, slack);
  add_check(rep, "norm(P-Q) <= 2eps/(1-eps)", op_norm(p - q), 2 * eps / (1 - eps), slack);
  add_check(rep, "norm(P-Q) <= (1+eps^2)/(1-eps)", op_norm(p - q), (1 + eps * eps) / (1 - eps),
            slack);

  // Orthonormal basis of the complement of X, from the projector I - P.
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(id - p, Eigen::ComputeFullU);
  const Eigen::MatrixXd oc = csvd.matrixU().leftCols(n - d);
  add_check(rep, "norm(Q x) <= eps, x perp X", op_norm(q * oc), eps, slack);
  add_check(rep, "norm((I-Q)x) >= (1-eps), x perp X", 1 - eps, smallest_sv((id - q) * oc), slack);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0;
  for (int s_i = 0; s_i < unit_samples && n - d > 0; ++s_i) {
    Eigen::VectorXd g(n - d);
    for (int i = 0; i < n - d; ++i) g(i) = gauss(rng);
    if (g.norm() < 1e-12) continue;
    Eigen::VectorXd x = oc * (g / g.norm());
    Eigen::VectorXd r = (id - q) * x;
    worst = std::max(worst, (x - r / r.norm()).norm());
  }
  add_check(rep, "unit x perp X stays 2eps/(1-eps)-close to unit complement of Y", worst,
            2 * eps / (1 - eps), slack);
  return rep;
}

PerturbationSetup random_setup(int n, int d, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto randm = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
    return m;
  };
  PerturbationSetup setup;
  const Eigen::MatrixXd ox = orthonormalize(randm(n, d));
  const Eigen::MatrixXd dir = randm(n, d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  // Large Gaussian bumps (or a pivot sign flip inside QR) can push
  // ||I-T|| on X to 1 or beyond; shrink until the contract holds.
  for (double s = scale;; s *= 0.5) {
    Eigen::MatrixXd oy = orthonormalize(ox + s * dir);
    // QR may flip column signs; re-align so T tends to I as s shrinks
    for (int j = 0; j < d; ++j)
      if (oy.col(j).dot(ox.col(j)) < 0) oy.col(j) = -oy.col(j);
    // T maps the orthonormal basis of X onto the matched basis of Y and is
    // the identity off X; only the action on X enters S.
    const Eigen::MatrixXd t = oy * ox.transpose() + (id - ox * ox.transpose());
    if (op_norm((id - t) * (ox * ox.transpose())) < 0.95) {
      setup.x_basis = ox;
      setup.y_basis = oy;
      setup.t = t;
      return setup;
    }
  }
}

ExperimentReport nr_failure_stability_experiment(const Frame& f, std::uint64_t samples,
                                                 std::uint64_t seed, const SweepOptions& opt) {
  const int n = f.dim, m = f.count();
  if (m > 2 * n - 2) throw PreconditionViolation("experiment requires m <= 2n-2");
  const Decision d = does_norm_retrieval(f, opt);
  if (d.verdict != Verdict::CertifiedNo)
    throw PreconditionViolation("frame must fail norm retrieval");

  // delta from the witness: unit-normalize x, y and flip the sign of y so
  // the pair sits strictly inside sqrt(2) distance.
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x(i) = to_double(d.nr_witness->x[i]);
    y(i) = to_double(d.nr_witness->y[i]);
  }
  x.normalize();
  y.normalize();
  if (x.dot(y) < 0) y = -y;
  const double delta = std::sqrt(2.0) - (x - y).norm();
  // 2 eps/(1-eps) < delta/3  <=>  eps < delta/(6+delta)
  const double eps_target = 0.99 * delta / (6.0 + delta);
  Rat eps(long(std::floor(eps_target * 1e6)), 1000000);
  eps.canonicalize();

  ExperimentReport rep;
  rep.epsilon = to_double(eps);
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (std::uint64_t s = 0; s < samples; ++s) {
    // integer directions, exactly rescaled so the 1-norm total (an upper
    // bound on the 2-norm total) stays below eps
    Mat pert(n, m);
    Rat total_l1 = 0;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) {
        pert(i, j) = dist(rng);
        total_l1 += abs(pert(i, j));
      }
    if (total_l1 == 0) total_l1 = 1;
    const Rat scale = eps / (2 * total_l1);
    const Frame perturbed(n, f.vectors + pert.scaled(scale));
    if (does_norm_retrieval(perturbed, opt).verdict == Verdict::CertifiedNo) ++rep.hits;
  }
  rep.pass = rep.hits == rep.samples;
  return rep;
}

ExperimentReport full_spark_density_experiment(const Frame& f, std::uint64_t samples,
                                               std::uint64_t seed, long grid_den,
                                               const SweepOptions& opt) {
  const int n = f.dim, m = f.count();
  if (m < 2 * n - 1) throw PreconditionViolation("experiment requires m >= 2n-1");
  ExperimentReport rep;
  rep.samples = samples;
  rep.epsilon = 1.0 / double(grid_den);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-(grid_den - 1), grid_den - 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    Mat pert(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) {
        Rat r(dist(rng), grid_den);
        r.canonicalize();  // mpq_class(p, q) does not reduce on its own
        pert(i, j) = r;
      }
    const Frame perturbed(n, f.vectors + pert);
    if (is_full_spark(perturbed, opt).full_spark) ++rep.hits;
  }
  rep.pass = rep.hits == rep.samples;
  return rep;
}

BoundReport normalization_stability_check(const Frame& phi, const Frame& psi, double a, double b,
                                          double slack) {
  if (phi.dim != psi.dim || phi.count() != psi.count())
    throw DimensionMismatch("families must match in size");
  const Eigen::MatrixXd fp = to_float(phi.vectors);
  const Eigen::MatrixXd fq = to_float(psi.vectors);
  double lhs = 0, delta = 0;
  for (int j = 0; j < phi.count(); ++j) {
    const double np = fp.col(j).norm(), nq = fq.col(j).norm();
    if (np < a - slack || np > b + slack || nq < a - slack || nq > b + slack)
      throw PreconditionViolation("norms outside the [A, B] sandwich");
    lhs += (fp.col(j) / np - fq.col(j) / nq).norm();
    delta += (fp.col(j) - fq.col(j)).norm();
  }
  BoundReport rep;
  const double rhs = 2 * b / (a * a) * delta;
  const bool pass = lhs <= rhs + slack;
  rep.checks.push_back({"sum norm(phi_hat - psi_hat) <= (2B/A^2) sum norm(phi - psi)", lhs, rhs,
                        pass});
  rep.all_pass = pass;
  return rep;
}

SuiteReport riesz_nr_orthogonality_suite(std::uint64_t samples, std::uint64_t seed,
                                         const SweepOptions& opt) {
  SuiteReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(2, 5);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_int_distribution<int> which(0, 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const int n = dim_dist(rng);
    Mat v(n, n);
    if (which(rng) == 0) {
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) v(i, j) = entry(rng);
      } while (rank(v) < n);
    } else {
      // near-orthogonal family e_i + x_i with small rational bumps
      v = Mat::identity(n);
      do {
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            Rat bump(small(rng), 100);
            bump.canonicalize();
            v(i, j) = (i == j ? Rat(1) : Rat(0)) + bump;
          }
      } while (rank(v) < n);
    }
    const Frame f(n, v);
    const Mat gram = v.transpose() * v;
    bool diagonal = true;
    for (int i = 0; i < n && diagonal; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && gram(i, j) != 0) { diagonal = false; break; }
    const bool nr = does_norm_retrieval(f, opt).verdict == Verdict::CertifiedYes;
    ++rep.samples;
    if (nr != diagonal) ++rep.failures;
  }
  rep.pass = rep.failures == 0;
  return rep;
}

}  // namespace framelab
