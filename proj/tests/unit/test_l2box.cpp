#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "beamhop/admm.hpp"
#include "beamhop/bisection.hpp"
#include "beamhop/errors.hpp"
#include "beamhop/l2box.hpp"

using namespace beamhop;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    m.data()[k] = nd(rng);
  }
  return m;
}

Eigen::MatrixXd random_psd(std::mt19937_64& rng, int n) {
  const Eigen::MatrixXd m = random_matrix(rng, n, n);
  return m * m.transpose() / n;
}

bool on_sphere(const Eigen::MatrixXd& x, double tol = 1e-9) {
  return std::abs((x.array() - 0.5).matrix().norm() - std::sqrt(static_cast<double>(x.size())) / 2.0) < tol;
}

L2BoxState random_state(std::mt19937_64& rng, int n_c, int n_slot, double rho1, double rho2, double rho3) {
  L2BoxState st = L2BoxState::start(random_matrix(rng, n_c, n_slot), rho1);
  st.z1 = random_matrix(rng, n_c, n_slot);
  st.z2 = random_matrix(rng, n_c, n_slot);
  st.y1 = random_matrix(rng, n_c, n_slot);
  st.y2 = random_matrix(rng, n_c, n_slot);
  st.y3 = random_matrix(rng, n_slot, 1);
  st.y4 = random_matrix(rng, n_c, 1);
  st.rho2 = rho2;
  st.rho3 = rho3;
  return st;
}

} // namespace

TEST_SUITE("l2box") {

TEST_CASE("box projection clamps") {
  Eigen::MatrixXd m(1, 4);
  m << -1.0, 0.3, 1.0, 2.5;
  Eigen::MatrixXd ref(1, 4);
  ref << 0.0, 0.3, 1.0, 1.0;
  CHECK(project_box(m) == ref);
}

TEST_CASE("sphere projection lands on the sphere and keeps direction") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd m = random_matrix(rng, 3, 4, 3.0);
    const Eigen::MatrixXd p = project_sphere(m);
    CHECK(on_sphere(p));
    const Eigen::MatrixXd dm = m.array() - 0.5;
    const Eigen::MatrixXd dp = p.array() - 0.5;
    CHECK(dm.cwiseProduct(dp).sum() == doctest::Approx(dm.norm() * dp.norm()).epsilon(1e-12));
  }
  const Eigen::MatrixXd centre = Eigen::MatrixXd::Constant(2, 3, 0.5);
  const Eigen::MatrixXd p = project_sphere(centre);
  CHECK(on_sphere(p));
  CHECK(p(0, 0) > 0.5);
}

TEST_CASE("every binary matrix lies on box and sphere") {
  for (int mask = 0; mask < (1 << 12); ++mask) {
    Eigen::MatrixXd x(3, 4);
    for (int k = 0; k < 12; ++k) {
      x.data()[k] = (mask >> k) & 1;
    }
    REQUIRE(on_sphere(x, 1e-12));
    REQUIRE(project_box(x) == x);
  }
}

TEST_CASE("ADMM update is the zero-coupling special case") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n_c = 3 + trial % 4;
    const int n_slot = 2 + trial % 3;
    const Eigen::MatrixXd g = random_psd(rng, n_c);
    L2BoxState st = random_state(rng, n_c, n_slot, 0.7, 1.3, 0.0);
    st.y3.setZero();
    st.y4.setZero();
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n_c);
    const Eigen::MatrixXd ref = x_update(st.z1, st.z2, st.y1, st.y2, g, st.rho1, st.rho2);
    CHECK((x_update_sylvester(st, g, b, 1) - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Sylvester X-update is stationary for the penalized Lagrangian") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_c = 2 + trial % 6;
    const int n_slot = 2 + trial % 5;
    const int n_b = 1 + trial % n_c;
    const Eigen::MatrixXd g = random_psd(rng, n_c);
    Eigen::VectorXd b = Eigen::VectorXd::Constant(n_c, static_cast<double>(n_slot * n_b) / n_c);
    const double rho = 0.1 + 0.2 * trial;
    const L2BoxState st = random_state(rng, n_c, n_slot, rho, rho, rho);
    const Eigen::MatrixXd x = x_update_sylvester(st, g, b, n_b);
    const auto f = [&](const Eigen::MatrixXd& p) {
      return oracle::l2box_lagrangian(p, g, st.z1, st.z2, st.y1, st.y2, st.y3, st.y4, st.rho1, st.rho2, st.rho3, b,
                                      n_b);
    };
    CHECK(oracle::numeric_gradient(f, x).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("structured and Bartels-Stewart iterations agree") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd g = random_psd(rng, 6);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(6, 2.0);
  L2BoxState a = L2BoxState::start(uniform_start(b, 4) + random_matrix(rng, 6, 4, 0.1), 0.3);
  L2BoxState c = a;
  const StructuredSylvesterSolver solver(g);
  for (int k = 0; k < 10; ++k) {
    const double ra = l2box_iteration(a, g, b, 3, &solver);
    const double rc = l2box_iteration(c, g, b, 3);
    CHECK(ra < 1e-10);
    CHECK(rc < 1e-10);
  }
  CHECK((a.x - c.x).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(a.iteration == 10);
}

TEST_CASE("zero objective leaves a feasible binary start in place") {
  const Eigen::VectorXd b = (Eigen::VectorXd(4) << 2, 2, 1, 1).finished();
  L2BoxConfig cfg;
  cfg.x0 = staggered_start(b, 3, 2);
  cfg.iterations = 40;
  const L2BoxResult r = solve_l2box(Eigen::MatrixXd::Zero(4, 4), b, 2, cfg);
  CHECK(r.x_binary == cfg.x0->cast<int>());
  CHECK((r.x_relaxed - *cfg.x0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("solver output on a generated instance") {
  const Scenario s = generate_scenario(GeneratorConfig::desk());
  const Eigen::VectorXi bi = bisect(s, uniform_decoding_lower_bound(s)).b;
  const QuadraticForm q = quadratic_matrix(s, bi);
  const Eigen::VectorXd b = bi.cast<double>();
  const L2BoxResult r = solve_l2box(q.g, b, s.n_b());
  CHECK(meets_sum_constraints(r.x_binary.cast<double>(), b, s.n_b()));
  CHECK(r.max_sylvester_residual_ratio < 1e-8);
  CHECK(r.trace.size() == 300);
  CHECK(r.trace.front().sylvester_residual < 1e-8);

  L2BoxConfig bs;
  bs.path = SylvesterPath::bartels_stewart;
  bs.iterations = 30;
  CHECK(solve_l2box(q.g, b, s.n_b(), bs).max_sylvester_residual_ratio < 1e-8);
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(solve_l2box(Eigen::MatrixXd::Zero(3, 3), Eigen::Vector2d(1, 1), 1), DomainError);
}

} // TEST_SUITE
