#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "beamhop/admm.hpp"
#include "beamhop/baselines.hpp"
#include "beamhop/errors.hpp"
#include "beamhop/metrics.hpp"

using namespace beamhop;

namespace {

Eigen::MatrixXi staircase(int n_c, int n_slot, int n_b) {
  Eigen::MatrixXi x = Eigen::MatrixXi::Zero(n_c, n_slot);
  for (int t = 0; t < n_slot; ++t) {
    for (int k = 0; k < n_b; ++k) {
      x((t * n_b + k) % n_c, t) = 1;
    }
  }
  return x;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("pattern validity checks") {
  Eigen::MatrixXi m(3, 2);
  m << 1, 0, 1, 1, 0, 1;
  const BeamHoppingPattern x(m);
  CHECK(x.capacity_ok(2));
  CHECK_FALSE(x.capacity_ok(1));
  CHECK(x.coverage_ok());
  m(2, 1) = 0;
  CHECK_FALSE(BeamHoppingPattern(m).coverage_ok());
  m(0, 0) = 2;
  CHECK_THROWS_AS(BeamHoppingPattern{m}, DomainError);
}

TEST_CASE("allocation validity") {
  CHECK(allocation_valid(Eigen::Vector3i(1, 2, 3), 4, 2));
  CHECK_FALSE(allocation_valid(Eigen::Vector3i(0, 2, 3), 4, 2));
  CHECK_FALSE(allocation_valid(Eigen::Vector3i(5, 1, 1), 4, 2));
  CHECK_FALSE(allocation_valid(Eigen::Vector3i(4, 4, 1), 4, 2));
}

TEST_CASE("collision avoidance closed form") {
  CHECK(collision_avoidance(0.01, 1000.0, 20, 8) == doctest::Approx(std::pow(1.0 - 0.01 / 160.0, 999.0)));
  CHECK(collision_avoidance(0.3, 1.0, 4, 1) == 1.0);
  CHECK(collision_avoidance(0.01, 500.0, 20, 2) < collision_avoidance(0.01, 500.0, 20, 3));
  CHECK_THROWS_AS(collision_avoidance(0.01, 10.0, 20, 0), DomainError);
  CHECK_THROWS_AS(collision_avoidance(1.0, 10.0, 1, 1), DomainError);
}

TEST_CASE("decoding bound agrees with the explicit double sum") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = oracle::small_scenario(6, 6, 2, seed);
    const BeamHoppingPattern x(staircase(6, 6, 2));
    const DecodingBound d = decoding_success_lower_bound(s, x);
    const Eigen::VectorXd ref = oracle::markov_bound_raw(s, x.matrix());
    CHECK((d.raw - ref).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 6; ++i) {
      CHECK(d.clamped(i) == doctest::Approx(std::clamp(ref(i), 0.0, 1.0)));
    }
  }
}

TEST_CASE("uniform bound equals the bound at the uniform fractional pattern") {
  const Scenario s = oracle::small_scenario(7, 8, 2, 3);
  const Eigen::VectorXd b = (Eigen::VectorXd(7) << 1, 2, 3, 2, 1, 4, 3).finished();
  const Eigen::MatrixXd xu = uniform_start(b, 8);
  const DecodingBound d = decoding_success_lower_bound(s, xu, b);
  CHECK((d.raw - uniform_decoding_lower_bound(s)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heavy interference drives the raw bound negative and the clamp to zero") {
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 1.0, 1.0, 1.0;
  const Scenario s = oracle::custom_scenario({2000.0, 2000.0}, {0.5, 0.5}, g, 1, 2, 1);
  Eigen::MatrixXi m = Eigen::MatrixXi::Ones(2, 1);
  const DecodingBound d = decoding_success_lower_bound(s, BeamHoppingPattern(m));
  CHECK(d.raw(0) < 0.0);
  CHECK(d.clamped(0) == 0.0);
}

TEST_CASE("a cell with no interference margin is flagged infeasible") {
  Eigen::MatrixXd g(2, 2);
  g << 1e-6, 0.1, 0.1, 1.0;
  const Scenario s = oracle::custom_scenario({10.0, 10.0}, {0.1, 0.1}, g, 2, 1);
  CHECK(s.decoding_margin(0) <= 0.0);
  Eigen::MatrixXi m(2, 2);
  m << 1, 0, 0, 1;
  const SuccessReport r = success_lower_bound(s, BeamHoppingPattern(m));
  CHECK(r.decoding_infeasible[0] == 1);
  CHECK(r.decoding_infeasible[1] == 0);
  CHECK(r.p_suc_low(0) == 0.0);
  CHECK_THROWS_AS(quadratic_matrix(s, Eigen::Vector2i(1, 1)), DomainError);
}

TEST_CASE("success report: product form, min, mean and unlit flags") {
  const Scenario s = oracle::small_scenario(5, 4, 2, 9);
  Eigen::MatrixXi m = staircase(5, 4, 2);
  const SuccessReport r = success_lower_bound(s, BeamHoppingPattern(m));
  for (int i = 0; i < 5; ++i) {
    CHECK(r.p_suc_low(i) == doctest::Approx(r.p_a(i) * r.p_d_low(i)).epsilon(1e-14));
  }
  CHECK(r.min == doctest::Approx(r.p_suc_low.minCoeff()));
  CHECK(r.mean == doctest::Approx(r.p_suc_low.mean()));
  CHECK(r.p_suc_low(r.argmin()) == r.min);

  m.row(4).setZero();
  const SuccessReport dark = success_lower_bound(s, BeamHoppingPattern(m));
  CHECK(dark.unilluminated[4] == 1);
  CHECK(dark.p_suc_low(4) == 0.0);
  CHECK(dark.min == 0.0);
}

TEST_CASE("report CSV layout") {
  const Scenario s = oracle::small_scenario(3, 2, 2, 1);
  Eigen::MatrixXi m(3, 2);
  m << 1, 0, 1, 1, 0, 1;
  const std::string csv = report_to_csv(success_lower_bound(s, BeamHoppingPattern(m)));
  CHECK(csv.rfind("# schema: beamhop-report/1\n", 0) == 0);
  CHECK(csv.find("cell_id,p_a,p_d_low_raw,p_d_low,p_suc_low\n") != std::string::npos);
  CHECK(csv.find("# min") != std::string::npos);
  CHECK(csv.find("# mean") != std::string::npos);
}

TEST_CASE("exact decoding matches the enumeration oracle and dominates the bound") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const Scenario s = oracle::random_custom_scenario(rng, 3, 3, 2, 12, 0.05, 0.3);
    const BeamHoppingPattern x(staircase(3, 3, 2));
    const DecodingBound d = decoding_success_lower_bound(s, x);
    for (int i = 0; i < 3; ++i) {
      const double exact = decoding_success_exact_small(s, x, i);
      CHECK(exact == doctest::Approx(oracle::exact_decoding(s, x.matrix(), i)).epsilon(1e-12));
      CHECK(exact >= d.raw(i) - 1e-12);
    }
  }
}

TEST_CASE("exact decoding refuses large instances") {
  const Scenario s = oracle::small_scenario(7, 4, 2, 1);
  CHECK_THROWS_AS(decoding_success_exact_small(s, BeamHoppingPattern(staircase(7, 4, 2)), 0), SizeError);
}

TEST_CASE("quadratic form: shape, PSD and objective identity") {
  const Scenario s = oracle::small_scenario(6, 6, 2, 4);
  const BeamHoppingPattern x(staircase(6, 6, 2));
  const Eigen::VectorXi b = x.row_sums();
  const QuadraticForm q = quadratic_matrix(s, b);
  CHECK(q.g_tilde.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.g - q.g.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.g);
  CHECK(eig.eigenvalues()(0) >= 0.0);
  CHECK(eig.eigenvalues()(0) < 1e-9 * eig.eigenvalues().cwiseAbs().maxCoeff());

  // sum_t x_t^T G_tilde x_t is the P_a-weighted interference sum of the bound
  const SuccessReport r = success_lower_bound(s, x);
  const double weighted_gap = (r.p_a.array() * (1.0 - r.p_d_low_raw.array())).sum();
  const Eigen::MatrixXd xr = x.as_real();
  CHECK(pattern_objective(q.g_tilde, xr) == doctest::Approx(weighted_gap).epsilon(1e-12));
  CHECK(pattern_objective(q.g, xr) ==
        doctest::Approx(weighted_gap + q.shift * static_cast<double>(b.sum())).epsilon(1e-12));
}

TEST_CASE("pattern objective is the column-wise quadratic sum") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(4, 4);
  Eigen::MatrixXd x(4, 3);
  for (int i = 0; i < 16; ++i) {
    g.data()[i] = nd(rng);
  }
  for (int i = 0; i < 12; ++i) {
    x.data()[i] = nd(rng);
  }
  double ref = 0.0;
  for (int t = 0; t < 3; ++t) {
    ref += x.col(t).dot(g * x.col(t));
  }
  CHECK(pattern_objective(g, x) == doctest::Approx(ref).epsilon(1e-13));
}

} // TEST_SUITE
