#include <cmath>
#include <random>

#include "doctest.h"
#include "sdlab/experiments.hpp"
#include "sdlab/precond.hpp"

using namespace sdlab;

namespace {

BlockLayout stub_layout(std::array<int, kFieldCount> sizes) {
  BlockLayout L;
  L.size = sizes;
  for (int f = 0; f < kFieldCount; ++f) {
    L.offset[f] = L.total;
    L.total += sizes[f];
  }
  return L;
}

// Random SPD blocks on the diagonal of the layout.
SparseMatrix random_block_spd(const BlockLayout& L, std::mt19937& rng) {
  std::normal_distribution<double> g;
  std::vector<Eigen::Triplet<double>> t;
  for (int f = 0; f < kFieldCount; ++f) {
    const int n = L.size[f];
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = g(rng);
    const Eigen::MatrixXd S = R * R.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t.emplace_back(L.offset[f] + i, L.offset[f] + j, S(i, j));
  }
  SparseMatrix N(L.total, L.total);
  N.setFromTriplets(t.begin(), t.end());
  return N;
}

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("identity stub") {
  const BlockLayout L = stub_layout({2, 2, 2, 2, 2});
  SparseMatrix I(L.total, L.total);
  I.setIdentity();
  const BlockPreconditioner bp(I, L);
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(L.total, 0, 1);
  CHECK((bp.apply(r) - r).norm() == 0.0);
}

TEST_CASE("block inverse on a random SPD stub") {
  std::mt19937 rng(4);
  const BlockLayout L = stub_layout({3, 2, 2, 2, 1});
  CHECK(L.total == 10);
  const SparseMatrix N = random_block_spd(L, rng);
  const BlockPreconditioner bp(N, L);
  const Eigen::VectorXd x = random_vector(L.total, rng);
  CHECK((bp.apply(N * x) - x).norm() / x.norm() < 1e-12);
}

TEST_CASE("rank-one deflation by hand") {
  const BlockLayout L = stub_layout({2, 2, 2, 2, 2});
  SparseMatrix I(L.total, L.total);
  I.setIdentity();
  const BlockPreconditioner bp(I, L);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(L.total, 1);
  for (int i = 6; i < 10; ++i) w(i, 0) = 1.0;  // |w|^2 = 4
  const Deflation d = build_deflation(I, w, 1.0);
  CHECK(d.E(0, 0) == doctest::Approx(4.0));
  std::mt19937 rng(8);
  const Eigen::VectorXd r = random_vector(L.total, rng);
  const Eigen::VectorXd z = apply_deflated(bp, d, r);
  const Eigen::VectorXd ref = r + w.col(0) * (w.col(0).dot(r)) / 4.0;
  CHECK((z - ref).norm() < 1e-14);

  Deflation empty = build_deflation(I, Eigen::MatrixXd::Zero(L.total, 0), 1.0);
  CHECK((apply_deflated(bp, empty, r) - r).norm() == 0.0);
}

TEST_CASE("deflated preconditioner is symmetric positive definite and inverted by the Woodbury form") {
  std::mt19937 rng(6);
  const BlockLayout L = stub_layout({4, 3, 3, 3, 2});
  const SparseMatrix N = random_block_spd(L, rng);
  const BlockPreconditioner bp(N, L);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(L.total, 2);
  P.block(L.offset[PressureD], 0, 3, 1).setOnes();
  P.block(L.offset[Multiplier], 1, 2, 1).setOnes();
  const Deflation d = build_deflation(N, P, 0.3);
  const Eigen::VectorXd r1 = random_vector(L.total, rng), r2 = random_vector(L.total, rng);
  CHECK(apply_deflated(bp, d, r1).dot(r2) == doctest::Approx(r1.dot(apply_deflated(bp, d, r2))).epsilon(1e-12));
  CHECK(r1.dot(apply_deflated(bp, d, r1)) > 0.0);
  const Eigen::MatrixXd W = deflated_riesz_dense(N, d);
  const Eigen::VectorXd x = random_vector(L.total, rng);
  CHECK((apply_deflated(bp, d, W * x) - x).norm() / x.norm() < 1e-10);
}

TEST_CASE("deflation vectors per configuration") {
  auto problem = [](BcConfig c, int nref) {
    DomainSpec s = mms_domain(1);
    Mesh m = tag_boundaries(build_coupled_mesh(s, nref), c);
    return std::pair{m, build_layout(m)};
  };
  PhysParams p;
  p.mu = 10.0;
  p.K = 10.0;
  SUBCASE("NE on n0 = 1") {
    const auto [m, L] = problem(BcConfig::NE, 0);
    const auto dv = deflation_vectors(L, BcConfig::NE, p);
    REQUIRE(dv.P.cols() == 1);
    CHECK(dv.P.sum() == 3.0);
    CHECK(dv.P(L.offset[PressureD], 0) == 1.0);
    CHECK(dv.P(L.offset[PressureD] + 1, 0) == 1.0);
    CHECK(dv.P(L.offset[Multiplier], 0) == 1.0);
    CHECK(dv.gamma == doctest::Approx(1e-2));
  }
  SUBCASE("EN") {
    const auto [m, L] = problem(BcConfig::EN, 0);
    const auto dv = deflation_vectors(L, BcConfig::EN, p);
    REQUIRE(dv.P.cols() == 1);
    CHECK(dv.P.col(0).segment(L.offset[PressureS], L.size[PressureS]).sum() == L.size[PressureS]);
    CHECK(dv.P.col(0).segment(L.offset[Multiplier], L.size[Multiplier]).sum() == L.size[Multiplier]);
    CHECK(dv.P.sum() == L.size[PressureS] + L.size[Multiplier]);
    CHECK(dv.gamma == doctest::Approx(100.0));
  }
  SUBCASE("robust configurations have none") {
    for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NEstar, BcConfig::ENstar}) {
      const auto [m, L] = problem(c, 0);
      CHECK(deflation_vectors(L, c, p).P.cols() == 0);
    }
  }
  SUBCASE("two inclusions give disjoint columns") {
    Mesh m = tag_boundaries(build_coupled_mesh(floating_domain(2), 1), BcConfig::MultiInclusion);
    const BlockLayout L = build_layout(m);
    const auto dv = deflation_vectors(L, BcConfig::MultiInclusion, p);
    REQUIRE(dv.P.cols() == 2);
    CHECK(dv.P.col(0).dot(dv.P.col(1)) == 0.0);
    CHECK(dv.P.block(0, 0, L.offset[PressureD], 2).norm() == 0.0);
  }
  SUBCASE("gamma scales exactly with mu K") {
    const auto [m, L] = problem(BcConfig::NE, 0);
    PhysParams q = p;
    q.K *= 100.0;
    CHECK(1.0 / deflation_vectors(L, BcConfig::NE, q).gamma ==
          doctest::Approx(100.0 / deflation_vectors(L, BcConfig::NE, p).gamma));
  }
}

TEST_CASE("B applied to the assembled Riesz map is the identity") {
  for (BcConfig c : {BcConfig::NN, BcConfig::EN}) {
    PhysParams p;
    p.mu = 1e-3;
    p.K = 1e2;
    const Problem pr = build_mms_problem(c, p, 1);
    const BlockPreconditioner bp(pr.N, pr.layout, pr.iface);
    std::mt19937 rng(12);
    const Eigen::VectorXd x = random_vector(pr.layout.total, rng);
    CHECK((bp.apply(pr.N * x) - x).norm() / x.norm() < 1e-10);
  }
}
