#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sdlab/assembly.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/frac_interface.hpp"
#include "sdlab/mms.hpp"

using namespace sdlab;

namespace {

struct Setup {
  Mesh mesh;
  BlockLayout layout;
  EssentialDofs essential;
};

Setup stacked(int n0, int nref, BcConfig config) {
  DomainSpec s = mms_domain(n0);
  Setup out;
  out.mesh = tag_boundaries(build_coupled_mesh(s, nref), config);
  out.layout = build_layout(out.mesh);
  out.essential = essential_dofs(out.layout, out.mesh);
  return out;
}

double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("operator matches the independent quadrature oracle on the n0 = 1 mesh") {
  for (BcConfig c : {BcConfig::NE, BcConfig::EN}) {
    const Setup s = stacked(1, 0, c);
    PhysParams p;
    p.mu = 3.0;
    p.K = 0.5;
    p.alpha_bjs = 0.7;
    const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_operator_raw(s.mesh, s.layout, p));
    const Eigen::MatrixXd R = oracle::operator_matrix(s.mesh, s.layout, p);
    CHECK(max_abs(A - R) / max_abs(R) < 1e-12);
  }
  // A second, finer check with every block populated.
  const Setup s = stacked(2, 0, BcConfig::NN);
  PhysParams p;
  const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_operator_raw(s.mesh, s.layout, p));
  CHECK(max_abs(A - oracle::operator_matrix(s.mesh, s.layout, p)) / max_abs(A) < 1e-12);
}

TEST_CASE("operator is exactly symmetric") {
  for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NE, BcConfig::EN, BcConfig::NEstar, BcConfig::ENstar}) {
    const Setup s = stacked(4, 1, c);
    PhysParams p;
    p.mu = 1e-2;
    p.K = 1e3;
    const SparseMatrix A = assemble_operator(s.mesh, s.layout, p, s.essential);
    const SparseMatrix At = A.transpose();
    CHECK((A - At).norm() == 0.0);
  }
}

TEST_CASE("rigid translations have zero viscous energy") {
  const Setup s = stacked(2, 0, BcConfig::NN);
  PhysParams p;
  const SparseMatrix A = assemble_operator_raw(s.mesh, s.layout, p);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(s.layout.total);
  for (int n = 0; n < s.layout.p2_nodes; ++n) v[s.layout.velocity_s(n, 0)] = 1.0;
  // Only the BJS term on the interface survives for a tangential translation.
  Eigen::VectorXd Av = A * v;
  const double energy = v.dot(Av);
  CHECK(energy == doctest::Approx(p.beta_tau() * 1.0));
  // Against constant pressure the divergence row vanishes.
  double bp = 0.0;
  for (int i = s.layout.begin(PressureS); i < s.layout.end(PressureS); ++i) bp += Av[i];
  CHECK(std::abs(bp) < 1e-13);
}

TEST_CASE("single-facet coupling entry") {
  const Setup s = stacked(4, 0, BcConfig::NE);
  const SparseMatrix A = assemble_operator_raw(s.mesh, s.layout, PhysParams{});
  const auto& gf = s.mesh.interface.facets[0];
  const int rt = s.layout.offset[VelocityD] + s.layout.rt_of_facet[gf.facet];
  CHECK(A.coeff(rt, s.layout.offset[Multiplier]) == doctest::Approx(0.25));
}

TEST_CASE("EE null vector and NE near-null vector") {
  PhysParams p;
  p.mu = 2.0;
  p.K = 0.3;
  SUBCASE("EE") {
    const Setup s = stacked(4, 1, BcConfig::EE);
    const SparseMatrix A = assemble_operator(s.mesh, s.layout, p, s.essential);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(s.layout.total);
    z.segment(s.layout.begin(PressureS), s.layout.total - s.layout.begin(PressureS)).setOnes();
    const double scale = Eigen::MatrixXd(A).cwiseAbs().maxCoeff();
    CHECK((A * z).norm() < 1e-13 * scale);
  }
  SUBCASE("NE") {
    const Setup s = stacked(4, 1, BcConfig::NE);
    const SparseMatrix A = assemble_operator(s.mesh, s.layout, p, s.essential);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(s.layout.total);
    w.segment(s.layout.begin(PressureD), s.layout.size[PressureD]).setOnes();
    w.segment(s.layout.begin(Multiplier), s.layout.size[Multiplier]).setOnes();
    const Eigen::VectorXd Aw = A * w;
    CHECK(Aw.segment(s.layout.begin(VelocityD), s.layout.size[VelocityD]).norm() < 1e-13);
    CHECK(Aw.segment(s.layout.begin(VelocityS), s.layout.size[VelocityS]).norm() > 0.1);
  }
}

TEST_CASE("Darcy divergence rows are cellwise exact") {
  const Setup s = stacked(4, 0, BcConfig::NE);
  const SparseMatrix A = assemble_operator_raw(s.mesh, s.layout, PhysParams{});
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(s.layout.total);
  for (int i = s.layout.begin(VelocityD); i < s.layout.end(VelocityD); ++i) u[i] = g(rng);
  const Eigen::VectorXd Au = A * u;
  for (int k = 0; k < s.layout.size[PressureD]; ++k) {
    const int c = s.layout.p0_cell[k];
    const RTCell e = rt_cell(s.mesh, s.layout, c);
    double div = 0.0;
    for (int j = 0; j < 3; ++j) div += u[s.layout.offset[VelocityD] + e.dof[j]] * e.divergence(j);
    CHECK(Au[s.layout.offset[PressureD] + k] == doctest::Approx(-div * e.area).epsilon(1e-12));
  }
}

TEST_CASE("Riesz map blocks") {
  SUBCASE("Stokes block equals the operator block for mu = K = 1 and beta = 1") {
    const Setup s = stacked(4, 0, BcConfig::NE);
    PhysParams p;
    p.alpha_bjs = 1.0;
    CHECK(p.beta_tau() == 1.0);
    const InterfaceOperator op(s.mesh.interface, BcConfig::NE, p);
    const SparseMatrix A = assemble_operator(s.mesh, s.layout, p, s.essential);
    const SparseMatrix N = assemble_riesz(s.mesh, s.layout, p, s.essential, op.matrix());
    const SparseMatrix d = block(A, s.layout, VelocityS, VelocityS) - block(N, s.layout, VelocityS, VelocityS);
    CHECK(d.norm() == doctest::Approx(0.0));
  }
  SUBCASE("P0 block is K times the cell areas; P1 block matches the oracle") {
    const Setup s = stacked(1, 0, BcConfig::NE);
    PhysParams p;
    p.mu = 0.7;
    p.K = 5.0;
    const InterfaceOperator op(s.mesh.interface, BcConfig::NE, p);
    const SparseMatrix N = assemble_riesz(s.mesh, s.layout, p, s.essential, op.matrix());
    const Eigen::MatrixXd pd = Eigen::MatrixXd(block(N, s.layout, PressureD, PressureD));
    CHECK(pd(0, 0) == doctest::Approx(2.5));
    CHECK(pd(1, 1) == doctest::Approx(2.5));
    CHECK(pd(0, 1) == 0.0);
    const Eigen::MatrixXd ref = oracle::pressure_riesz(s.mesh, s.layout, p);
    const Eigen::MatrixXd ps = Eigen::MatrixXd(block(N, s.layout, PressureS, PressureS));
    const int o = s.layout.offset[PressureS], n = s.layout.size[PressureS];
    CHECK(max_abs(ps - ref.block(o, o, n, n)) / max_abs(ps) < 1e-13);
  }
  SUBCASE("all blocks are SPD over the parameter grid") {
    for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NE, BcConfig::EN}) {
      const Setup s = stacked(4, 0, c);
      for (double mu : {1e-4, 1.0, 1e4}) {
        for (double K : {1e-4, 1.0, 1e4}) {
          PhysParams p;
          p.mu = mu;
          p.K = K;
          const InterfaceOperator op(s.mesh.interface, c, p);
          CHECK_NOTHROW(assemble_riesz(s.mesh, s.layout, p, s.essential, op.matrix()));
        }
      }
    }
  }
}

TEST_CASE("block scalings are linear in the parameters") {
  const Setup s = stacked(4, 0, BcConfig::NE);
  PhysParams p;
  p.mu = 0.3;
  p.K = 2.0;
  PhysParams q = p;
  q.mu *= 10.0;
  q.K *= 10.0;  // beta_tau unchanged
  const SparseMatrix A = assemble_operator_raw(s.mesh, s.layout, p);
  const SparseMatrix B = assemble_operator_raw(s.mesh, s.layout, q);
  const Eigen::MatrixXd ad = Eigen::MatrixXd(block(A, s.layout, VelocityD, VelocityD));
  const Eigen::MatrixXd bd = Eigen::MatrixXd(block(B, s.layout, VelocityD, VelocityD));
  CHECK(max_abs(ad - 10.0 * bd) / max_abs(ad) < 1e-14);
  PhysParams r = p;
  r.alpha_bjs = 1e-300;  // drop the BJS term
  const Eigen::MatrixXd as = Eigen::MatrixXd(block(assemble_operator_raw(s.mesh, s.layout, r), s.layout, VelocityS, VelocityS));
  r.mu *= 4.0;
  const Eigen::MatrixXd bs = Eigen::MatrixXd(block(assemble_operator_raw(s.mesh, s.layout, r), s.layout, VelocityS, VelocityS));
  CHECK(max_abs(4.0 * as - bs) / max_abs(bs) < 1e-14);
}

TEST_CASE("right-hand side") {
  const Setup s = stacked(1, 0, BcConfig::NE);
  SUBCASE("zero data gives a zero vector") {
    CHECK(assemble_rhs(s.mesh, s.layout, PhysParams{}, LoadData{}, s.essential).norm() == 0.0);
  }
  SUBCASE("unit Darcy source hits the p_D rows with the cell areas") {
    LoadData d;
    d.g_D = [](Point) { return 1.0; };
    const Eigen::VectorXd b = assemble_load(s.mesh, s.layout, d);
    CHECK(b[s.layout.offset[PressureD]] == doctest::Approx(-0.5));
    CHECK(b[s.layout.offset[PressureD] + 1] == doctest::Approx(-0.5));
    CHECK(b.norm() == doctest::Approx(std::sqrt(0.5)));
  }
  SUBCASE("manufactured data matches the quadrature oracle") {
    const Setup t = stacked(4, 0, BcConfig::NE);
    PhysParams p;
    p.mu = 3.0;
    LoadData d = mms_sources(p);
    d.traction = nullptr;
    d.darcy_pressure = nullptr;
    d.degree = 20;
    const Eigen::VectorXd b = assemble_load(t.mesh, t.layout, d);
    const Eigen::VectorXd r = oracle::load(t.mesh, t.layout, d);
    CHECK((b - r).norm() / r.norm() < 1e-10);
  }
}
