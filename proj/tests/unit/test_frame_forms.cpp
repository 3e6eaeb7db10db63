#include <cmath>

#include "calabi_lab/errors.hpp"
#include "calabi_lab/forms.hpp"
#include "calabi_lab/random.hpp"
#include "calabi_lab/weitzenboeck.hpp"
#include "doctest.h"

using namespace calab;

namespace {

// Slot values of the real covector e^i: e^i(b_s) = g(e_i, b_s).
CVector real_covector(const FrameConvention& f, int i) {
  CVector c(f.slots());
  for (int s = 0; s < f.slots(); ++s) c(s) = f.g(f.e(i), f.basis(s));
  return c;
}

double max_abs(const Form& f) { return f.dim() ? f.coefficients().cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("frame duality and complex structure") {
  for (int n = 1; n <= 4; ++n) {
    FrameConvention f(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        CHECK(std::abs(f.g(f.z(a), f.zbar(b)) - cplx(a == b ? 1.0 : 0.0)) < 1e-15);
        CHECK(std::abs(f.g(f.z(a), f.z(b))) < 1e-15);
      }
    const RMatrix J = f.complex_structure();
    CHECK((J * J + RMatrix::Identity(2 * n, 2 * n)).norm() < 1e-15);
    CHECK((J.transpose() * J - RMatrix::Identity(2 * n, 2 * n)).norm() < 1e-15);
    for (int a = 0; a < n; ++a) CHECK(J(a + n, a) == doctest::Approx(1.0));
    const CMatrix& U = f.real_to_slot();
    CHECK((U.adjoint() * U - CMatrix::Identity(2 * n, 2 * n)).norm() < 1e-14);
  }
}

TEST_CASE("Z_a = (e_a - i J e_a) / sqrt 2") {
  FrameConvention f(3);
  for (int a = 0; a < 3; ++a) CHECK((f.z(a) - (f.e(a) - kI * f.e(a + 3)) / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("norm conventions of wedges and symmetric products") {
  FrameConvention f(2);
  CHECK(tensor_norm_sq(wedge_endo(f, f.e(0), f.e(1))) == doctest::Approx(2.0));
  CHECK(tensor_norm_sq(sym_endo(f, f.e(0), f.e(1))) == doctest::Approx(2.0));
  // e^1 ^ ... ^ e^k has tensor norm k!.
  std::vector<CVector> covs;
  double fact = 1.0;
  for (int k = 1; k <= 4; ++k) {
    covs.push_back(real_covector(f, k - 1));
    fact *= k;
    CHECK(decomposable(f, covs).norm_sq() == doctest::Approx(fact));
  }
}

TEST_CASE("trace splits over the unitary frame") {
  FrameConvention f(3);
  Rng rng(1, 1);
  RMatrix A(6, 6);
  for (auto& x : A.reshaped()) x = rng.normal();
  const CMatrix As = f.slot_to_real().transpose() * A.cast<cplx>() * f.slot_to_real();
  cplx rhs = 0.0;
  for (int a = 0; a < 3; ++a) rhs += As(2 * a, 2 * a + 1) + As(2 * a + 1, 2 * a);
  CHECK(std::abs(rhs - A.trace()) < 1e-13);
}

TEST_CASE("multi-index masks round trip") {
  MultiIndexK K{{0, 2}, {0, 1}};
  const Mask m = mask_of(K);
  CHECK(unbarred_count(m) == 2);
  CHECK(barred_count(m) == 2);
  const MultiIndexK back = multi_index_of(m);
  CHECK(back.I == K.I);
  CHECK(back.J == K.J);
  // Interleaved order: 1 before its barred copy, barred 1 before 2.
  CHECK(slots_of(m) == std::vector<int>{0, 1, 3, 4});
}

TEST_CASE("evaluate_form") {
  SUBCASE("normalized generator at its own indices") {
    FrameConvention f(1);
    const Form phi = Form::generator(f, {{0}, {0}});
    CHECK(std::abs(evaluate_form(phi, {f.z(0), f.zbar(0)}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("repeated argument gives zero") {
    FrameConvention f(2);
    Rng rng(2, 0);
    const Form phi = random_form(f, 1, 1, rng);
    CHECK(std::abs(evaluate_form(phi, {f.z(1), f.z(1)})) < 1e-15);
  }
  SUBCASE("Z^1 ^ Z^2 on swapped arguments") {
    FrameConvention f(2);
    const Form phi = Form::generator(f, {{0, 1}, {}});
    // Z^a is the dual basis covector: Z^a(Z_b) = delta_ab, Z^a(conj Z_b) = 0.
    CHECK(std::abs(evaluate_form(phi, {f.z(1), f.z(0)}) + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(evaluate_form(phi, {f.zbar(1), f.zbar(0)})) < 1e-15);
  }
  SUBCASE("arity mismatch") {
    FrameConvention f(2);
    CHECK_THROWS_AS(evaluate_form(Form::generator(f, {{0}, {1}}), {f.z(0)}), DimensionMismatch);
  }
  SUBCASE("agrees with the insertion chain") {
    FrameConvention f(3);
    Rng rng(3, 0);
    const Form phi = random_form(f, 2, 1, rng);
    const CVector x = f.e(1), y = f.zbar(2), z = f.z(0) + 0.5 * f.e(4);
    const Form ins = insert(z, insert(y, insert(x, phi)));
    // Each insertion carries 1/sqrt(k); the evaluation carries 1/sqrt(k!).
    CHECK(std::abs(ins.coefficients()(0) - evaluate_form(phi, {x, y, z})) < 1e-14);
  }
}

TEST_CASE("endo_act") {
  FrameConvention f(3);
  SUBCASE("Z_a (x) Z_b replaces Z^b by conj Z^a") {
    const EndoC L = tensor_endo(f, f.z(2), f.z(1));
    const Form phi = Form::generator(f, {{1}, {}});
    const Form out = endo_act(L, phi);
    const Form expect = Form::generator(f, {{}, {2}}, -1.0);
    CHECK((out - expect).norm() < 1e-15);
  }
  SUBCASE("S annihilates conj Z^1") {
    const EndoC S = tensor_endo(f, f.z(0), f.z(0));
    CHECK(endo_act(S, Form::generator(f, {{}, {0}})).norm() < 1e-15);
  }
  SUBCASE("symmetric square shifts the bidegree") {
    Rng rng(4, 0);
    const EndoC S = random_sym2_10(f, rng);
    const Form img = endo_act(S, random_form(f, 2, 1, rng));
    const auto pq = img.pure_bidegree(1e-12);
    REQUIRE(pq.has_value());
    CHECK(pq->first == 1);
    CHECK(pq->second == 2);
  }
  SUBCASE("derivation on decomposables") {
    Rng rng(5, 0);
    EndoC L{CMatrix::Zero(6, 6), AlgebraTag::gl};
    for (auto& x : L.m.reshaped()) x = rng.complex_normal();
    CVector a(6), b(6);
    for (int s = 0; s < 6; ++s) {
      a(s) = rng.complex_normal();
      b(s) = rng.complex_normal();
    }
    auto act = [&](const CVector& c) { return CVector(-L.m.transpose() * c); };
    const Form lhs = endo_act(L, decomposable(f, {a, b}));
    const Form rhs = decomposable(f, {act(a), b}) + decomposable(f, {a, act(b)});
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("kaehler bivector") {
  for (int n = 1; n <= 3; ++n) {
    FrameConvention f(n);
    const EndoC w = kaehler_bivector(f);
    CHECK(bivector_norm_sq(w) == doctest::Approx(n));
    CHECK((to_real_matrix(f, w) + f.complex_structure()).norm() < 1e-14);
    Rng rng(6, n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        if (p + q == 0) continue;
        const Form phi = random_form(f, p, q, rng);
        CHECK((endo_act(w, phi) - kI * static_cast<double>(p - q) * phi).norm() < 1e-12 * phi.norm());
      }
  }
}

TEST_CASE("Lefschetz adjoint and primitive projection") {
  FrameConvention f(2);
  SUBCASE("disjoint index sets are primitive") {
    CHECK(lefschetz_adjoint(Form::generator(f, {{0}, {1}})).norm() < 1e-15);
  }
  SUBCASE("low degree gives the zero form") { CHECK(lefschetz_adjoint(Form::generator(f, {{0}, {}})).norm() == 0.0); }
  SUBCASE("Lambda omega is a nonzero constant matching the definition") {
    const Form w = kaehler_form(f);
    const Form lw = lefschetz_adjoint(w);
    REQUIRE(lw.degree() == 0);
    cplx direct = 0.0;
    for (int a = 0; a < 2; ++a) direct += evaluate_form(w, {f.z(a), f.zbar(a)});
    direct *= -kI * 2.0;
    CHECK(std::abs(lw.coefficients()(0) - direct) < 1e-14);
    CHECK(std::abs(lw.coefficients()(0)) > 0.1);
  }
  SUBCASE("projection is idempotent and lands in ker Lambda") {
    Rng rng(7, 0);
    FrameConvention g(3);
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 0}, {3, 0}}) {
      const Form phi = random_form(g, p, q, rng);
      const Form pr = project_primitive(phi);
      CHECK(max_abs(lefschetz_adjoint(pr)) < 1e-12);
      CHECK((project_primitive(pr) - pr).norm() < 1e-12);
      // Orthogonal: the removed part is orthogonal to the kept part.
      CHECK(std::abs(pr.inner(phi - pr)) < 1e-12);
    }
  }
  SUBCASE("the Kaehler form has zero primitive part") { CHECK(project_primitive(kaehler_form(f)).norm() < 1e-12); }
  SUBCASE("primitive (1,1)-forms satisfy the symmetric-square norm formula") {
    Rng rng(8, 0);
    const RealForm psi = RealForm::from_component(project_primitive(random_form(f, 1, 1, rng)));
    const double lhs = norm_phi_g(phi_g(psi.form(), AlgebraTag::sym2_10));
    CHECK(lhs == doctest::Approx(0.25 * (2 * 3 - 2) * psi.norm_sq()).epsilon(1e-12));
  }
}

TEST_CASE("insertion norm identity on random forms") {
  for (int n = 1; n <= 4; ++n) {
    FrameConvention f(n);
    Rng rng(9, n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const int k = p + q;
        if (k < 2 || k > 5) continue;
        const Form phi = random_form(f, p, q, rng);
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) acc += insert(f.z(a), insert(f.zbar(b), phi)).norm_sq();
        CHECK(k * (k - 1) * acc == doctest::Approx(p * q * phi.norm_sq()).epsilon(1e-10));
      }
  }
}

TEST_CASE("real forms") {
  FrameConvention f(3);
  Rng rng(10, 0);
  const Form phi = random_form(f, 2, 1, rng);
  const RealForm psi = RealForm::from_component(phi);
  CHECK(psi.norm_sq() == doctest::Approx(2.0 * phi.norm_sq()));
  CHECK((psi.form().conj() - psi.form()).norm() < 1e-15);
  REQUIRE(psi.bidegree().has_value());
  CHECK(psi.bidegree()->first == 2);
  CHECK(psi.bidegree()->second == 1);
  CHECK_THROWS_AS(RealForm::from_real(phi), NotReal);
  // The real p-form sampler really produces real forms.
  CHECK(random_real_p_form(f, 3, rng).is_real(1e-12));
}
