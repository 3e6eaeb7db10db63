#include <cmath>

#include "calabi_lab/curvature.hpp"
#include "calabi_lab/errors.hpp"
#include "calabi_lab/model_spaces.hpp"
#include "calabi_lab/random.hpp"
#include "calabi_lab/spectral.hpp"
#include "doctest.h"

using namespace calab;

namespace {

std::vector<double> round_sphere(int d) {
  std::vector<double> c(static_cast<std::size_t>(d) * d * d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          c[((i * d + j) * d + k) * d + l] = (i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0);
  return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("round sphere: curvature operator is the identity") {
  FrameConvention f(2);
  const auto R = validate_tensor(f, round_sphere(4));
  CHECK(R.bianchi_validated());
  CHECK(R.residuals().bianchi == 0.0);
  // The operator on unit bivectors e_i ^ e_j / sqrt 2 is R1/2 there.
  const R1R2 ops = r1_r2_operators(R);
  const CMatrix op = 0.5 * ops.r1_wedge2.entries;
  CHECK((op - CMatrix::Identity(op.rows(), op.cols())).cwiseAbs().maxCoeff() < 1e-15);
  // Endomorphism R(X, Y) = X ^ Y.
  const EndoC e = R.endo(f.e(0), f.e(1));
  CHECK((e.m - wedge_endo(f, f.e(0), f.e(1)).m).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("validator") {
  FrameConvention f(2);
  SUBCASE("zero tensor validates") {
    const auto R = validate_tensor(f, std::vector<double>(256, 0.0));
    CHECK(R.bianchi_validated());
    CHECK(R.kaehler_validated());
  }
  SUBCASE("a perturbed entry names the pair symmetry") {
    auto c = round_sphere(4);
    c[((0 * 4 + 1) * 4 + 0) * 4 + 1] += 1e-3;
    try {
      validate_tensor(f, c);
      FAIL("expected a symmetry violation");
    } catch (const SymmetryViolation& e) {
      CHECK(e.identity().find("pair symmetry") != std::string::npos);
      CHECK(e.residual() > 1e-4);
    }
  }
  SUBCASE("wrong size") { CHECK_THROWS_AS(validate_tensor(f, std::vector<double>(10, 0.0)), DimensionMismatch); }
  SUBCASE("round sphere is not Kaehler for n >= 2") {
    const auto R = validate_tensor(f, round_sphere(4));
    CHECK_FALSE(R.kaehler_validated());
    CHECK_THROWS_AS(calabi_from_tensor(R), NotKaehler);
  }
  SUBCASE("random Riemannian tensors satisfy Bianchi") {
    Rng rng(1, 0);
    const auto R = validate_tensor(f, random_riemannian_components(f, rng));
    CHECK(R.bianchi_validated());
  }
}

TEST_CASE("Calabi operator of model spaces") {
  for (int n = 1; n <= 4; ++n) {
    const int m = n * (n + 1) / 2;
    const auto C = calabi_from_tensor(chsc_tensor(n, 1.0)).entries;
    CHECK((C - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(calabi_from_tensor(flat_tensor(n)).entries.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("P1 x P1: the mixed generator is in the kernel") {
    const auto R = product_tensor({chsc_tensor(1, 1.0), chsc_tensor(1, 1.0)});
    const CMatrix C = calabi_from_tensor(R).entries;
    const int mixed = sym2_index(2, 0, 1);
    CHECK(C.col(mixed).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(C.row(mixed).cwiseAbs().maxCoeff() < 1e-14);
    // The basis diagonalizes the operator.
    CHECK((C - CMatrix(C.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Calabi-Vesentini correspondence") {
  for (int n = 2; n <= 4; ++n) {
    const int m = n * (n + 1) / 2;
    FrameConvention f(n);
    Rng rng(2, n);
    for (int t = 0; t < 10; ++t) {
      const CMatrix C = random_hermitian(m, rng);
      const auto R = tensor_from_calabi(f, C);
      CHECK((calabi_from_tensor(R).entries - C).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(R.residuals().bianchi < 1e-12);
      CHECK(R.kaehler_validated());
      const auto back = tensor_from_calabi(f, calabi_from_tensor(R).entries);
      CHECK(max_diff(back.components(), R.components()) < 1e-12);
    }
    CHECK(tensor_from_calabi(f, CMatrix::Zero(m, m)).max_abs() == 0.0);
    CMatrix bad = random_hermitian(m, rng);
    bad(0, 1) += 0.5;
    CHECK_THROWS_AS(tensor_from_calabi(f, bad), NotHermitian);
  }
}

TEST_CASE("R1 and R2 relations") {
  FrameConvention f(2);
  Rng rng(3, 0);
  const auto R = validate_tensor(f, random_riemannian_components(f, rng));
  const R1R2 ops = r1_r2_operators(R);
  const int d = 4;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          auto w = [&](int a, int b) {
            RVector v = RVector::Zero(d * d);
            v(a * d + b) += 1.0;
            v(b * d + a) -= 1.0;
            return v;
          };
          const double g1 = w(k, l).dot(ops.r1_full * w(i, j));
          const double g2 = w(k, l).dot(ops.r2_full * w(i, j));
          CHECK(g1 == doctest::Approx(4.0 * R(i, j, k, l)).epsilon(1e-12));
          CHECK(g2 == doctest::Approx(-0.5 * g1).epsilon(1e-12));
        }
  SUBCASE("Kaehler: R2 on the (1,0) symmetric square is the Calabi operator") {
    const auto K = random_kaehler(3, 4);
    const R1R2 o = r1_r2_operators(K);
    CHECK((o.r2_sym2_10.entries - calabi_from_tensor(K).entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Kaehler symmetries") {
  const auto R = random_kaehler(3, 5);
  const int n = 3;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          const cplx x = R.slot(2 * a, 2 * b + 1, 2 * c, 2 * e + 1);
          CHECK(std::abs(x - R.slot(2 * c, 2 * b + 1, 2 * a, 2 * e + 1)) < 1e-12);
          CHECK(std::abs(x - R.slot(2 * a, 2 * e + 1, 2 * c, 2 * b + 1)) < 1e-12);
          // No (2,0) or (0,2) component in either pair.
          CHECK(std::abs(R.slot(2 * a, 2 * b, 2 * c + 1, 2 * e + 1)) < 1e-12);
        }
}

TEST_CASE("Kaehler operator and its su restriction") {
  SUBCASE("CHSC: omega is an eigenvector with eigenvalue lambda = tr K / n") {
    for (int n = 2; n <= 4; ++n) {
      const auto R = chsc_tensor(n, 1.0);
      const RicciData rd = ricci(R);
      REQUIRE(rd.einstein_lambda.has_value());
      const auto K = kaehler_operator(R);
      CHECK(K.entries.rows() == n * n);
      CVector w = CVector::Zero(n * n);
      for (int a = 0; a < n; ++a) w(a * n + a) = 1.0 / std::sqrt(double(n));
      CHECK((K.entries * w - *rd.einstein_lambda * w).norm() < 1e-12);
      CHECK(*rd.einstein_lambda == doctest::Approx(K.entries.trace().real() / n));
      const auto S = restrict_su(K, rd);
      CHECK(S.entries.rows() == n * n - 1);
      CHECK(S.entries.trace().real() == doctest::Approx((n - 1) * *rd.einstein_lambda));
    }
  }
  SUBCASE("non-Einstein input is refused") {
    const auto R = random_kaehler(3, 6);
    const RicciData rd = ricci(R);
    CHECK_FALSE(rd.einstein_lambda.has_value());
    CHECK_THROWS_AS(restrict_su(kaehler_operator(R), rd), NotEinstein);
  }
  SUBCASE("zero tensor") {
    const auto R = flat_tensor(3);
    const RicciData rd = ricci(R);
    CHECK(rd.scal == 0.0);
    CHECK(restrict_su(kaehler_operator(R), rd).entries.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("su basis is orthonormal and orthogonal to omega") {
    const CMatrix U = su_basis_coefficients(4);
    CHECK((U.adjoint() * U - CMatrix::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-14);
    CVector w = CVector::Zero(16);
    for (int a = 0; a < 4; ++a) w(a * 4 + a) = 0.5;
    CHECK((U.adjoint() * w).norm() < 1e-14);
  }
}

TEST_CASE("Ricci") {
  SUBCASE("CHSC is Einstein with positive lambda") {
    const auto rd = ricci(chsc_tensor(3, 1.0));
    REQUIRE(rd.einstein_lambda.has_value());
    CHECK(*rd.einstein_lambda > 0.0);
    CHECK(rd.scal == doctest::Approx(6.0 * *rd.einstein_lambda));
  }
  SUBCASE("flat factor gives a zero Ricci block") {
    const auto R = product_tensor({chsc_tensor(1, 1.0), flat_tensor(1)});
    const auto rd = ricci(R);
    // Real indices of the flat factor: 1 and 3.
    for (int i : {1, 3})
      for (int j = 0; j < 4; ++j) CHECK(std::abs(rd.ricci(i, j)) < 1e-15);
    CHECK(std::abs(rd.ricci(0, 0)) > 0.1);
  }
  SUBCASE("read off the Calabi matrix") {
    const int n = 3;
    const auto R = random_kaehler(n, 7);
    const CMatrix ric = ricci_from_calabi(n, calabi_from_tensor(R).entries);
    FrameConvention f(n);
    const CMatrix B = f.slot_to_real();
    const CMatrix rs = B.transpose() * ricci(R).ricci.cast<cplx>() * B;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) CHECK(std::abs(ric(a, b) - rs(2 * a, 2 * b + 1)) < 1e-12);
  }
}

TEST_CASE("eigen-expansion of R(Z_a, conj Z_b)") {
  const int n = 3;
  FrameConvention f(n);
  const auto R = random_kaehler(n, 8);
  const Spectrum s = eigensystem(calabi_from_tensor(R).entries);
  const auto pairs = sym2_pairs(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CMatrix rhs = CMatrix::Zero(2 * n, 2 * n);
      for (std::size_t nu = 0; nu < s.size(); ++nu) {
        EndoC Sig{CMatrix::Zero(2 * n, 2 * n), AlgebraTag::sym2_10};
        for (std::size_t mu = 0; mu < pairs.size(); ++mu)
          Sig.m += (*s.eigenvectors)(mu, nu) * sym2_basis_element(f, pairs[mu].first, pairs[mu].second).m;
        rhs -= s.eigenvalues[nu] *
               wedge_endo(f, calab::apply(conj(f, Sig), f.z(a)), calab::apply(Sig, f.zbar(b))).m;
      }
      CHECK((R.endo(f.z(a), f.zbar(b)).m - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("sign-bug hook") {
  const auto R = chsc_tensor(2, 1.0);
  {
    testing::ScopedCalabiSignBug bug;
    CHECK(calabi_from_tensor(R).entries(0, 0).real() == doctest::Approx(-1.0));
  }
  CHECK(calabi_from_tensor(R).entries(0, 0).real() == doctest::Approx(1.0));
}
