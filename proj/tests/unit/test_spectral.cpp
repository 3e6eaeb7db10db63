#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "calabi_lab/errors.hpp"
#include "calabi_lab/random.hpp"
#include "calabi_lab/spectral.hpp"
#include "doctest.h"

using namespace calab;

namespace {

Spectrum values(std::vector<double> v) { return spectrum_from_values(std::move(v)); }

// Sorted spectrum of m i.i.d. normals shifted by `shift`.
Spectrum random_spectrum(Rng& rng, int m, double shift) {
  std::vector<double> v(m);
  for (auto& x : v) x = rng.normal() + shift;
  return values(v);
}

}  // namespace

TEST_CASE("eigensystem examples") {
  SUBCASE("identity") {
    const Spectrum s = eigensystem(CMatrix::Identity(5, 5));
    for (double x : s.eigenvalues) CHECK(x == doctest::Approx(1.0));
  }
  SUBCASE("diagonal input is sorted") {
    CMatrix D = CMatrix::Zero(3, 3);
    D(0, 0) = 2.0;
    D(1, 1) = -1.0;
    const Spectrum s = eigensystem(D);
    CHECK(s.eigenvalues == std::vector<double>{-1.0, 0.0, 2.0});
  }
  SUBCASE("non-Hermitian input") {
    CMatrix A = CMatrix::Identity(2, 2);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(eigensystem(A), NotHermitian);
    CHECK_THROWS_AS(eigensystem(CMatrix::Zero(2, 3)), DimensionMismatch);
  }
}

TEST_CASE("Jacobi against a library eigensolver") {
  Rng rng(11, 0);
  for (int m : {1, 2, 6, 10, 21}) {
    const CMatrix H = random_hermitian(m, rng);
    const Spectrum s = eigensystem(H);
    REQUIRE(s.eigenvectors.has_value());
    const CMatrix& U = *s.eigenvectors;
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK((U.adjoint() * U - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    const RVector lam = Eigen::Map<const RVector>(s.eigenvalues.data(), m);
    CHECK((U * lam.cast<cplx>().asDiagonal() * U.adjoint() - H).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(H);
    CHECK((lam - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("degenerate spectra are ordered deterministically") {
  Rng rng(12, 0);
  const CMatrix U = random_unitary(4, rng);
  RVector d(4);
  d << 1.0, 1.0, 3.0, 3.0;
  const CMatrix H = U * d.cast<cplx>().asDiagonal() * U.adjoint();
  const Spectrum a = eigensystem(H), b = eigensystem(H);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK((*a.eigenvectors - *b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial sums and k_test examples") {
  const Spectrum s = values({-1.0, 1.0, 1.0});
  const auto r1 = k_test(s, 1.0);
  CHECK(r1.partial_sum == doctest::Approx(-1.0));
  CHECK_FALSE(r1.nonneg);
  const auto r2 = k_test(s, 2.0);
  CHECK(r2.partial_sum == doctest::Approx(0.0));
  CHECK(r2.nonneg);
  CHECK_FALSE(r2.positive);
  const auto r15 = k_test(s, 1.5);
  CHECK(r15.partial_sum == doctest::Approx(-0.5));
  CHECK_FALSE(r15.nonneg);
  REQUIRE(r15.kappa_bound.has_value());
  CHECK(*r15.kappa_bound == doctest::Approx(-0.5 / 1.5));
  // floor(k) = m drops the fractional term.
  CHECK(partial_sum({-1.0, 1.0, 1.0}, 3.0) == doctest::Approx(1.0));
  CHECK(k_test(s, 3.0).positive);
  CHECK_THROWS_AS(k_test(s, 0.0), InvalidArgument);
  CHECK_THROWS_AS(k_test(s, -1.0), InvalidArgument);
  CHECK_THROWS_AS(k_test(s, 3.5), InvalidArgument);
}

TEST_CASE("k_test properties on random spectra") {
  Rng rng(13, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 10);
    const Spectrum s = random_spectrum(rng, m, rng.normal());
    const double k = std::max(1e-3, rng.uniform() * m);
    const double k2 = k + rng.uniform() * (m - k);
    const auto a = k_test(s, k);
    const auto b = k_test(s, k2);
    if (a.positive) CHECK(a.nonneg);
    if (a.nonneg) CHECK(b.nonneg);
    const double c = std::exp(2.0 * rng.normal());
    std::vector<double> scaled = s.eigenvalues;
    for (auto& x : scaled) x *= c;
    const auto sc = k_test(values(scaled), k);
    CHECK(sc.partial_sum == doctest::Approx(c * a.partial_sum).epsilon(1e-12).scale(c));
    CHECK(sc.nonneg == a.nonneg);
    CHECK(sc.positive == a.positive);
  }
}

TEST_CASE("weight principle") {
  SUBCASE("equal weights on a nonnegative spectrum") {
    const Spectrum s = values({0.0, 0.5, 2.0});
    const auto r = weight_principle(s, {1.0, 1.0, 1.0}, 3.0, 1.0, 0.0);
    CHECK(r.certified);
    CHECK(r.bound == 0.0);
    CHECK(r.weighted_sum >= r.bound);
  }
  SUBCASE("weight on a negative bottom eigenvalue is refused") {
    const Spectrum s = values({-2.0, 1.0, 1.0});
    const auto r = weight_principle(s, {1.0, 0.0, 0.0}, 1.0, 1.0, 0.0);
    CHECK_FALSE(r.certified);
    CHECK(r.weighted_sum < 0.0);
  }
  SUBCASE("constraint violations") {
    const Spectrum s = values({0.0, 1.0});
    CHECK_THROWS_AS(weight_principle(s, {2.0, 0.0}, 2.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(weight_principle(s, {1.0, 0.5}, 2.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(weight_principle(s, {1.0, 1.0}, 2.0, 1.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(weight_principle(s, {1.0}, 1.0, 1.0, 0.0), DimensionMismatch);
  }
  SUBCASE("certified bounds hold on random admissible weights") {
    Rng rng(14, 0);
    int certified = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const int m = 2 + static_cast<int>(rng.uniform() * 8);
      const Spectrum s = random_spectrum(rng, m, 0.5);
      const double kappa = rng.uniform() < 0.5 ? 0.0 : -rng.uniform();
      const double wmax = 0.1 + rng.uniform();
      std::vector<double> w(m);
      double total = 0.0;
      for (auto& x : w) total += (x = wmax * rng.uniform());
      const double top = *std::max_element(w.begin(), w.end());
      const auto r = weight_principle(s, w, total, top, kappa);
      CHECK(r.chain_bound <= r.weighted_sum + 1e-9 * std::max(1.0, std::abs(r.weighted_sum)));
      if (r.certified) {
        ++certified;
        CHECK(r.weighted_sum >= r.bound - 1e-9 * std::max(1.0, total));
      }
    }
    CHECK(certified > 1000);
  }
}
