#include <cmath>
#include <fstream>

#include "calabi_lab/curvature.hpp"
#include "calabi_lab/errors.hpp"
#include "calabi_lab/input_schema.hpp"
#include "calabi_lab/model_spaces.hpp"
#include "calabi_lab/space_parser.hpp"
#include "doctest.h"

using namespace calab;

namespace {

std::vector<double> calabi_eigenvalues(const AlgebraicCurvatureTensor& R) {
  return eigensystem(calabi_from_tensor(R).entries).eigenvalues;
}

int kernel_dim(const std::vector<double>& ev, double tol = 1e-10) {
  int k = 0;
  for (double x : ev) k += std::abs(x) < tol;
  return k;
}

void check_model(const AlgebraicCurvatureTensor& R) {
  const auto& r = R.residuals();
  CHECK(std::max({r.antisym_first, r.antisym_second, r.pair_exchange, r.bianchi, r.kaehler}) < 1e-12);
  CHECK(R.bianchi_validated());
  CHECK(R.kaehler_validated());
}

}  // namespace

TEST_CASE("constant holomorphic sectional curvature") {
  for (int n = 1; n <= 4; ++n)
    for (double c : {1.0, 2.5, -1.0}) {
      const auto R = chsc_tensor(n, c);
      check_model(R);
      const int m = n * (n + 1) / 2;
      CHECK((calabi_from_tensor(R).entries - c * CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
      // Holomorphic sectional curvature of the plane e_0, J e_0 has the sign of c.
      CHECK(R(0, n, 0, n) * c > 0.0);
    }
}

TEST_CASE("flat factors") {
  const auto R = flat_tensor(3);
  check_model(R);
  CHECK(R.max_abs() == 0.0);
  CHECK_THROWS_AS(flat_tensor(0), InvalidArgument);
}

TEST_CASE("products") {
  SUBCASE("dimension adds up") {
    const auto R = product_tensor({chsc_tensor(2, 1.0), flat_tensor(1), chsc_tensor(1, 3.0)});
    CHECK(R.n() == 4);
    check_model(R);
  }
  SUBCASE("kernel lower bound") {
    struct Case {
      std::vector<int> dims;
      int flat;
    };
    for (const Case& c : {Case{{1, 1}, 0}, Case{{1, 2}, 0}, Case{{2, 2}, 0}, Case{{1, 1}, 1}, Case{{1, 1, 1}, 0}}) {
      std::vector<AlgebraicCurvatureTensor> fs;
      int bound = c.flat;
      for (std::size_t i = 0; i < c.dims.size(); ++i) {
        fs.push_back(chsc_tensor(c.dims[i], 1.0 + i));
        for (std::size_t j = i + 1; j < c.dims.size(); ++j) bound += c.dims[i] * c.dims[j];
      }
      if (c.flat) fs.push_back(flat_tensor(c.flat));
      const auto R = product_tensor(fs);
      CHECK(kernel_dim(calabi_eigenvalues(R)) >= bound);
    }
  }
}

TEST_CASE("complex quadric") {
  SUBCASE("Q2 and P1 x P1 have proportional Calabi spectra") {
    const auto q = calabi_eigenvalues(quadric_tensor(2));
    const auto pp = calabi_eigenvalues(product_tensor({chsc_tensor(1, 1.0), chsc_tensor(1, 1.0)}));
    REQUIRE(q.size() == pp.size());
    const double scale = q.back() / pp.back();
    CHECK(scale > 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(std::abs(q[i] - scale * pp[i]) < 1e-9);
  }
  for (int n = 2; n <= 6; ++n) {
    CAPTURE(n);
    const auto R = quadric_tensor(n);
    check_model(R);
    const auto qs = quadric_spectrum(n);
    CHECK(qs.spectrum.eigenvalues.back() == doctest::Approx(1.0));
    REQUIRE(qs.ricci.einstein_lambda.has_value());
    CHECK(*qs.ricci.einstein_lambda > 0.0);
    if (n % 2 == 0) {
      CHECK(qs.half.nonneg);
      CHECK_FALSE(qs.half.positive);
    }
    if (n == 2) CHECK(std::abs(qs.spectrum.eigenvalues.front()) < 1e-12);
    if (n >= 3) CHECK(qs.spectrum.eigenvalues.front() < -1e-6);
    // Flags are scale invariant.
    const Spectrum scaled = eigensystem(calabi_from_tensor(quadric_tensor(n, 3.0)).entries);
    const auto h = k_test(scaled, n / 2.0);
    CHECK(h.nonneg == qs.half.nonneg);
    CHECK(h.positive == qs.half.positive);
  }
  CHECK_THROWS_AS(quadric_spectrum(1), InvalidArgument);
}

TEST_CASE("random samplers") {
  SUBCASE("validated and deterministic") {
    for (int n = 1; n <= 4; ++n) {
      const auto a = random_kaehler(n, 7), b = random_kaehler(n, 7), c = random_kaehler(n, 8);
      check_model(a);
      CHECK(a.components() == b.components());
      CHECK(a.components() != c.components());
    }
  }
  SUBCASE("Kaehler-Einstein variant") {
    for (int n = 2; n <= 4; ++n) {
      const auto R = random_kaehler_einstein(n, 3);
      check_model(R);
      const RicciData rd = ricci(R);
      REQUIRE(rd.einstein_lambda.has_value());
      CHECK(rd.einstein_residual < 1e-10);
      CHECK(random_kaehler_einstein(n, 3).components() == R.components());
    }
  }
  SUBCASE("Einstein projection leaves Einstein input alone") {
    const int n = 3;
    const CMatrix C = calabi_from_tensor(chsc_tensor(n, 2.0)).entries;
    const EinsteinProjection e = einstein_project(n, C);
    CHECK((e.C - C).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(e.residual < 1e-12);
  }
}

TEST_CASE("space descriptors") {
  SUBCASE("round trip through describe") {
    for (const char* text : {"chsc:n=3,c=1", "quadric:n=4", "quadric:n=3,scale=-1", "flat:k=2", "random:n=2,seed=5",
                             "random-ke:n=3,seed=1", "product:[chsc:n=1,c=1;chsc:n=1,c=1]",
                             "product:[chsc:n=2,c=1;product:[flat:k=1;quadric:n=2]]"}) {
      CAPTURE(text);
      const SpaceDescriptor d = parse_space(text);
      CHECK(describe(parse_space(describe(d))) == describe(d));
      CHECK(build(d).n() >= 1);
    }
    CHECK(describe(parse_space("chsc:n=2")) == describe(parse_space("chsc:c=1,n=2")));
  }
  SUBCASE("product dimension") { CHECK(build(parse_space("product:[chsc:n=2;flat:k=3]")).n() == 5); }
  SUBCASE("errors carry positions") {
    struct Bad {
      const char* text;
      std::size_t pos;
    };
    for (const Bad& b : {Bad{"sphere:n=2", 0}, Bad{"chsc:n=x", 7}, Bad{"chsc:n=2,d=1", 9}, Bad{"chsc", 4},
                         Bad{"product:[chsc:n=1;", 18}, Bad{"chsc:n=2,n=3", 9}, Bad{"chsc:n=2 junk", 9},
                         Bad{"chsc:c=1", 0}}) {
      CAPTURE(b.text);
      try {
        parse_space(b.text);
        FAIL("expected a parse error");
      } catch (const ParseError& e) {
        CHECK(e.position() == b.pos);
      }
    }
  }
}

TEST_CASE("curvature input files") {
  SUBCASE("Calabi matrix document") {
    const auto R = parse_curvature_json(
        R"({"kind":"calabi","n":2,"hermitian":[[1,0],[0,0],[0,0],[1,0],[0,0],[1,0]]})");
    CHECK((calabi_from_tensor(R).entries - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("component document fills symmetry orbits") {
    const auto R = parse_curvature_json(R"({"kind":"components","n":1,"entries":[[1,2,1,2,1.0]]})");
    CHECK(R(0, 1, 0, 1) == 1.0);
    CHECK(R(1, 0, 0, 1) == -1.0);
    CHECK(R(1, 0, 1, 0) == 1.0);
  }
  SUBCASE("schema violations") {
    for (const char* doc : {R"({"kind":"calabi"})", R"({"kind":"calabi","n":2,"hermitian":[[1,0]]})",
                            R"({"kind":"calabi","n":1,"hermitian":[[1,2]]})", R"({"kind":"other","n":1})",
                            R"({"kind":"components","n":1,"entries":[[1,2,1]]})", "not json"}) {
      CAPTURE(doc);
      CHECK_THROWS_AS(parse_curvature_json(doc), SchemaError);
    }
  }
  SUBCASE("file descriptor") {
    const std::string path = "calabi_lab_test_input.json";
    std::ofstream(path) << R"({"kind":"calabi","n":1,"hermitian":[[2,0]]})";
    const auto R = build(parse_space("file:" + path));
    CHECK(calabi_from_tensor(R).entries(0, 0).real() == doctest::Approx(2.0));
    std::remove(path.c_str());
    CHECK_THROWS(build(parse_space("file:/nonexistent/calabi.json")));
  }
}
