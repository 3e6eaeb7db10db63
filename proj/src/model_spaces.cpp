#include "calabi_lab/model_spaces.hpp"

#include <cmath>
#include <sstream>

#include "calabi_lab/errors.hpp"
#include "calabi_lab/input_schema.hpp"
#include "calabi_lab/random.hpp"

namespace calab {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Real Hermitian-matrix coordinates: diagonal, then (Re, Im) of the strict upper triangle.
int herm_params(int m) { return m * m; }

CMatrix herm_from_params(int m, const RVector& x) {
  CMatrix C = CMatrix::Zero(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i) C(i, i) = x(k++);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      C(i, j) = cplx{x(k), x(k + 1)};
      C(j, i) = std::conj(C(i, j));
      k += 2;
    }
  return C;
}

RVector params_from_herm(const CMatrix& C) {
  const int m = static_cast<int>(C.rows());
  RVector x(herm_params(m));
  int k = 0;
  for (int i = 0; i < m; ++i) x(k++) = C(i, i).real();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      x(k++) = C(i, j).real();
      x(k++) = C(i, j).imag();
    }
  return x;
}

// Traceless part of the Ricci form, flattened to reals.
RVector traceless_ricci(int n, const CMatrix& C) {
  CMatrix ric = ricci_from_calabi(n, C);
  const cplx tr = ric.trace() / static_cast<double>(n);
  ric -= tr * CMatrix::Identity(n, n);
  RVector out(2 * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      out(2 * (a * n + b)) = ric(a, b).real();
      out(2 * (a * n + b) + 1) = ric(a, b).imag();
    }
  return out;
}

}  // namespace

std::string describe(const SpaceDescriptor& d) {
  struct V {
    std::string operator()(const ChscSpace& s) const { return "chsc:n=" + std::to_string(s.n) + ",c=" + fmt(s.c); }
    std::string operator()(const QuadricSpace& s) const {
      return "quadric:n=" + std::to_string(s.n) + (s.scale == 1.0 ? "" : ",scale=" + fmt(s.scale));
    }
    std::string operator()(const ProductSpace& s) const {
      std::string out = "product:[";
      for (std::size_t i = 0; i < s.factors.size(); ++i) out += (i ? ";" : "") + describe(s.factors[i]);
      return out + "]";
    }
    std::string operator()(const FlatSpace& s) const { return "flat:k=" + std::to_string(s.k); }
    std::string operator()(const RandomKaehlerSpace& s) const {
      return "random:n=" + std::to_string(s.n) + ",seed=" + std::to_string(s.seed);
    }
    std::string operator()(const RandomKaehlerEinsteinSpace& s) const {
      return "random-ke:n=" + std::to_string(s.n) + ",seed=" + std::to_string(s.seed);
    }
    std::string operator()(const FileSpace& s) const { return "file:" + s.path; }
  };
  return std::visit(V{}, d.v);
}

AlgebraicCurvatureTensor build(const SpaceDescriptor& d) {
  struct V {
    AlgebraicCurvatureTensor operator()(const ChscSpace& s) const { return chsc_tensor(s.n, s.c); }
    AlgebraicCurvatureTensor operator()(const QuadricSpace& s) const { return quadric_tensor(s.n, s.scale); }
    AlgebraicCurvatureTensor operator()(const ProductSpace& s) const {
      if (s.factors.empty()) throw InvalidArgument("product needs at least one factor");
      std::vector<AlgebraicCurvatureTensor> fs;
      for (const auto& f : s.factors) fs.push_back(build(f));
      return product_tensor(fs);
    }
    AlgebraicCurvatureTensor operator()(const FlatSpace& s) const { return flat_tensor(s.k); }
    AlgebraicCurvatureTensor operator()(const RandomKaehlerSpace& s) const { return random_kaehler(s.n, s.seed); }
    AlgebraicCurvatureTensor operator()(const RandomKaehlerEinsteinSpace& s) const {
      return random_kaehler_einstein(s.n, s.seed);
    }
    AlgebraicCurvatureTensor operator()(const FileSpace& s) const { return load_curvature_file(s.path); }
  };
  return std::visit(V{}, d.v);
}

AlgebraicCurvatureTensor chsc_tensor(int n, double c) {
  const int m = n * (n + 1) / 2;
  return tensor_from_calabi(FrameConvention(n), c * CMatrix::Identity(m, m));
}

AlgebraicCurvatureTensor quadric_tensor(int n, double scale) {
  if (n < 1) throw InvalidArgument("quadric needs n >= 1");
  const int N = n + 2;
  // Tangent space m = R^2 (x) R^n inside so(n+2); E(a, s) rotates e_s into e_{2+a}.
  auto E = [&](int a, int s) {
    RMatrix X = RMatrix::Zero(N, N);
    X(2 + a, s) = 1.0;
    X(s, 2 + a) = -1.0;
    return X;
  };
  std::vector<RMatrix> frame;
  for (int a = 0; a < n; ++a) frame.push_back(E(a, 0));
  for (int a = 0; a < n; ++a) frame.push_back(-E(a, 1));
  const int d = 2 * n;
  auto metric = [](const RMatrix& X, const RMatrix& Y) { return -0.5 * (X * Y).trace(); };
  std::vector<double> comp(static_cast<std::size_t>(d) * d * d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const RMatrix XY = frame[i] * frame[j] - frame[j] * frame[i];
      for (int k = 0; k < d; ++k) {
        const RMatrix Z = XY * frame[k] - frame[k] * XY;
        for (int l = 0; l < d; ++l) comp[((i * d + j) * d + k) * d + l] = metric(Z, frame[l]);
      }
    }
  const FrameConvention fc(n);
  auto raw = validate_tensor(fc, comp, ValidationOptions{1e-10, true, true});
  const Spectrum sp = eigensystem(calabi_from_tensor(raw).entries, "quadric_raw");
  const double top = std::abs(sp.eigenvalues.back()) > 0 ? sp.eigenvalues.back() : 1.0;
  const double f = scale / std::abs(top);
  for (double& v : comp) v *= f;
  return validate_tensor(fc, std::move(comp), ValidationOptions{1e-10, true, true});
}

AlgebraicCurvatureTensor product_tensor(const std::vector<AlgebraicCurvatureTensor>& factors) {
  int n = 0;
  for (const auto& f : factors) n += f.n();
  const int d = 2 * n;
  std::vector<double> comp(static_cast<std::size_t>(d) * d * d * d, 0.0);
  int offset = 0;
  for (const auto& f : factors) {
    const int nf = f.n(), df = 2 * nf;
    auto glob = [&](int i) { return i < nf ? offset + i : n + offset + (i - nf); };
    for (int i = 0; i < df; ++i)
      for (int j = 0; j < df; ++j)
        for (int k = 0; k < df; ++k)
          for (int l = 0; l < df; ++l)
            comp[((glob(i) * d + glob(j)) * d + glob(k)) * d + glob(l)] = f(i, j, k, l);
    offset += nf;
  }
  return validate_tensor(FrameConvention(n), std::move(comp));
}

AlgebraicCurvatureTensor flat_tensor(int k) {
  const int d = 2 * k;
  if (k < 1) throw InvalidArgument("flat factor needs k >= 1");
  return validate_tensor(FrameConvention(k), std::vector<double>(static_cast<std::size_t>(d) * d * d * d, 0.0));
}

AlgebraicCurvatureTensor random_kaehler(int n, std::uint64_t seed) {
  Rng rng(seed, 0x4b41454c45524eULL);
  return tensor_from_calabi(FrameConvention(n), random_hermitian(n * (n + 1) / 2, rng));
}

EinsteinProjection einstein_project(int n, const CMatrix& C0, double tol, int max_iterations) {
  const int m = n * (n + 1) / 2;
  const int P = herm_params(m);
  RMatrix A(2 * n * n, P);
  for (int j = 0; j < P; ++j) {
    RVector e = RVector::Zero(P);
    e(j) = 1.0;
    A.col(j) = traceless_ricci(n, herm_from_params(m, e));
  }
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(A);
  EinsteinProjection out;
  RVector x = params_from_herm(C0);
  const double scale = std::max(1.0, C0.cwiseAbs().maxCoeff());
  for (out.iterations = 0; out.iterations <= max_iterations; ++out.iterations) {
    const RVector r = A * x;
    out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    if (out.residual < tol * scale) {
      out.C = herm_from_params(m, x);
      return out;
    }
    x -= cod.solve(r);
  }
  throw ConvergenceFailure("Einstein projection did not converge");
}

AlgebraicCurvatureTensor random_kaehler_einstein(int n, std::uint64_t seed) {
  Rng rng(seed, 0x4b452d45494eULL);
  const int m = n * (n + 1) / 2;
  const EinsteinProjection proj = einstein_project(n, random_hermitian(m, rng), 1e-12);
  return tensor_from_calabi(FrameConvention(n), proj.C);
}

QuadricSpectrum quadric_spectrum(int n) {
  if (n < 2) throw InvalidArgument("quadric spectrum needs n >= 2");
  const auto R = quadric_tensor(n);
  QuadricSpectrum out{eigensystem(calabi_from_tensor(R).entries, "calabi:" + describe({QuadricSpace{n, 1.0}})),
                      {}, ricci(R)};
  out.half = k_test(out.spectrum, n / 2.0);
  return out;
}

}  // namespace calab
