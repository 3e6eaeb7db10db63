#include "calabi_lab/forms.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "calabi_lab/errors.hpp"

namespace calab {

namespace {

constexpr Mask kEvenBits = 0x55555555u;
constexpr Mask kOddBits = 0xAAAAAAAAu;
constexpr int kMaxFormDimension = 8;

double sqrt_factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return std::sqrt(f);
}

// Bits strictly between slots a and b.
Mask between(int a, int b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  return ((Mask{1} << b) - 1) & ~((Mask{1} << (a + 1)) - 1);
}

int parity_sign(int count) { return (count & 1) ? -1 : 1; }

struct PrimitiveProjector {
  std::vector<std::int32_t> ranks;  // ranks (in the degree p+q layout) of the (p, q) block
  CMatrix P;                        // projector onto ker Lambda within the block
};

}  // namespace

int unbarred_count(Mask m) { return std::popcount(m & kEvenBits); }
int barred_count(Mask m) { return std::popcount(m & kOddBits); }

std::vector<int> slots_of(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

Mask mask_of(const MultiIndexK& K) {
  Mask m = 0;
  auto put = [&](int slot) {
    if (slot < 0 || slot >= 32) throw InvalidArgument("multi-index out of range");
    if (m & (Mask{1} << slot)) throw InvalidArgument("repeated index in multi-index");
    m |= Mask{1} << slot;
  };
  for (int i : K.I) put(FrameConvention::z_slot(i));
  for (int j : K.J) put(FrameConvention::zbar_slot(j));
  return m;
}

MultiIndexK multi_index_of(Mask m) {
  MultiIndexK K;
  for (int s : slots_of(m)) (FrameConvention::is_barred(s) ? K.J : K.I).push_back(s / 2);
  return K;
}

std::string to_string(const MultiIndexK& K) {
  std::ostringstream os;
  os << "I={";
  for (std::size_t i = 0; i < K.I.size(); ++i) os << (i ? "," : "") << K.I[i] + 1;
  os << "},J={";
  for (std::size_t i = 0; i < K.J.size(); ++i) os << (i ? "," : "") << K.J[i] + 1;
  os << "}";
  return os.str();
}

std::shared_ptr<const FormLayout> form_layout(int n, int k) {
  if (n < 1 || n > kMaxFormDimension)
    throw InvalidArgument("forms are supported for complex dimension 1.." +
                          std::to_string(kMaxFormDimension));
  if (k < 0 || k > 2 * n) throw InvalidArgument("form degree out of range");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FormLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, k);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto L = std::make_shared<FormLayout>();
  L->n = n;
  L->k = k;
  const Mask limit = Mask{1} << (2 * n);
  L->rank.assign(static_cast<std::size_t>(limit), -1);
  if (k == 0) {
    L->masks.push_back(0);
  } else {
    // Gosper's hack enumerates k-subsets in increasing order.
    Mask m = (Mask{1} << k) - 1;
    while (m < limit) {
      L->masks.push_back(m);
      Mask c = m & (~m + 1);
      Mask r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  for (std::size_t i = 0; i < L->masks.size(); ++i)
    L->rank[L->masks[i]] = static_cast<std::int32_t>(i);
  cache.emplace(key, L);
  return L;
}

Form::Form(const FrameConvention& frame, int degree)
    : frame_(frame), layout_(form_layout(frame.n(), degree)), c_(CVector::Zero(layout_->masks.size())) {}

Form Form::generator(const FrameConvention& frame, const MultiIndexK& K, cplx c) {
  Mask m = mask_of(K);
  return from_mask(frame, std::popcount(m), m, c);
}

Form Form::from_mask(const FrameConvention& frame, int degree, Mask m, cplx c) {
  Form f(frame, degree);
  f.set(m, c);
  return f;
}

cplx Form::coeff(Mask m) const {
  if (m >= layout_->rank.size()) return 0.0;
  auto r = layout_->rank[m];
  return r < 0 ? cplx{0.0} : c_(r);
}

void Form::set(Mask m, cplx v) {
  if (m >= layout_->rank.size() || layout_->rank[m] < 0)
    throw InvalidArgument("generator does not belong to this degree");
  c_(layout_->rank[m]) = v;
}

void Form::add(Mask m, cplx v) {
  if (m >= layout_->rank.size() || layout_->rank[m] < 0)
    throw InvalidArgument("generator does not belong to this degree");
  c_(layout_->rank[m]) += v;
}

void Form::require_compatible(const Form& o) const {
  if (o.n() != n() || o.degree() != degree()) throw DimensionMismatch("forms of different shape");
}

cplx Form::inner(const Form& other) const {
  require_compatible(other);
  return other.c_.dot(c_);  // Eigen's dot conjugates its left operand
}

Form Form::conj() const {
  Form out(frame_, degree());
  for (std::size_t r = 0; r < dim(); ++r) {
    const Mask m = mask(r);
    // Swap Z^a <-> conj(Z)^a; sorting back costs one transposition per index carrying both.
    const Mask lo = m & kEvenBits, hi = m & kOddBits;
    const Mask flipped = (lo << 1) | (hi >> 1);
    const int both = std::popcount(lo & (hi >> 1));
    out.c_(out.rank(flipped)) = static_cast<double>(parity_sign(both)) * std::conj(c_(r));
  }
  return out;
}

Form Form::bidegree_part(int p, int q) const {
  Form out(frame_, degree());
  for (std::size_t r = 0; r < dim(); ++r)
    if (unbarred_count(mask(r)) == p && barred_count(mask(r)) == q) out.c_(r) = c_(r);
  return out;
}

std::optional<std::pair<int, int>> Form::pure_bidegree(double tol) const {
  std::optional<std::pair<int, int>> found;
  for (std::size_t r = 0; r < dim(); ++r) {
    if (std::abs(c_(r)) <= tol) continue;
    std::pair<int, int> pq{unbarred_count(mask(r)), barred_count(mask(r))};
    if (found && *found != pq) return std::nullopt;
    found = pq;
  }
  return found;
}

bool Form::is_real(double tol) const {
  const double scale = std::max(1.0, norm());
  return (c_ - conj().c_).norm() <= tol * scale;
}

Form& Form::operator+=(const Form& o) {
  require_compatible(o);
  c_ += o.c_;
  return *this;
}

Form& Form::operator-=(const Form& o) {
  require_compatible(o);
  c_ -= o.c_;
  return *this;
}

Form& Form::operator*=(cplx s) {
  c_ *= s;
  return *this;
}

RealForm RealForm::from_component(const Form& phi) {
  RealForm out(phi + phi.conj());
  if (auto pq = phi.pure_bidegree()) {
    auto [p, q] = *pq;
    out.bidegree_ = std::make_pair(std::max(p, q), std::min(p, q));
  }
  return out;
}

RealForm RealForm::from_real(const Form& psi, double tol) {
  if (!psi.is_real(tol)) throw NotReal("form is not invariant under conjugation");
  RealForm out(psi);
  const int k = psi.degree();
  for (int p = k; p >= (k + 1) / 2; --p) {
    const int q = k - p;
    Form part = psi.bidegree_part(p, q) + psi.bidegree_part(q, p);
    if ((part.coefficients() - psi.coefficients()).norm() <= tol * std::max(1.0, psi.norm()) &&
        psi.norm() > 0.0) {
      out.bidegree_ = std::make_pair(p, q);
      break;
    }
  }
  return out;
}

cplx evaluate_form(const Form& phi, const std::vector<CVector>& args) {
  const int k = phi.degree();
  if (static_cast<int>(args.size()) != k)
    throw DimensionMismatch("evaluate_form: expected " + std::to_string(k) + " arguments, got " +
                            std::to_string(args.size()));
  for (const auto& v : args)
    if (v.size() != phi.frame().slots()) throw DimensionMismatch("argument has wrong dimension");
  if (k == 0) return phi.coefficients()(0);
  cplx total = 0.0;
  CMatrix M(k, k);
  for (std::size_t r = 0; r < phi.dim(); ++r) {
    const cplx c = phi.coefficients()(r);
    if (c == cplx{0.0}) continue;
    const auto s = slots_of(phi.mask(r));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) M(i, j) = args[i](s[j]);
    total += c * M.determinant();
  }
  return total / sqrt_factorial(k);
}

Form endo_act(const EndoC& L, const Form& phi) {
  require_same_size(phi.frame(), L);
  const int d = phi.frame().slots();
  // Nonzero entries per column.
  std::vector<std::vector<std::pair<int, cplx>>> col(d);
  for (int t = 0; t < d; ++t)
    for (int s = 0; s < d; ++s)
      if (L.m(s, t) != cplx{0.0}) col[t].emplace_back(s, L.m(s, t));

  Form out(phi.frame(), phi.degree());
  const CVector& in = phi.coefficients();
  CVector& res = out.coefficients();
  for (std::size_t r = 0; r < out.dim(); ++r) {
    const Mask S = out.mask(r);
    cplx acc = 0.0;
    Mask rest = S;
    while (rest) {
      const int t = std::countr_zero(rest);
      rest &= rest - 1;
      for (const auto& [s, v] : col[t]) {
        if (s == t) {
          acc -= v * in(r);
          continue;
        }
        if (S & (Mask{1} << s)) continue;
        const Mask T = (S & ~(Mask{1} << t)) | (Mask{1} << s);
        const int sign = parity_sign(std::popcount(S & between(s, t)));
        acc -= v * static_cast<double>(sign) * in(phi.rank(T));
      }
    }
    res(r) = acc;
  }
  return out;
}

Form insert(const CVector& X, const Form& phi) {
  const int k = phi.degree();
  if (k == 0) throw InvalidArgument("cannot insert into a 0-form");
  if (X.size() != phi.frame().slots()) throw DimensionMismatch("vector has wrong dimension");
  Form out(phi.frame(), k - 1);
  const double f = 1.0 / std::sqrt(static_cast<double>(k));
  const int d = phi.frame().slots();
  for (std::size_t r = 0; r < out.dim(); ++r) {
    const Mask S = out.mask(r);
    cplx acc = 0.0;
    for (int s = 0; s < d; ++s) {
      if (X(s) == cplx{0.0} || (S & (Mask{1} << s))) continue;
      const int before = std::popcount(S & ((Mask{1} << s) - 1));
      acc += X(s) * static_cast<double>(parity_sign(before)) * phi.coeff(S | (Mask{1} << s));
    }
    out.coefficients()(r) = f * acc;
  }
  return out;
}

Form lefschetz_adjoint(const Form& phi) {
  const int k = phi.degree();
  if (k < 2) return Form(phi.frame(), 0);
  const auto& frame = phi.frame();
  Form out(frame, k - 2);
  for (int a = 0; a < frame.n(); ++a) out += insert(frame.zbar(a), insert(frame.z(a), phi));
  out *= -kI * static_cast<double>(k * (k - 1));
  return out;
}

namespace {

std::shared_ptr<const PrimitiveProjector> primitive_projector(const FrameConvention& frame, int p, int q) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const PrimitiveProjector>> cache;
  const auto key = std::make_tuple(frame.n(), p, q);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto proj = std::make_shared<PrimitiveProjector>();
  const auto layout = form_layout(frame.n(), p + q);
  for (std::size_t r = 0; r < layout->masks.size(); ++r)
    if (unbarred_count(layout->masks[r]) == p && barred_count(layout->masks[r]) == q)
      proj->ranks.push_back(static_cast<std::int32_t>(r));
  const auto m = static_cast<Eigen::Index>(proj->ranks.size());
  if (p == 0 || q == 0) {
    proj->P = CMatrix::Identity(m, m);
  } else {
    const auto target = form_layout(frame.n(), p + q - 2);
    std::vector<std::int32_t> target_ranks;
    std::vector<std::int32_t> target_pos(target->masks.size(), -1);
    for (std::size_t r = 0; r < target->masks.size(); ++r)
      if (unbarred_count(target->masks[r]) == p - 1 && barred_count(target->masks[r]) == q - 1) {
        target_pos[r] = static_cast<std::int32_t>(target_ranks.size());
        target_ranks.push_back(static_cast<std::int32_t>(r));
      }
    CMatrix A = CMatrix::Zero(static_cast<Eigen::Index>(target_ranks.size()), m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Form gen = Form::from_mask(frame, p + q, layout->masks[proj->ranks[j]]);
      Form img = lefschetz_adjoint(gen);
      for (std::size_t r = 0; r < img.dim(); ++r)
        if (target_pos[r] >= 0) A(target_pos[r], j) = img.coefficients()(r);
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
    proj->P = CMatrix::Identity(m, m) - cod.pseudoInverse() * A;
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, proj).first->second;
}

}  // namespace

Form project_primitive(const Form& phi) {
  const int k = phi.degree();
  Form out(phi.frame(), k);
  for (int p = 0; p <= k; ++p) {
    const int q = k - p;
    if (p > phi.n() || q > phi.n()) continue;
    auto proj = primitive_projector(phi.frame(), p, q);
    CVector block(static_cast<Eigen::Index>(proj->ranks.size()));
    for (std::size_t i = 0; i < proj->ranks.size(); ++i) block(i) = phi.coefficients()(proj->ranks[i]);
    CVector pb = proj->P * block;
    for (std::size_t i = 0; i < proj->ranks.size(); ++i) out.coefficients()(proj->ranks[i]) = pb(i);
  }
  return out;
}

Form kaehler_form(const FrameConvention& frame) {
  // omega(Z_a, conj Z_a) = g(i Z_a, conj Z_a) = i.
  Form w(frame, 2);
  for (int a = 0; a < frame.n(); ++a) {
    const Mask m = (Mask{1} << FrameConvention::z_slot(a)) | (Mask{1} << FrameConvention::zbar_slot(a));
    w.set(m, kI * std::sqrt(2.0));
  }
  return w;
}

Form decomposable(const FrameConvention& frame, const std::vector<CVector>& covectors) {
  const int k = static_cast<int>(covectors.size());
  for (const auto& a : covectors)
    if (a.size() != frame.slots()) throw DimensionMismatch("covector has wrong dimension");
  Form out(frame, k);
  if (k == 0) {
    out.coefficients()(0) = 1.0;
    return out;
  }
  CMatrix M(k, k);
  const double f = sqrt_factorial(k);
  for (std::size_t r = 0; r < out.dim(); ++r) {
    const auto s = slots_of(out.mask(r));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) M(i, j) = covectors[i](s[j]);
    out.coefficients()(r) = f * M.determinant();
  }
  return out;
}

}  // namespace calab
