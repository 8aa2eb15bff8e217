#include "uhf/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace uhf {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double resolved_theta(std::int64_t n, double theta) { return n % 2 ? 1.0 : theta; }

// Column j of a monomial or diagonal unitary: (row, entry).
bool sparse_columns(const Unitary& u, std::vector<std::pair<std::size_t, Complex>>& out) {
  out.clear();
  if (u.is_exact()) {
    const auto& m = u.monomial();
    for (std::size_t j = 0; j < m.perm.size(); ++j) out.emplace_back(m.perm[j], phase_value(m.phase[j]));
    return true;
  }
  if (u.is_diagonal()) {
    const Vector d = u.diagonal();
    for (Eigen::Index j = 0; j < d.size(); ++j) out.emplace_back(static_cast<std::size_t>(j), d(j));
    return true;
  }
  return false;
}

bool is_scalar(const Unitary& u) {
  if (u.is_exact()) {
    const auto& m = u.monomial();
    for (std::size_t j = 0; j < m.perm.size(); ++j)
      if (m.perm[j] != j || m.phase[j] != m.phase[0]) return false;
    return true;
  }
  const Matrix d = u.dense();
  return approx_equal(d, d(0, 0) * identity(u.dim()), kStructuralTol);
}

}  // namespace

double WitnessSeries::gap() const {
  if (values.empty() || classes == 0) return 0.0;
  double best = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<double> tail;
    for (std::size_t p = c; p < values.size(); p += classes) tail.push_back(std::abs(1.0 - values[p]));
    if (tail.empty()) continue;
    const std::size_t start = tail.size() > window ? tail.size() - window : 0;
    best = std::max(best, *std::min_element(tail.begin() + static_cast<std::ptrdiff_t>(start), tail.end()));
  }
  return best;
}

Complex commutator_trace(const Unitary& u, const Unitary& v) {
  if (u.dim() != v.dim()) throw Error("commutator_trace: dimension mismatch");
  return (u * v * u.adjoint() * v.adjoint()).normalized_trace();
}

WitnessSeries commutator_trace_sequence(std::span<const Unitary> u, std::span<const Unitary> v,
                                        std::vector<std::int64_t> index, std::size_t window, double threshold) {
  if (u.size() != v.size()) throw Error("commutator_trace_sequence: sequences of different lengths");
  if (!index.empty() && index.size() != u.size()) throw Error("commutator_trace_sequence: index list length mismatch");
  if (window == 0) throw Error("commutator_trace_sequence: window must be positive");
  WitnessSeries s;
  s.window = window;
  s.threshold = threshold;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].dim() != v[i].dim())
      throw Error("commutator_trace_sequence: dimension mismatch at entry " + std::to_string(i));
    s.values.push_back(commutator_trace(u[i], v[i]));
    s.index.push_back(index.empty() ? static_cast<std::int64_t>(i) : index[i]);
  }
  return s;
}

Complex closed_form_flow_trace(std::int64_t n, double theta, double r) {
  const double t = resolved_theta(n, theta);
  const double nd = static_cast<double>(n);
  return std::exp(Complex(0, -kTwoPi * t * r)) * (std::exp(Complex(0, -nd * kTwoPi * r)) / nd + (nd - 1.0) / nd);
}

Complex flow_trace(std::int64_t n, double theta, double r) {
  const double t = resolved_theta(n, theta);
  const double nd = static_cast<double>(n);
  return std::exp(Complex(0, -kTwoPi * t * r)) * (std::exp(Complex(0, kTwoPi * t * nd * r)) / nd + (nd - 1.0) / nd);
}

double two_norm_distance(const Unitary& a, const Unitary& b) {
  if (a.dim() != b.dim()) throw Error("two_norm_distance: dimension mismatch");
  std::vector<std::pair<std::size_t, Complex>> ca, cb;
  if (sparse_columns(a, ca) && sparse_columns(b, cb)) {
    double s = 0.0;
    for (std::size_t j = 0; j < ca.size(); ++j) {
      if (ca[j].first == cb[j].first)
        s += std::norm(ca[j].second - cb[j].second);
      else
        s += std::norm(ca[j].second) + std::norm(cb[j].second);
    }
    return std::sqrt(s / static_cast<double>(ca.size()));
  }
  return two_norm(a.dense() - b.dense());
}

double weak_inner_defect(const StageUnitary& u, const Unitary& v, std::size_t factor_index) {
  if (factor_index >= u.dims.size()) throw Error("weak_inner_defect: factor index out of range");
  if (static_cast<std::int64_t>(v.dim()) != u.dims[factor_index])
    throw Error("weak_inner_defect: unitary does not match the factor dimension");
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < factor_index; ++i) left *= static_cast<std::size_t>(u.dims[i]);
  for (std::size_t i = factor_index + 1; i < u.dims.size(); ++i) right *= static_cast<std::size_t>(u.dims[i]);
  const Unitary vn = kron(kron(Unitary::identity(left), v), Unitary::identity(right));
  if (vn.dim() != u.u.dim()) throw Error("weak_inner_defect: stage dimensions do not match the stage unitary");
  return two_norm_distance(u.u * vn * u.u.adjoint(), vn);
}

Unitary default_test_unitary(const Unitary& u) {
  const auto n = static_cast<std::int64_t>(u.dim());
  if (u.is_diagonal()) {
    std::vector<double> arg(static_cast<std::size_t>(n));
    if (u.is_exact()) {
      const auto& m = u.monomial();
      for (std::size_t j = 0; j < arg.size(); ++j) arg[j] = boost::rational_cast<double>(m.phase[j]);
    } else {
      const Vector d = u.diagonal();
      for (std::size_t j = 0; j < arg.size(); ++j) {
        const double a = std::arg(d(static_cast<Eigen::Index>(j))) / kTwoPi;
        arg[j] = a < 0 ? a + 1.0 : a;
      }
    }
    std::vector<std::size_t> order(arg.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return arg[a] < arg[b]; });
    const std::size_t shift = order.size() / 2;
    Unitary::Monomial mono;
    mono.perm.resize(order.size());
    mono.phase.assign(order.size(), Rational(0));
    for (std::size_t i = 0; i < order.size(); ++i) mono.perm[order[i]] = order[(i + shift) % order.size()];
    return Unitary::from_monomial(std::move(mono));
  }
  if (u.is_exact()) {
    std::vector<Rational> ph;
    for (std::int64_t j = 0; j < n; ++j) ph.push_back(Rational(j, n));
    return Unitary::diagonal_phases(ph);
  }
  Matrix e(n, 0);
  for (const auto& cl : eig_unitary(u)) {
    e.conservativeResize(Eigen::NoChange, e.cols() + cl.basis.cols());
    e.rightCols(cl.basis.cols()) = cl.basis;
  }
  return Unitary::from_matrix(e * cycle_unitary(n).dense() * e.adjoint());
}

WitnessSeries action_witness(const ProductAction& a, const Element& g, std::size_t count, std::size_t classes,
                             std::size_t window, double threshold) {
  std::vector<Unitary> us, vs;
  std::vector<std::int64_t> idx;
  for (std::size_t l = 0; l < count && a.factors().has(l); ++l) {
    Unitary img = a.factor_image(g, l);
    if (is_scalar(img)) continue;
    vs.push_back(default_test_unitary(img));
    us.push_back(std::move(img));
    idx.push_back(static_cast<std::int64_t>(l));
  }
  auto s = commutator_trace_sequence(us, vs, std::move(idx), window, threshold);
  s.classes = classes;
  return s;
}

std::string witness_csv(const WitnessSeries& s) {
  std::ostringstream os;
  os << "n,re_tau,im_tau,abs_one_minus_tau\n";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    os << s.index[i] << ',' << fmt(s.values[i].real()) << ',' << fmt(s.values[i].imag()) << ','
       << fmt(std::abs(1.0 - s.values[i])) << '\n';
  os << "# verdict=" << (s.witness() ? "WITNESS" : "NO_WITNESS") << ",gap=" << fmt(s.gap())
     << ",threshold=" << fmt(s.threshold) << ",window=" << s.window << ",classes=" << s.classes << '\n';
  return os.str();
}

}  // namespace uhf
