#include "uhf/crossed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace uhf {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix lambda_matrix(const FiniteGroup& g, std::size_t x) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t h = 0; h < g.order(); ++h) m(static_cast<Eigen::Index>(g.mul(x, h)), static_cast<Eigen::Index>(h)) = 1.0;
  return m;
}

Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

Matrix random_complex(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

}  // namespace

CrossedStage::CrossedStage(FiniteGroup group, std::size_t stage, std::vector<Unitary> alpha)
    : group_(std::move(group)), stage_(stage), n_(0), alpha_(std::move(alpha)) {
  if (alpha_.size() != group_.order()) throw Error("crossed stage: one unitary per group element is required");
  n_ = alpha_.front().dim();
  for (const auto& u : alpha_)
    if (u.dim() != n_) throw Error("crossed stage: unitaries of different dimensions");
  if (ambient() > kCrossedDenseLimit)
    throw Error("crossed stage: ambient dimension " + std::to_string(ambient()) + " exceeds " +
                std::to_string(kCrossedDenseLimit));
}

Matrix CrossedStage::pi(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != n_ || x.rows() != x.cols()) throw Error("crossed stage: pi needs an N x N matrix");
  const std::size_t k = group_.order();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ambient()), static_cast<Eigen::Index>(ambient()));
  for (std::size_t h = 0; h < k; ++h) out += kron(alpha_[group_.inv(h)].conjugate(x), matrix_unit(k, h, h));
  return out;
}

Matrix CrossedStage::u(std::size_t g) const { return kron(identity(n_), lambda_matrix(group_, g)); }

CrossedStage crossed_stage(const ProductAction& a, std::size_t m) {
  if (!a.group().is_table()) throw Error("crossed stage: needs a finite table group");
  const FiniteGroup& g = a.group().table();
  std::vector<Unitary> alpha;
  for (std::size_t x = 0; x < g.order(); ++x)
    alpha.push_back(m == 0 ? Unitary::identity(1) : a.evaluate(a.group().element(x), m));
  return CrossedStage(g, m, std::move(alpha));
}

std::string CovarianceReport::text() const {
  return "covariance_defect=" + fmt(covariance) + "\nrepresentation_defect=" + fmt(representation) +
         "\ntolerance=" + fmt(kCovarianceTol) + "\nverdict=" + (pass ? "PASS" : "FAIL") + "\n";
}

CovarianceReport verify_covariance(const CrossedStage& s) {
  CovarianceReport r;
  const FiniteGroup& g = s.group();
  const std::size_t n = s.dim();
  std::vector<Matrix> us;
  for (std::size_t x = 0; x < g.order(); ++x) us.push_back(s.u(x));
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y)
      r.representation = std::max(r.representation, (us[x] * us[y] - us[g.mul(x, y)]).norm());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix e = matrix_unit(n, i, j);
      const Matrix pe = s.pi(e);
      for (std::size_t x = 0; x < g.order(); ++x)
        r.covariance =
            std::max(r.covariance, (us[x] * pe * us[x].adjoint() - s.pi(s.alpha(x).conjugate(e))).norm());
      // pi(e_ij) pi(e_jl) = pi(e_il) along a fixed column
      const Matrix next = s.pi(matrix_unit(n, j, 0));
      r.representation = std::max(r.representation, (pe * next - s.pi(matrix_unit(n, i, 0))).norm());
    }
  r.pass = r.covariance <= kCovarianceTol && r.representation <= kCovarianceTol;
  return r;
}

// ---------------------------------------------------------------------------

GroupAlgebraElement group_algebra_zero(std::size_t n, std::size_t order) {
  return {std::vector<Matrix>(order, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))};
}

GroupAlgebraElement group_algebra_term(const Matrix& x, std::size_t g, std::size_t order) {
  if (g >= order) throw Error("group algebra: element index out of range");
  auto out = group_algebra_zero(static_cast<std::size_t>(x.rows()), order);
  out.coeff[g] = x;
  return out;
}

GroupAlgebraElement group_algebra_multiply(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
                                           const FiniteGroup& g) {
  if (a.coeff.size() != g.order() || b.coeff.size() != g.order() || a.dim() != b.dim())
    throw Error("group algebra: operands do not match");
  auto out = group_algebra_zero(a.dim(), g.order());
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y) out.coeff[g.mul(x, y)] += a.coeff[x] * b.coeff[y];
  return out;
}

GroupAlgebraElement group_algebra_adjoint(const GroupAlgebraElement& a, const FiniteGroup& g) {
  auto out = group_algebra_zero(a.dim(), g.order());
  for (std::size_t x = 0; x < g.order(); ++x) out.coeff[g.inv(x)] = a.coeff[x].adjoint();
  return out;
}

Matrix realize(const GroupAlgebraElement& a, const FiniteGroup& g) {
  if (a.coeff.size() != g.order()) throw Error("group algebra: wrong number of coefficients");
  const std::size_t n = a.dim() * g.order();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < g.order(); ++x) out += kron(a.coeff[x], lambda_matrix(g, x));
  return out;
}

ConnectingMap::ConnectingMap(FiniteGroup group, std::size_t source_dim, std::vector<Unitary> images)
    : group_(std::move(group)), n_(source_dim), k_(0), images_(std::move(images)) {
  if (images_.size() != group_.order()) throw Error("connecting map: one image per group element is required");
  k_ = images_.front().dim();
  const Representation rho{k_, images_};
  const double d = homomorphism_defect(group_, rho);
  if (!(d <= kStructuralTol))
    throw Error("connecting map: factor images are not a homomorphism (defect " + fmt(d) + ")");
}

GroupAlgebraElement ConnectingMap::apply(const GroupAlgebraElement& a) const {
  if (a.coeff.size() != group_.order() || a.dim() != n_) throw Error("connecting map: element of the wrong stage");
  GroupAlgebraElement out;
  for (std::size_t x = 0; x < group_.order(); ++x) out.coeff.push_back(kron(a.coeff[x], images_[x].dense()));
  return out;
}

Connection connecting_map(const CrossedStage& s, std::vector<Unitary> images) {
  ConnectingMap phi(s.group(), s.dim(), images);
  std::vector<Unitary> next;
  for (std::size_t x = 0; x < s.group().order(); ++x) next.push_back(kron(s.alpha(x), images[x]));
  return {std::move(phi), CrossedStage(s.group(), s.stage() + 1, std::move(next))};
}

ConnectingReport verify_connecting_map(const ConnectingMap& phi, std::size_t words, std::mt19937_64& rng) {
  const FiniteGroup& g = phi.group();
  const std::size_t n = phi.source_dim(), order = g.order();
  std::vector<GroupAlgebraElement> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gens.push_back(group_algebra_term(matrix_unit(n, i, j), g.identity(), order));
  for (std::size_t x = 0; x < order; ++x) gens.push_back(group_algebra_term(identity(n), x, order));
  auto word = [&] {
    GroupAlgebraElement w = gens[rng() % gens.size()];
    for (std::size_t len = rng() % 4; len > 0; --len) w = group_algebra_multiply(w, gens[rng() % gens.size()], g);
    return w;
  };
  ConnectingReport r;
  for (std::size_t t = 0; t < words; ++t) {
    const auto a = word(), b = word();
    const Matrix lhs = realize(phi.apply(group_algebra_multiply(a, b, g)), g);
    const Matrix rhs = realize(phi.apply(a), g) * realize(phi.apply(b), g);
    r.multiplicativity = std::max(r.multiplicativity, (lhs - rhs).norm());
    r.adjoint = std::max(r.adjoint, (realize(phi.apply(group_algebra_adjoint(a, g)), g) -
                                     realize(phi.apply(a), g).adjoint())
                                        .norm());
  }
  const auto one = group_algebra_term(identity(n), g.identity(), order);
  const Matrix po = realize(phi.apply(one), g);
  r.unital = (po - identity(static_cast<std::size_t>(po.rows()))).norm();
  for (std::size_t t = 0; t < std::max<std::size_t>(words / 20, 1); ++t) {
    GroupAlgebraElement a;
    for (std::size_t x = 0; x < order; ++x) a.coeff.push_back(random_complex(rng, n));
    const double before = operator_norm(realize(a, g));
    r.norm = std::max(r.norm, std::abs(operator_norm(realize(phi.apply(a), g)) - before) / std::max(before, 1.0));
  }
  r.pass = r.multiplicativity <= kCovarianceTol && r.adjoint <= kCovarianceTol && r.unital <= kCovarianceTol &&
           r.norm <= kCovarianceTol;
  return r;
}

// ---------------------------------------------------------------------------

GroupCStar group_cstar_stage(const FiniteGroup& g) {
  GroupCStar out{g, {}, {}};
  for (std::size_t x = 0; x < g.order(); ++x) out.lambda.push_back(Unitary::from_matrix(lambda_matrix(g, x)));
  const CharacterTable ct = character_table(g);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    std::vector<Complex> chi;
    for (std::size_t x = 0; x < g.order(); ++x) chi.push_back(ct.normalized[i][ct.class_of[x]]);
    out.vertices.push_back(std::move(chi));
  }
  return out;
}

std::vector<Complex> trace_pullback(const std::vector<Complex>& chi, const std::vector<Unitary>& images) {
  if (chi.size() != images.size()) throw Error("trace_pullback: one image per group element is required");
  std::vector<Complex> out(chi.size());
  for (std::size_t x = 0; x < chi.size(); ++x) out[x] = images[x].normalized_trace() * chi[x];
  return out;
}

PositivityCheck check_positive_definite(const std::vector<Complex>& chi, const FiniteGroup& g) {
  if (chi.size() != g.order()) throw Error("check_positive_definite: one value per group element is required");
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix m(n, n);
  for (std::size_t h = 0; h < g.order(); ++h)
    for (std::size_t x = 0; x < g.order(); ++x)
      m(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(x)) = chi[g.mul(g.inv(h), x)];
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return {es.eigenvalues().minCoeff(), std::abs(chi[g.identity()] - 1.0)};
}

double simplex_diameter(const std::vector<std::vector<Complex>>& vertices, const FiniteGroup& g) {
  double d = 0.0;
  if (vertices.empty()) return d;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (x == g.identity()) continue;
    double re_lo = vertices[0][x].real(), re_hi = re_lo, im_lo = vertices[0][x].imag(), im_hi = im_lo;
    for (const auto& v : vertices) {
      re_lo = std::min(re_lo, v[x].real());
      re_hi = std::max(re_hi, v[x].real());
      im_lo = std::min(im_lo, v[x].imag());
      im_hi = std::max(im_hi, v[x].imag());
    }
    d = std::max({d, re_hi - re_lo, im_hi - im_lo});
  }
  return d;
}

std::vector<TraceSimplexState> trace_simplex_diameter(const ProductAction& a, std::size_t depth) {
  if (!a.group().is_table()) throw Error("trace_simplex_diameter: needs a finite table group");
  const FiniteGroup& g = a.group().table();
  const CharacterTable ct = character_table(g);
  std::vector<std::size_t> reps;
  for (const auto& cl : ct.classes) reps.push_back(cl.front());

  std::vector<TraceSimplexState> out;
  TraceSimplexState s;
  s.vertices = group_cstar_stage(g).vertices;
  s.scaling.assign(reps.size(), 1.0);
  s.partial.assign(reps.size(), 1.0);
  s.diameter = simplex_diameter(s.vertices, g);
  out.push_back(s);
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::size_t f = depth - d;
    if (!a.factors().has(f)) throw Error("trace_simplex_diameter: the action has fewer than " + std::to_string(depth) + " factors");
    const Factor fac = a.factor(f);
    TraceSimplexState next;
    next.depth = d;
    next.factor = f + 1;
    for (const auto& v : out.back().vertices) next.vertices.push_back(trace_pullback(v, fac.images));
    for (std::size_t c = 0; c < reps.size(); ++c) {
      next.scaling.push_back(std::abs(fac.images[reps[c]].normalized_trace()));
      next.partial.push_back(out.back().partial[c] * next.scaling.back());
    }
    next.diameter = simplex_diameter(next.vertices, g);
    out.push_back(std::move(next));
  }
  return out;
}

std::string simplex_verdict(const std::vector<TraceSimplexState>& states) {
  if (states.empty()) throw Error("simplex_verdict: no states");
  return states.back().diameter <= kCollapseThreshold ? "collapse" : "no-collapse";
}

std::string simplex_csv(const std::vector<TraceSimplexState>& states) {
  std::ostringstream os;
  os << "depth,class_id,scaling_modulus,partial_product,diameter\n";
  for (const auto& s : states)
    for (std::size_t c = 0; c < s.scaling.size(); ++c)
      os << s.depth << ',' << c << ',' << fmt(s.scaling[c]) << ',' << fmt(s.partial[c]) << ',' << fmt(s.diameter)
         << '\n';
  if (!states.empty()) os << "# verdict=" << simplex_verdict(states) << ",threshold=" << fmt(kCollapseThreshold) << '\n';
  return os.str();
}

ProductAction control_family_action() {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const auto seq = FactorSequence::custom(
      [](std::size_t l) {
        if (l > 40) throw Error("control family: factor " + std::to_string(l + 1) + " is too large");
        return std::int64_t{1} << (l + 2);
      },
      std::nullopt, SupernaturalNumber::infinite_part(2), "2^(m+1)");
  return ProductAction(z2, seq,
                       [seq](std::size_t l) {
                         const auto n = static_cast<std::size_t>(seq.at(l));
                         std::vector<Rational> ph(n, Rational(0));
                         ph.back() = Rational(1, 2);
                         return Factor{static_cast<std::int64_t>(n),
                                       {Unitary::identity(n), Unitary::diagonal_phases(std::move(ph))}};
                       },
                       "control");
}

ProductAction sign_three_action() {
  const GroupSpec z2(FiniteGroup::cyclic(2));
  const Unitary s = Unitary::diagonal_phases({Rational(0), Rational(0), Rational(1, 2)});
  return explicit_action(z2, {}, {Factor{3, {Unitary::identity(3), s}}}, "sign3");
}

}  // namespace uhf
