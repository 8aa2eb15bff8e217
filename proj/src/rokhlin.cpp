#include "uhf/rokhlin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

namespace uhf {

namespace {

constexpr std::size_t kVerifyLimit = 64;
constexpr std::size_t kOrbitMaterializeLimit = std::size_t{1} << 16;

double hermitian_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd kron_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (Eigen::Index x = 0; x < a.size(); ++x) out.segment(x * b.size(), b.size()) = a(x) * b;
  return out;
}

// Ad u of a diagonal projection for an exact monomial u.
Eigen::VectorXd permute_diagonal(const Unitary& u, const Eigen::VectorXd& d) {
  const auto& m = u.monomial();
  Eigen::VectorXd out(d.size());
  for (std::size_t x = 0; x < m.perm.size(); ++x) out(static_cast<Eigen::Index>(m.perm[x])) = d(static_cast<Eigen::Index>(x));
  return out;
}

std::size_t checked_dense(std::size_t n, const char* who) {
  if (n > kTowerDenseLimit)
    throw Error(std::string(who) + ": dimension " + std::to_string(n) + " exceeds the dense tower limit");
  return n;
}

// Projections P_s onto span{w_s[t]}, w_s = k^{-1/2} sum_j omega^{-js} v_j, arranged as p_i = P_{(k-i) mod k}.
std::vector<Projection> eigen_tuple_projections(const std::vector<Matrix>& classes, std::size_t n) {
  const auto k = static_cast<std::int64_t>(classes.size());
  Eigen::Index d = classes.empty() ? 0 : classes[0].cols();
  for (const auto& c : classes) d = std::min(d, c.cols());
  std::vector<Projection> out;
  if (d == 0) return out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<Matrix> by_s(static_cast<std::size_t>(k));
  for (std::int64_t s = 0; s < k; ++s) {
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), d);
    for (std::int64_t j = 0; j < k; ++j)
      w += phase_value(Rational(-j * s, k)) * classes[static_cast<std::size_t>(j)].leftCols(d);
    w *= scale;
    by_s[static_cast<std::size_t>(s)] = w * w.adjoint();
  }
  for (std::int64_t i = 0; i < k; ++i) out.emplace_back(by_s[static_cast<std::size_t>((k - i) % k)]);
  return out;
}

Matrix basis_columns(std::size_t n, const std::vector<std::size_t>& idx) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t t = 0; t < idx.size(); ++t) m(static_cast<Eigen::Index>(idx[t]), static_cast<Eigen::Index>(t)) = 1.0;
  return m;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RokhlinTower RokhlinTower::dense(std::vector<Projection> projections, bool cyclic) {
  if (projections.empty()) throw Error("RokhlinTower: use empty() for a zero-length tower");
  RokhlinTower t;
  t.dim_ = projections[0].dim();
  for (const auto& p : projections)
    if (p.dim() != t.dim_) throw Error("RokhlinTower: projections in different dimensions");
  t.length_ = projections.size();
  t.dense_ = std::move(projections);
  t.cyclic_ = cyclic;
  return t;
}

RokhlinTower RokhlinTower::diagonal(std::vector<Eigen::VectorXd> diagonals, bool cyclic) {
  if (diagonals.empty()) throw Error("RokhlinTower: use empty() for a zero-length tower");
  RokhlinTower t;
  t.dim_ = static_cast<std::size_t>(diagonals[0].size());
  for (const auto& d : diagonals) {
    if (static_cast<std::size_t>(d.size()) != t.dim_) throw Error("RokhlinTower: projections in different dimensions");
    for (Eigen::Index x = 0; x < d.size(); ++x)
      if (d(x) != 0.0 && d(x) != 1.0) throw Error("RokhlinTower: diagonal projection entries must be 0 or 1");
  }
  t.length_ = diagonals.size();
  t.diag_ = std::move(diagonals);
  t.cyclic_ = cyclic;
  t.diagonal_storage_ = true;
  return t;
}

RokhlinTower RokhlinTower::empty(std::size_t n, bool cyclic) {
  RokhlinTower t;
  t.dim_ = n;
  t.cyclic_ = cyclic;
  return t;
}

Matrix RokhlinTower::projection(std::size_t i) const {
  if (i >= length_) throw Error("RokhlinTower: index out of range");
  if (diagonal_storage_) return diag_[i].cast<Complex>().asDiagonal();
  return dense_[i].matrix();
}

const Eigen::VectorXd& RokhlinTower::diagonal(std::size_t i) const {
  if (!diagonal_storage_) throw Error("RokhlinTower: tower is not diagonal");
  if (i >= length_) throw Error("RokhlinTower: index out of range");
  return diag_[i];
}

double RokhlinTower::trace(std::size_t i) const {
  if (i >= length_) throw Error("RokhlinTower: index out of range");
  if (diagonal_storage_) return diag_[i].sum() / static_cast<double>(dim_);
  return dense_[i].trace();
}

double RokhlinTower::trace_covered() const {
  double s = 0.0;
  for (std::size_t i = 0; i < length_; ++i) s += trace(i);
  return s;
}

RokhlinTower RokhlinTower::densified() const {
  if (!diagonal_storage_ || length_ == 0) return *this;
  checked_dense(dim_, "RokhlinTower::densified");
  std::vector<Projection> ps;
  for (std::size_t i = 0; i < length_; ++i) ps.emplace_back(projection(i));
  return dense(std::move(ps), cyclic_);
}

double TowerDefects::max() const { return std::max({orthogonality, shift, trace, commutation}); }

RokhlinTower best_cyclic_tower(const Unitary& u, std::int64_t k, double cluster_tol) {
  if (k <= 0) throw Error("best_cyclic_tower: k must be positive");
  const std::size_t n = checked_dense(u.dim(), "best_cyclic_tower");
  std::vector<Matrix> classes(static_cast<std::size_t>(k));
  if (u.is_exact() && u.is_diagonal()) {
    const auto phases = u.diagonal_phases_exact();
    std::vector<std::vector<std::size_t>> idx(static_cast<std::size_t>(k));
    for (std::size_t x = 0; x < n; ++x) {
      const Rational j = phases[x] * k;
      if (j.denominator() != 1)
        throw Error("best_cyclic_tower: eigenvalue phase " + std::to_string(phases[x].numerator()) + "/" +
                    std::to_string(phases[x].denominator()) + " is not a multiple of 1/" + std::to_string(k));
      idx[static_cast<std::size_t>(j.numerator() % k)].push_back(x);
    }
    for (std::int64_t j = 0; j < k; ++j) classes[static_cast<std::size_t>(j)] = basis_columns(n, idx[static_cast<std::size_t>(j)]);
  } else {
    for (auto& c : classes) c = Matrix::Zero(static_cast<Eigen::Index>(n), 0);
    for (const auto& cl : eig_unitary(u, cluster_tol)) {
      const double step = kTwoPi / static_cast<double>(k);
      const auto j = static_cast<std::int64_t>(std::llround(cl.phase / step)) % k;
      if (angle_distance(cl.phase, step * static_cast<double>(j)) > 2.0 * cluster_tol + 1e-12)
        throw Error("best_cyclic_tower: eigenvalue phase " + fmt(cl.phase / kTwoPi) + " (turns) is not near a " +
                    std::to_string(k) + "-th root of unity");
      Matrix& c = classes[static_cast<std::size_t>(j)];
      c.conservativeResize(Eigen::NoChange, c.cols() + cl.basis.cols());
      c.rightCols(cl.basis.cols()) = cl.basis;
    }
  }
  auto ps = eigen_tuple_projections(classes, n);
  if (ps.empty()) return RokhlinTower::empty(n, true);
  return RokhlinTower::dense(std::move(ps), true);
}

RokhlinTower orbit_tower(const Unitary& u, std::int64_t k) {
  if (k <= 0) throw Error("orbit_tower: k must be positive");
  if (!u.is_exact()) throw Error("orbit_tower: unitary must be an exact monomial");
  const auto& perm = u.monomial().perm;
  const std::size_t n = perm.size();
  std::vector<Eigen::VectorXd> d(static_cast<std::size_t>(k), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> cycle;
  bool any = false;
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    if (seen[x0]) continue;
    cycle.clear();
    for (std::size_t x = x0; !seen[x]; x = perm[x]) {
      seen[x] = true;
      cycle.push_back(x);
    }
    if (cycle.size() % static_cast<std::size_t>(k) != 0) continue;
    any = true;
    for (std::size_t t = 0; t < cycle.size(); ++t)
      d[t % static_cast<std::size_t>(k)](static_cast<Eigen::Index>(cycle[t])) = 1.0;
  }
  if (!any) return RokhlinTower::empty(n, true);
  return RokhlinTower::diagonal(std::move(d), true);
}

RokhlinTower arc_tower(const Unitary& u, std::size_t length) {
  if (length == 0) throw Error("arc_tower: length must be positive");
  const std::size_t n = checked_dense(u.dim(), "arc_tower");
  std::vector<double> phase;
  std::vector<Vector> vecs;
  if (u.is_diagonal()) {
    const Vector dg = u.diagonal();
    for (std::size_t x = 0; x < n; ++x) {
      double p = std::arg(dg(static_cast<Eigen::Index>(x)));
      if (p < 0) p += kTwoPi;
      phase.push_back(p);
      Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
      e(static_cast<Eigen::Index>(x)) = 1.0;
      vecs.push_back(std::move(e));
    }
  } else {
    for (const auto& cl : eig_unitary(u))
      for (Eigen::Index c = 0; c < cl.basis.cols(); ++c) {
        phase.push_back(cl.phase);
        vecs.emplace_back(cl.basis.col(c));
      }
  }
  const double anchor = phase.front();
  const double step = kTwoPi / static_cast<double>(length);
  std::vector<std::vector<std::pair<double, std::size_t>>> arcs(length);
  for (std::size_t x = 0; x < phase.size(); ++x) {
    double rel = std::fmod(phase[x] - anchor + kTwoPi, kTwoPi);
    const auto j = static_cast<std::size_t>(std::llround(rel / step)) % length;
    arcs[j].emplace_back(angle_distance(rel, step * static_cast<double>(j)), x);
  }
  std::size_t d = n;
  for (auto& a : arcs) {
    std::stable_sort(a.begin(), a.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    d = std::min(d, a.size());
  }
  if (d == 0) return RokhlinTower::empty(n, false);
  std::vector<Matrix> classes;
  for (const auto& a : arcs) {
    Matrix c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t t = 0; t < d; ++t) c.col(static_cast<Eigen::Index>(t)) = vecs[a[t].second];
    classes.push_back(std::move(c));
  }
  return RokhlinTower::dense(eigen_tuple_projections(classes, n), false);
}

TowerDefects tower_defects(const RokhlinTower& t, const Unitary& u, std::span<const Matrix> f) {
  const std::size_t n = t.dim();
  if (u.dim() != n) throw Error("tower_defects: unitary and tower dimensions differ");
  for (const auto& a : f)
    if (static_cast<std::size_t>(a.rows()) != n || static_cast<std::size_t>(a.cols()) != n)
      throw Error("tower_defects: test element dimension mismatch");
  TowerDefects out;
  const std::size_t len = t.length();
  out.trace = std::abs(1.0 - t.trace_covered());
  if (len == 0) return out;
  const std::size_t shifts = t.cyclic() ? len : len - 1;

  if (t.is_diagonal() && (u.is_exact() || u.is_diagonal())) {
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = i + 1; j < len; ++j)
        out.orthogonality = std::max(out.orthogonality, t.diagonal(i).cwiseProduct(t.diagonal(j)).cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < shifts; ++i) {
      const Eigen::VectorXd moved = u.is_exact() ? permute_diagonal(u, t.diagonal(i)) : t.diagonal(i);
      out.shift = std::max(out.shift, (moved - t.diagonal((i + 1) % len)).cwiseAbs().maxCoeff());
    }
    for (const auto& a : f)
      for (std::size_t i = 0; i < len; ++i) {
        const Eigen::VectorXd& d = t.diagonal(i);
        Matrix c(a.rows(), a.cols());
        for (Eigen::Index y = 0; y < a.cols(); ++y)
          for (Eigen::Index x = 0; x < a.rows(); ++x) c(x, y) = (d(x) - d(y)) * a(x, y);
        out.commutation = std::max(out.commutation, operator_norm(c));
      }
    return out;
  }

  const RokhlinTower dt = t.densified();
  std::vector<Matrix> p;
  for (std::size_t i = 0; i < len; ++i) p.push_back(dt.projection(i));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j) out.orthogonality = std::max(out.orthogonality, operator_norm(p[i] * p[j]));
  for (std::size_t i = 0; i < shifts; ++i)
    out.shift = std::max(out.shift, hermitian_norm(u.conjugate(p[i]) - p[(i + 1) % len]));
  for (const auto& a : f)
    for (const auto& q : p) out.commutation = std::max(out.commutation, operator_norm(q * a - a * q));
  return out;
}

RokhlinTower group_tower(const RokhlinTower& t, std::size_t target) {
  if (target == 0) throw Error("group_tower: target length must be positive");
  const std::size_t len = t.length();
  if (len < target) throw Error("group_tower: tower shorter than the target length");
  if (len == target) return t;
  const std::size_t q = len / target;
  const bool cyclic = t.cyclic() && len % target == 0;
  if (t.is_diagonal()) {
    std::vector<Eigen::VectorXd> out(target, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.dim())));
    for (std::size_t i = 0; i < q * target; ++i) out[i % target] += t.diagonal(i);
    return RokhlinTower::diagonal(std::move(out), cyclic);
  }
  std::vector<Matrix> sums(target, Matrix::Zero(static_cast<Eigen::Index>(t.dim()), static_cast<Eigen::Index>(t.dim())));
  for (std::size_t i = 0; i < q * target; ++i) sums[i % target] += t.projection(i);
  std::vector<Projection> ps;
  for (auto& s : sums) ps.emplace_back(std::move(s), 1e-8);
  return RokhlinTower::dense(std::move(ps), cyclic);
}

TensorMode parse_tensor_mode(const std::string& s) {
  if (s == "extend-left") return TensorMode::ExtendLeft;
  if (s == "extend-right") return TensorMode::ExtendRight;
  if (s == "order-k-extend") return TensorMode::OrderKExtend;
  if (s == "compose-k") return TensorMode::ComposeK;
  throw Error("unknown tensor mode '" + s + "'");
}

RokhlinTower tensor_tower(const RokhlinTower& a, const RokhlinTower& b, TensorMode mode, const Unitary* u_a) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  if (mode == TensorMode::OrderKExtend && !a.cyclic()) throw Error("tensor_tower: order-k extension needs a cyclic tower");
  if (mode == TensorMode::ComposeK) {
    if (!b.cyclic() || b.length() == 0) throw Error("tensor_tower: compose-k needs a nonempty cyclic second tower");
    if (u_a == nullptr || u_a->dim() != na) throw Error("tensor_tower: compose-k needs the first stage unitary");
  }
  const bool right = mode == TensorMode::ExtendRight;
  const RokhlinTower& src = right ? b : a;
  if (mode != TensorMode::ComposeK) {
    if (src.length() == 0) return RokhlinTower::empty(n, src.cyclic());
    if (src.is_diagonal()) {
      std::vector<Eigen::VectorXd> out;
      for (std::size_t i = 0; i < src.length(); ++i)
        out.push_back(right ? kron_vec(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(na)), src.diagonal(i))
                            : kron_vec(src.diagonal(i), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(nb))));
      return RokhlinTower::diagonal(std::move(out), src.cyclic());
    }
    checked_dense(n, "tensor_tower");
    std::vector<Projection> out;
    for (std::size_t i = 0; i < src.length(); ++i)
      out.emplace_back(right ? kron(identity(na), src.projection(i)) : kron(src.projection(i), identity(nb)));
    return RokhlinTower::dense(std::move(out), src.cyclic());
  }

  const std::size_t k = b.length();
  if (a.length() == 0) return RokhlinTower::empty(n, a.cyclic());
  if (a.is_diagonal() && b.is_diagonal() && u_a->is_exact()) {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < a.length(); ++i) {
      Eigen::VectorXd moved = a.diagonal(i);
      for (std::size_t j = 0; j < k; ++j) {
        out.push_back(kron_vec(moved, b.diagonal(j)));
        moved = permute_diagonal(*u_a, moved);
      }
    }
    return RokhlinTower::diagonal(std::move(out), a.cyclic());
  }
  checked_dense(n, "tensor_tower");
  std::vector<Projection> out;
  for (std::size_t i = 0; i < a.length(); ++i) {
    Matrix moved = a.projection(i);
    for (std::size_t j = 0; j < k; ++j) {
      out.emplace_back(kron(moved, b.projection(j)), 1e-8);
      moved = u_a->conjugate(moved);
    }
  }
  return RokhlinTower::dense(std::move(out), a.cyclic());
}

double TowerCensus::trace_defect() const {
  return 1.0 - static_cast<double>(covered) / static_cast<double>(dim);
}

TowerCensus diagonal_census(std::span<const Unitary> factors, std::int64_t k) {
  if (k <= 0) throw Error("diagonal_census: k must be positive");
  std::vector<std::int64_t> hist(static_cast<std::size_t>(k), 0);
  hist[0] = 1;
  std::int64_t dim = 1;
  for (const auto& f : factors) {
    if (!f.is_exact() || !f.is_diagonal()) throw Error("diagonal_census: factor is not an exact diagonal unitary");
    std::vector<std::int64_t> local(static_cast<std::size_t>(k), 0);
    for (const auto& ph : f.diagonal_phases_exact()) {
      const Rational j = ph * k;
      if (j.denominator() != 1) throw Error("diagonal_census: factor eigenvalue is not a k-th root of unity");
      ++local[static_cast<std::size_t>(j.numerator() % k)];
    }
    const auto fd = static_cast<std::int64_t>(f.dim());
    if (dim > (std::int64_t{1} << 62) / fd) throw Error("diagonal_census: block dimension overflow");
    dim *= fd;
    std::vector<std::int64_t> next(static_cast<std::size_t>(k), 0);
    for (std::int64_t x = 0; x < k; ++x)
      for (std::int64_t y = 0; y < k; ++y)
        next[static_cast<std::size_t>((x + y) % k)] += hist[static_cast<std::size_t>(x)] * local[static_cast<std::size_t>(y)];
    hist = std::move(next);
  }
  return {dim, k * *std::min_element(hist.begin(), hist.end())};
}

TowerCensus orbit_census(std::span<const Unitary> factors, std::int64_t k) {
  if (k <= 0) throw Error("orbit_census: k must be positive");
  std::map<std::int64_t, std::int64_t> cycles{{1, 1}};
  std::int64_t dim = 1;
  for (const auto& f : factors) {
    if (!f.is_exact()) throw Error("orbit_census: factor is not an exact monomial unitary");
    const auto& perm = f.monomial().perm;
    std::map<std::int64_t, std::int64_t> local;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t x0 = 0; x0 < perm.size(); ++x0) {
      if (seen[x0]) continue;
      std::int64_t len = 0;
      for (std::size_t x = x0; !seen[x]; x = perm[x]) {
        seen[x] = true;
        ++len;
      }
      ++local[len];
    }
    const auto fd = static_cast<std::int64_t>(f.dim());
    if (dim > (std::int64_t{1} << 62) / fd) throw Error("orbit_census: block dimension overflow");
    dim *= fd;
    std::map<std::int64_t, std::int64_t> next;
    for (const auto& [a, ca] : cycles)
      for (const auto& [b, cb] : local) next[std::lcm(a, b)] += ca * cb * std::gcd(a, b);
    cycles = std::move(next);
  }
  std::int64_t covered = 0;
  for (const auto& [len, count] : cycles)
    if (len % k == 0) covered += len * count;
  return {dim, covered};
}

ScheduleRule ScheduleRule::geometric() {
  return {[](std::size_t l) { return std::ldexp(1.0, -static_cast<int>(l)); }, "2^-l"};
}

ScheduleRule ScheduleRule::listed(std::vector<double> values) {
  auto shared = std::make_shared<const std::vector<double>>(std::move(values));
  return {[shared](std::size_t l) {
            if (l == 0 || l > shared->size()) throw Error("schedule: no epsilon listed for stage " + std::to_string(l));
            return (*shared)[l - 1];
          },
          "listed"};
}

void ScheduleRule::validate(std::size_t l_max) const {
  double prev = 0.0;
  for (std::size_t l = 1; l <= l_max; ++l) {
    const double e = epsilon(l);
    if (!(e > 0.0)) throw Error("schedule: epsilon must be positive at stage " + std::to_string(l));
    if (l > 1 && !(e < prev)) throw Error("schedule: epsilon must be strictly decreasing at stage " + std::to_string(l));
    prev = e;
  }
}

namespace {

struct Candidate {
  TowerDefects defects;
  std::size_t length = 0;
  std::string route;
  std::optional<RokhlinTower> tower;
};

Candidate finite_candidate(const std::vector<Unitary>& fs, std::int64_t k, double cluster_tol) {
  bool diagonal = true, exact = true;
  for (const auto& f : fs) {
    exact = exact && f.is_exact();
    diagonal = diagonal && f.is_exact() && f.is_diagonal();
  }
  Candidate c;
  if (diagonal) {
    c.route = "census";
    const TowerCensus census = diagonal_census(fs, k);
    c.length = census.covered > 0 ? static_cast<std::size_t>(k) : 0;
    c.defects.trace = census.trace_defect();
    if (static_cast<std::size_t>(census.dim) <= kVerifyLimit) {
      const Unitary u = kron_all(fs);
      c.tower = best_cyclic_tower(u, k, cluster_tol);
      c.defects = tower_defects(*c.tower, u);
    }
    return c;
  }
  if (exact) {
    c.route = "orbit";
    const TowerCensus census = orbit_census(fs, k);
    c.length = census.covered > 0 ? static_cast<std::size_t>(k) : 0;
    c.defects.trace = census.trace_defect();
    if (static_cast<std::size_t>(census.dim) <= kOrbitMaterializeLimit) {
      const Unitary u = kron_all(fs);
      c.tower = orbit_tower(u, k);
      c.defects = tower_defects(*c.tower, u);
    }
    return c;
  }
  c.route = "dense";
  std::size_t n = 1;
  for (const auto& f : fs) n *= f.dim();
  checked_dense(n, "certify_schedule");
  const Unitary u = kron_all(fs);
  c.tower = best_cyclic_tower(u, k, cluster_tol);
  c.length = c.tower->length();
  c.defects = tower_defects(*c.tower, u);
  return c;
}

}  // namespace

TowerSchedule certify_schedule(const ProductAction& a, const Element& g, std::optional<std::int64_t> k,
                               std::size_t l_max, const ScheduleRule& rule, const CertifyOptions& options) {
  if (l_max == 0) throw Error("certify_schedule: l_max must be positive");
  if (options.block_cap == 0) throw Error("certify_schedule: block cap must be positive");
  rule.validate(l_max);
  const auto& group = a.group();
  const Element h = group.normalize(g);
  const auto order = group.order_of(h);
  if (k) {
    if (*k <= 0) throw Error("certify_schedule: k must be positive");
    if (!order || *order != *k)
      throw Error("certify_schedule: element " + group.describe(h) + " does not have order " + std::to_string(*k));
  } else if (order) {
    throw Error("certify_schedule: element " + group.describe(h) + " has finite order " + std::to_string(*order));
  }

  TowerSchedule out;
  out.k = k;
  out.rule = rule.name;
  out.pass = true;
  std::size_t begin = 0;
  for (std::size_t l = 1; l <= l_max; ++l) {
    const double eps = rule.epsilon(l);
    std::vector<Unitary> fs;
    TowerStage st;
    st.stage = l;
    st.begin = begin;
    st.epsilon = eps;
    std::string stop;
    for (std::size_t end = begin + 1; end <= begin + options.block_cap; ++end) {
      if (!a.factors().has(end - 1))
        throw Error("certify_schedule: stage data exhausted before stage " + std::to_string(l_max));
      fs.push_back(a.factor_image(h, end - 1));
      const std::int64_t size = a.factors().product(begin, end);
      Candidate c;
      try {
        if (k) {
          c = finite_candidate(fs, *k, options.cluster_tol);
        } else {
          c.route = "arc";
          checked_dense(static_cast<std::size_t>(size), "certify_schedule");
          const Unitary u = kron_all(fs);
          c.tower = arc_tower(u, l);
          c.length = c.tower->length();
          c.defects = tower_defects(*c.tower, u);
        }
      } catch (const Error& e) {
        if (end == begin + 1) throw;
        stop = e.what();
        break;
      }
      st.end = end;
      st.block_size = size;
      st.tower_length = c.length;
      st.defects = c.defects;
      st.route = c.route;
      st.tower = std::move(c.tower);
      st.pass = st.defects.max() <= eps;
      if (st.pass) break;
    }
    out.stages.push_back(std::move(st));
    const TowerStage& last = out.stages.back();
    if (!last.pass) {
      out.pass = false;
      out.diagnostics = "stage " + std::to_string(l) + ": defect " + fmt(last.defects.max()) + " > epsilon " + fmt(eps) +
                        " with block [" + std::to_string(last.begin) + ", " + std::to_string(last.end) + ")" +
                        (stop.empty() ? " at the block cap" : "; " + stop);
      break;
    }
    begin = last.end;
  }
  return out;
}

std::string schedule_csv(const TowerSchedule& s) {
  std::ostringstream os;
  os << "stage,block_size,tower_length,ortho_defect,shift_defect,trace_defect,epsilon,pass\n";
  for (const auto& st : s.stages)
    os << st.stage << ',' << st.block_size << ',' << st.tower_length << ',' << fmt(st.defects.orthogonality) << ','
       << fmt(st.defects.shift) << ',' << fmt(st.defects.trace) << ',' << fmt(st.epsilon) << ','
       << (st.pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace uhf
