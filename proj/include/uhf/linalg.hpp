#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace uhf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rational = boost::rational<std::int64_t>;

/// Raised for violated preconditions and malformed inputs throughout the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Largest dimension a unitary is allowed to materialize densely.
inline constexpr std::size_t kDenseLimit = 8192;

/// Reduces a rational phase into [0, 1).
Rational reduce_phase(Rational r);
/// e^{2 pi i r}
Complex phase_value(const Rational& r);
Complex phase_value(double r);

Matrix kron(const Matrix& a, const Matrix& b);
Complex normalized_trace(const Matrix& a);
double two_norm(const Matrix& a);
double operator_norm(const Matrix& a);
bool approx_equal(const Matrix& a, const Matrix& b, double tol);
Matrix identity(std::size_t n);
Matrix commutator(const Matrix& a, const Matrix& b);  // ab - ba

/// Unitary matrix in one of three storages. The monomial form carries exact
/// rational phases: U e_j = e^{2 pi i phase[j]} e_{perm[j]}.
class Unitary {
 public:
  struct Monomial {
    std::vector<std::size_t> perm;
    std::vector<Rational> phase;
  };

  static Unitary from_matrix(Matrix m, double tol = kStructuralTol);
  static Unitary from_diagonal(Vector d, double tol = kStructuralTol);
  static Unitary from_monomial(Monomial m);
  static Unitary diagonal_phases(std::vector<Rational> phases);
  /// Permutation sending e_j to e_{perm[j]}.
  static Unitary permutation(std::vector<std::size_t> perm);
  static Unitary identity(std::size_t n);

  std::size_t dim() const;
  bool is_exact() const { return std::holds_alternative<Monomial>(store_); }
  bool is_diagonal() const;
  bool is_identity(double tol = kIdentityTol) const;

  const Monomial& monomial() const;
  /// Diagonal entries; throws unless is_diagonal().
  Vector diagonal() const;
  /// Exact diagonal phases; throws unless exact and diagonal.
  std::vector<Rational> diagonal_phases_exact() const;
  Matrix dense() const;

  Unitary adjoint() const;
  Unitary pow(std::int64_t e) const;
  Complex normalized_trace() const;
  /// U x U*
  Matrix conjugate(const Matrix& x) const;

  friend Unitary operator*(const Unitary& a, const Unitary& b);
  friend Unitary kron(const Unitary& a, const Unitary& b);

 private:
  using Store = std::variant<Monomial, Vector, Matrix>;
  explicit Unitary(Store s) : store_(std::move(s)) {}
  Store store_;
};

/// Block diagonal direct sum diag(a, b).
Unitary direct_sum(const Unitary& a, const Unitary& b);
Unitary kron_all(std::span<const Unitary> factors);

class Projection {
 public:
  explicit Projection(Matrix p, double tol = kStructuralTol);
  static Projection zero(std::size_t n);
  const Matrix& matrix() const { return p_; }
  std::size_t dim() const { return static_cast<std::size_t>(p_.rows()); }
  double trace() const { return normalized_trace(p_).real(); }

 private:
  Matrix p_;
};

/// Spectral projection of a onto eigenvalues above 1/2. Requires a = a*,
/// ||a^2 - a|| < delta < 1/4; the result lies within 2 delta of a.
Projection nearest_projection(const Matrix& a, double delta);

/// Exactly orthogonal projections near the (almost orthogonal) inputs, via the
/// inverse square root of the Gram operator of a joint range basis. Accepts
/// inputs whose pairwise overlaps are at most min(eps, 1) / (8 n).
std::vector<Projection> orthogonalize_projections(std::span<const Projection> q, double eps);

struct FactorCommutant {
  Matrix b;        // (tau_N (x) id)(x)
  double error;    // ||x - 1 (x) b||
  double bound;    // 10 N^3 eps
};

/// Slice of x in M_N (x) M_N' that nearly commutes with the matrix units of M_N.
FactorCommutant factor_commutant(const Matrix& x, std::size_t n, std::size_t n_prime, double eps);
/// max_{ij} ||[x, e_ij (x) 1]||
double matrix_unit_commutator_bound(const Matrix& x, std::size_t n, std::size_t n_prime);

struct SpectralCluster {
  double phase;          // in [0, 2 pi)
  Matrix basis;          // orthonormal columns spanning the eigenspace
  Matrix projection;
  std::size_t rank() const { return static_cast<std::size_t>(basis.cols()); }
};

/// Eigen-decomposition of a unitary with eigenvalues clustered within cluster_tol.
/// Clusters are sorted by phase. Throws when two clusters sit closer than
/// 3 cluster_tol to each other.
std::vector<SpectralCluster> eig_unitary(const Unitary& u, double cluster_tol = 1e-8);

/// Circular distance between two angles.
double angle_distance(double a, double b);

}  // namespace uhf
