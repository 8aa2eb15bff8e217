#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/groups.hpp"
#include "uhf/linalg.hpp"

namespace uhf {

/// Largest N |G| realized densely by crossed stages.
inline constexpr std::size_t kCrossedDenseLimit = 512;
inline constexpr double kCovarianceTol = 1e-10;
inline constexpr double kCollapseThreshold = 1e-6;

/// Regular covariant representation of M_N x| G on C^N (x) C^|G|:
/// pi(x) = sum_h alpha_{h^-1}(x) (x) e_hh and u_g = 1 (x) lambda_g.
class CrossedStage {
 public:
  CrossedStage(FiniteGroup group, std::size_t stage, std::vector<Unitary> alpha);

  const FiniteGroup& group() const { return group_; }
  std::size_t stage() const { return stage_; }
  std::size_t dim() const { return n_; }  // N_m
  std::size_t ambient() const { return n_ * group_.order(); }
  /// Inner automorphism alpha_g = Ad alpha(g) of M_N.
  const Unitary& alpha(std::size_t g) const { return alpha_[g]; }
  const std::vector<Unitary>& alphas() const { return alpha_; }

  Matrix pi(const Matrix& x) const;
  Matrix u(std::size_t g) const;

 private:
  FiniteGroup group_;
  std::size_t stage_;
  std::size_t n_;
  std::vector<Unitary> alpha_;
};

/// Stage m of a product action of a finite table group (m = 0 gives C*(G)).
CrossedStage crossed_stage(const ProductAction& a, std::size_t m);

struct CovarianceReport {
  double covariance = 0.0;      // max ||u_g pi(e_ij) u_g* - pi(alpha_g(e_ij))||
  double representation = 0.0;  // max ||u_g u_h - u_gh|| and ||pi(x) pi(y) - pi(xy)|| on matrix units
  bool pass = false;
  std::string text() const;
};

CovarianceReport verify_covariance(const CrossedStage& s);

/// sum_g x_g (x) u_g in M_N (x) C*(G), one coefficient per element.
struct GroupAlgebraElement {
  std::vector<Matrix> coeff;
  std::size_t dim() const { return coeff.empty() ? 0 : static_cast<std::size_t>(coeff.front().rows()); }
};

GroupAlgebraElement group_algebra_zero(std::size_t n, std::size_t order);
/// x (x) u_g
GroupAlgebraElement group_algebra_term(const Matrix& x, std::size_t g, std::size_t order);
GroupAlgebraElement group_algebra_multiply(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
                                           const FiniteGroup& g);
GroupAlgebraElement group_algebra_adjoint(const GroupAlgebraElement& a, const FiniteGroup& g);
/// sum_g x_g (x) lambda_g on C^N (x) C^|G|.
Matrix realize(const GroupAlgebraElement& a, const FiniteGroup& g);

/// Phi_m(x (x) u_g) = ((x (x) 1_n) (1 (x) g_{m+1})) (x) u_g.
class ConnectingMap {
 public:
  /// Throws unless the images form a unitary representation.
  ConnectingMap(FiniteGroup group, std::size_t source_dim, std::vector<Unitary> images);

  const FiniteGroup& group() const { return group_; }
  std::size_t source_dim() const { return n_; }
  std::size_t factor_dim() const { return k_; }
  GroupAlgebraElement apply(const GroupAlgebraElement& a) const;

 private:
  FiniteGroup group_;
  std::size_t n_;
  std::size_t k_;
  std::vector<Unitary> images_;
};

/// Phi_m for stage s of a and the next stage it maps into.
struct Connection {
  ConnectingMap map;
  CrossedStage next;
};
Connection connecting_map(const CrossedStage& s, std::vector<Unitary> images);

struct ConnectingReport {
  double multiplicativity = 0.0;  // max ||Phi(ab) - Phi(a)Phi(b)|| over random words
  double adjoint = 0.0;           // max ||Phi(a*) - Phi(a)*||
  double unital = 0.0;            // ||Phi(1) - 1||
  double norm = 0.0;              // max | ||Phi(a)|| - ||a|| | over random elements
  bool pass = false;
};

/// Words of 1..4 generators (matrix units and u_g) and random combinations.
ConnectingReport verify_connecting_map(const ConnectingMap& phi, std::size_t words, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Traces

/// C*(G) on the left regular representation, with tracial states as the convex
/// hull of the normalized irreducible characters.
struct GroupCStar {
  FiniteGroup group;
  std::vector<Unitary> lambda;
  std::vector<std::vector<Complex>> vertices;  // per vertex, chi(g) for every element
};

GroupCStar group_cstar_stage(const FiniteGroup& g);

/// chi_m(g) = tau(g_{m+1}) chi_{m+1}(g) for one factor's images.
std::vector<Complex> trace_pullback(const std::vector<Complex>& chi, const std::vector<Unitary>& images);

/// Smallest eigenvalue of [chi(h^-1 g)] and |chi(e) - 1|.
struct PositivityCheck {
  double min_eigenvalue = 0.0;
  double normalization = 0.0;
  bool pass(double tol = 1e-10) const { return min_eigenvalue >= -tol && normalization <= tol; }
};
PositivityCheck check_positive_definite(const std::vector<Complex>& chi, const FiniteGroup& g);

struct TraceSimplexState {
  std::size_t depth = 0;
  std::size_t factor = 0;  // 1-based factor applied at this depth, 0 at depth 0
  std::vector<std::vector<Complex>> vertices;
  std::vector<double> scaling;  // per conjugacy class, |tau(g_m)| of the factor applied
  std::vector<double> partial;  // per conjugacy class, |prod tau(g_m)| so far
  double diameter = 0.0;
};

/// max over g != e of the Re and Im spreads over vertices.
double simplex_diameter(const std::vector<std::vector<Complex>>& vertices, const FiniteGroup& g);

/// Depth d pulls the stage-L polytope back through factors L, L-1, ..., L-d+1.
std::vector<TraceSimplexState> trace_simplex_diameter(const ProductAction& a, std::size_t depth);

/// "collapse" when the final diameter is at most kCollapseThreshold.
std::string simplex_verdict(const std::vector<TraceSimplexState>& states);

/// Rows depth, class_id, scaling_modulus, partial_product, diameter.
std::string simplex_csv(const std::vector<TraceSimplexState>& states);

/// Z/2 acting on factor m (1-based) by diag(1, ..., 1, -1) in M_{2^{m+1}}.
ProductAction control_family_action();
/// Z/2 acting by diag(1, 1, -1) on every M_3.
ProductAction sign_three_action();

}  // namespace uhf
