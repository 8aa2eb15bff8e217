#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/linalg.hpp"

namespace uhf {

/// Largest ambient dimension at which towers are materialized as dense matrices.
inline constexpr std::size_t kTowerDenseLimit = 1024;

/// Ordered projections in a common M_N, stored densely or, for towers of
/// coordinate projections, as 0/1 diagonals.
class RokhlinTower {
 public:
  static RokhlinTower dense(std::vector<Projection> projections, bool cyclic);
  static RokhlinTower diagonal(std::vector<Eigen::VectorXd> diagonals, bool cyclic);
  /// Zero-length tower in M_n.
  static RokhlinTower empty(std::size_t n, bool cyclic);

  std::size_t length() const { return length_; }
  std::size_t dim() const { return dim_; }
  bool cyclic() const { return cyclic_; }
  bool is_diagonal() const { return diagonal_storage_; }

  Matrix projection(std::size_t i) const;
  /// Diagonal of projection i; throws for dense towers.
  const Eigen::VectorXd& diagonal(std::size_t i) const;
  double trace(std::size_t i) const;
  double trace_covered() const;
  /// Dense copy of the tower.
  RokhlinTower densified() const;

 private:
  std::vector<Projection> dense_;
  std::vector<Eigen::VectorXd> diag_;
  std::size_t length_ = 0;
  std::size_t dim_ = 0;
  bool cyclic_ = false;
  bool diagonal_storage_ = false;
};

struct TowerDefects {
  double orthogonality = 0.0;  // max ||p_i p_j||, i != j
  double shift = 0.0;          // max ||Ad U(p_i) - p_{i+1}||
  double trace = 0.0;          // |1 - tau(sum p_i)|
  double commutation = 0.0;    // max ||[p_i, a]||, a in F
  double max() const;
};

/// Cyclic tower of k projections from matched eigen-tuples of u.
RokhlinTower best_cyclic_tower(const Unitary& u, std::int64_t k, double cluster_tol = 1e-8);
/// Coordinate-projection tower of an exact monomial unitary: points on cycles
/// whose length is divisible by k, split by position modulo k.
RokhlinTower orbit_tower(const Unitary& u, std::int64_t k);
/// Non-cyclic tower of the given length from eigenvectors grouped by arcs of
/// the circle around the length-th roots of unity, rotated to the first eigenphase.
RokhlinTower arc_tower(const Unitary& u, std::size_t length);

TowerDefects tower_defects(const RokhlinTower& t, const Unitary& u, std::span<const Matrix> f = {});

/// Sums projections by residue modulo target, dropping the trailing remainder.
RokhlinTower group_tower(const RokhlinTower& t, std::size_t target);

enum class TensorMode { ExtendLeft, ExtendRight, OrderKExtend, ComposeK };
TensorMode parse_tensor_mode(const std::string& s);

/// p_i (x) 1 (ExtendLeft, OrderKExtend), 1 (x) q_j (ExtendRight), or
/// Ad(u_a^j)(p_i) (x) q_j at position i k + j (ComposeK, b cyclic of length k).
RokhlinTower tensor_tower(const RokhlinTower& a, const RokhlinTower& b, TensorMode mode,
                          const Unitary* u_a = nullptr);

/// Counts behind census and orbit certificates for exact block unitaries.
struct TowerCensus {
  std::int64_t dim = 0;
  std::int64_t covered = 0;  // rank of the union of the tower
  double trace_defect() const;
};
/// Eigenvalue-class census of an exact diagonal block given factor by factor.
TowerCensus diagonal_census(std::span<const Unitary> factors, std::int64_t k);
/// Cycle census of an exact monomial block given factor by factor.
TowerCensus orbit_census(std::span<const Unitary> factors, std::int64_t k);

struct ScheduleRule {
  std::function<double(std::size_t)> epsilon;  // stage l >= 1
  std::string name;
  static ScheduleRule geometric();  // 2^{-l}
  static ScheduleRule listed(std::vector<double> values);
  /// Throws unless epsilon is positive and strictly decreasing on 1..l_max.
  void validate(std::size_t l_max) const;
};

struct TowerStage {
  std::size_t stage = 0;  // 1-based
  std::size_t begin = 0;  // factor range [begin, end)
  std::size_t end = 0;
  std::int64_t block_size = 0;
  std::size_t tower_length = 0;
  TowerDefects defects;
  double epsilon = 0.0;
  bool pass = false;
  std::string route;  // census, orbit, dense, arc
  std::optional<RokhlinTower> tower;
};

struct TowerSchedule {
  std::optional<std::int64_t> k;  // nullopt: infinite order
  std::string rule;
  std::vector<TowerStage> stages;
  bool pass = false;
  std::string diagnostics;
};

struct CertifyOptions {
  std::size_t block_cap = 12;
  double cluster_tol = 1e-8;
};

/// Greedy regrouping with a tower per block; PASS iff every stage up to l_max
/// meets its epsilon.
TowerSchedule certify_schedule(const ProductAction& a, const Element& g, std::optional<std::int64_t> k,
                               std::size_t l_max, const ScheduleRule& rule, const CertifyOptions& options = {});

/// CSV with columns stage, block_size, tower_length, ortho_defect, shift_defect,
/// trace_defect, epsilon, pass.
std::string schedule_csv(const TowerSchedule& s);

}  // namespace uhf
