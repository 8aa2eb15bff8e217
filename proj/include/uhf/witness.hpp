#pragma once

#include <span>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/linalg.hpp"

namespace uhf {

inline constexpr std::size_t kWitnessWindow = 8;
inline constexpr double kWitnessThreshold = 1e-3;

/// Values tau([u_n, v_n]) with a trailing-window gap statistic.
struct WitnessSeries {
  std::vector<std::int64_t> index;
  std::vector<Complex> values;
  std::size_t window = kWitnessWindow;
  double threshold = kWitnessThreshold;
  /// Entries are split into this many residue classes of their position;
  /// the gap is the largest per-class trailing minimum.
  std::size_t classes = 1;

  /// min of |1 - value| over the last `window` entries of a class, maximized over classes.
  double gap() const;
  bool witness() const { return gap() >= threshold; }
};

/// tau(u v u* v*)
Complex commutator_trace(const Unitary& u, const Unitary& v);

WitnessSeries commutator_trace_sequence(std::span<const Unitary> u, std::span<const Unitary> v,
                                        std::vector<std::int64_t> index = {}, std::size_t window = kWitnessWindow,
                                        double threshold = kWitnessThreshold);

/// e^{-2 pi theta_n i r}(n^{-1} e^{-2 n pi i r} + n^{-1}(n - 1)), theta_n = 1 for odd n.
Complex closed_form_flow_trace(std::int64_t n, double theta, double r);
/// tau([cycle_unitary(n), diagonal_flow(n, theta, r)]) in closed form:
/// e^{-2 pi i theta_n r}(n^{-1} e^{2 pi i theta_n n r} + n^{-1}(n - 1)).
Complex flow_trace(std::int64_t n, double theta, double r);

/// ||Ad U(v(n)) - v(n)||_2 with v placed in factor `factor_index` of the stage.
double weak_inner_defect(const StageUnitary& u, const Unitary& v, std::size_t factor_index);

/// ||a - b||_2 without densifying monomial or diagonal operands.
double two_norm_distance(const Unitary& a, const Unitary& b);

/// Diagonal u: the permutation shifting indices by n/2 in order of increasing phase.
/// Exact non-diagonal u: diag(e^{2 pi i j/n}). Otherwise a cycle E C E* in the eigenbasis of u.
Unitary default_test_unitary(const Unitary& u);

/// Witness over the first `count` factors of a on which g acts non-trivially,
/// pairing each factor image with its default test unitary.
WitnessSeries action_witness(const ProductAction& a, const Element& g, std::size_t count, std::size_t classes = 1,
                             std::size_t window = kWitnessWindow, double threshold = kWitnessThreshold);

/// CSV rows n, re_tau, im_tau, abs_one_minus_tau and a closing verdict line.
std::string witness_csv(const WitnessSeries& s);

}  // namespace uhf
