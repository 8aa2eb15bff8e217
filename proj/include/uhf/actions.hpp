#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "uhf/groups.hpp"
#include "uhf/sequence.hpp"

namespace uhf {

/// Images of one tensor factor: one per element for table groups, one per
/// generator for presented groups.
struct Factor {
  std::int64_t dim = 0;
  std::vector<Unitary> images;
};

/// Tensor of the first factor images at a stage, with its dimension vector.
struct StageUnitary {
  std::vector<std::int64_t> dims;
  Unitary u;
  std::size_t stage() const { return dims.size(); }
};

class ProductAction {
 public:
  using FactorFn = std::function<Factor(std::size_t)>;

  ProductAction(GroupSpec group, FactorSequence factors, FactorFn fn, std::string name);

  const GroupSpec& group() const { return *group_; }
  const FactorSequence& factors() const { return factors_; }
  const std::string& name() const { return name_; }

  Factor factor(std::size_t l) const;
  Unitary factor_image(const Element& g, std::size_t l) const;
  /// Tensor of factor images over [begin, end).
  Unitary block_image(const Element& g, std::size_t begin, std::size_t end) const;
  Unitary evaluate(const Element& g, std::size_t stage) const { return block_image(g, 0, stage); }
  StageUnitary stage(const Element& g, std::size_t stage) const;
  /// Homomorphism defect of factor l: full table for finite groups,
  /// relations (orders and commutation) for presented groups.
  double factor_defect(std::size_t l) const;

 private:
  std::shared_ptr<const GroupSpec> group_;
  FactorSequence factors_;
  FactorFn fn_;
  std::string name_;
};

/// Product action with the same images in every factor of a sequence.
ProductAction constant_action(GroupSpec group, const Representation& rho, std::string name);
/// Per-factor images drawn from a list, cycled after an optional head.
ProductAction explicit_action(GroupSpec group, std::vector<Factor> head, std::vector<Factor> period, std::string name);

ProductAction regular_action(const GroupSpec& g);
ProductAction trivial_action(const GroupSpec& g, FactorSequence factors);
/// Factor n_l carries psi[g] for the l-th non-identity g, cycling.
ProductAction map_embed_action(const GroupSpec& g);

/// diag(e^{2 pi i theta_n l r}), l = 1..n, theta_n = 1 for odd n and theta for even n.
Unitary diagonal_flow(std::int64_t n, const Theta& theta, const Rational& r);
Unitary diagonal_flow(std::int64_t n, const Theta& theta, double r);
/// Permutation matrix of the cycle (1 2 ... n).
Unitary cycle_unitary(std::int64_t n);

/// Number of images per factor: one per element or one per generator.
std::size_t image_count(const GroupSpec& g);
/// Tensor of a's factors over [begin, end) as one factor.
Factor block_factor(const ProductAction& a, std::size_t begin, std::size_t end);

/// Interleaves two actions of the same group.
ProductAction tensor_actions(const ProductAction& a, const ProductAction& b);
/// Round-robin interleaving of actions of the same group.
ProductAction tensor_actions(const std::vector<ProductAction>& parts, std::string name);
/// Action of the direct sum, each summand acting on its own factors.
ProductAction sum_actions(const ProductAction& a, const ProductAction& b);
ProductAction tensor_power(const ProductAction& a, std::size_t copies);

/// Strictly increasing regrouping of a's factors: block j covers [begin_j, end_j).
struct IncreasingBlocks {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::vector<std::int64_t> sizes;
};
IncreasingBlocks increasing_blocks(const FactorSequence& seq, std::int64_t max_size);

/// a placed on the universal pattern 2, 3, 4, ...: the factor M_n carries the
/// block of a with size n, every other factor the identity.
ProductAction interleave_identity(const ProductAction& a);
/// Universal-pattern position (0-based) of each active block, for the first `count` blocks.
std::vector<std::size_t> interleave_positions(const ProductAction& a, std::size_t count);

/// Product action of a presented abelian group on interleaved copies of the
/// universal pattern, one per Q or Q/Z coordinate in use.
ProductAction abelian_action(const GroupSpec& g, const Theta& theta);
/// The interleaved parts of abelian_action, one per summand of abelian_summands.
std::vector<ProductAction> abelian_summand_actions(const GroupSpec& g, const Theta& theta);

struct FlowSummand {
  std::size_t coordinate;
  bool rational_part;  // Q part (theta flow) or Q/Z part (theta = 1)
  Theta theta;
};
std::vector<FlowSummand> abelian_summands(const AbelianGroup& g, const Theta& theta);

}  // namespace uhf
