#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uhf/actions.hpp"
#include "uhf/rokhlin.hpp"
#include "uhf/sequence.hpp"
#include "uhf/witness.hpp"

namespace uhf {

/// Largest level dimension bump_up and cut_down materialize.
inline constexpr std::int64_t kLevelLimit = std::int64_t{1} << 22;
/// Defect bound for towers reported as exact.
inline constexpr double kExactTowerTol = 1e-10;

struct Regrouping {
  FactorSequence source;
  Partition partition;
  FactorSequence result;
};

/// Checks that the listed blocks are nonempty and fit the source.
Regrouping make_regrouping(const FactorSequence& seq, const Partition& p);
/// The same action with factors grouped by p.
ProductAction regroup_action(const ProductAction& a, const Partition& p);

// ---------------------------------------------------------------------------
// Bump-up

struct BumpLevel {
  std::size_t level = 0;  // 1-based
  std::size_t source_begin = 0, source_end = 0;
  std::size_t target_begin = 0, target_end = 0;
  std::int64_t source_size = 0;  // S_l
  std::int64_t target_size = 0;  // N_l = Q_l S_l + r_l
  std::int64_t quotient = 0;     // Q_l
  std::int64_t remainder = 0;    // r_l
  bool certified = false;        // the source stage met 2^{-l}
  bool measured = false;         // a source tower or census was available
  TowerDefects source_defects;
  TowerDefects transported;      // defects of p_i -> diag(p_i (x) 1_Q, 0_r)
  double epsilon = 0.0;          // 2^{-(l-1)}
  bool pass = false;
};

struct BumpUpPlan {
  FactorSequence target;
  Partition partition;  // target blocks, one per level
  std::vector<BumpLevel> levels;
  bool pass = false;
};

struct BumpUpResult {
  ProductAction action;  // on regroup(target, plan.partition)
  BumpUpPlan plan;
  TowerSchedule source_schedule;
};

/// diag(u (x) 1_q, 1_r).
Unitary bump_unitary(const Unitary& u, std::int64_t q, std::int64_t r);
/// p_i -> diag(p_i (x) 1_q, 0_r).
RokhlinTower transport_tower(const RokhlinTower& t, std::int64_t q, std::int64_t r);

/// Smallest consecutive target blocks with S_l / N_l < 2^{-l}, l = 1, 2, ...
BumpUpPlan plan_bump(const std::vector<std::int64_t>& source_sizes, const FactorSequence& target,
                     std::size_t block_cap = 64);

/// Certifies g on the source for `levels` stages, plans the target blocks and
/// returns the action with level unitaries diag(U_l (x) 1_Q, 1_r). Factors past
/// the plan act trivially. Without require_certified, missing or failing
/// source stages fall back to singleton blocks and are reported as failing.
BumpUpResult bump_up(const ProductAction& source, const Element& g, std::optional<std::int64_t> k,
                     const FactorSequence& target, std::size_t levels, bool require_certified = true);

// ---------------------------------------------------------------------------
// Cut-down

struct CutDownBlock {
  std::size_t begin = 0, end = 0;      // source factor range
  std::vector<std::size_t> selected;   // one block index per class, classes in order 0..k-1
};

struct CutDownResult {
  ProductAction action;  // on (k, k, ...)
  std::int64_t k = 0;
  std::size_t first_stage = 0;  // l_0, 1-based
  std::vector<CutDownBlock> blocks;  // blocks from the schedule; later ones repeat the last length
};

/// First block index per eigenvalue class of g, or nullopt when a class is empty.
std::optional<std::vector<std::size_t>> select_class_entries(const ProductAction& a, const Element& g, std::int64_t k,
                                                             std::size_t begin, std::size_t end);

CutDownResult cut_down(const ProductAction& a, const Element& g, const TowerSchedule& schedule);

// ---------------------------------------------------------------------------
// Per-element towers on rounds of interleaved parts

struct ElementTower {
  Element element;
  std::string label;
  std::optional<std::int64_t> order;
  std::string route;  // trivial, single-part, extend-left, extend-right, compose-k, arc
  std::vector<TowerStage> stages;
  bool pass = false;
};

/// Cyclic tower for the tensor of `parts` raised to the power p: a single part
/// uses its orbit or eigen-tuple tower, more parts are folded with compose-k.
RokhlinTower folded_tower(const std::vector<Unitary>& parts, std::int64_t order, std::int64_t p = 1);

/// Tower of g on round l of the parts (factor l of each), l = 1..l_max.
/// Finite orders must reach kExactTowerTol, infinite orders 2^{-l} with an arc tower.
ElementTower round_towers(const std::vector<ProductAction>& parts, const Element& g, std::size_t l_max);

// ---------------------------------------------------------------------------
// Finite-index extension

struct ExtensionResult {
  ProductAction action;    // gamma = induced (x) beta o q, interleaved
  ProductAction induced;   // alpha_H^G
  std::optional<ProductAction> quotient_part;  // beta o q, absent when N = G
  ElementSet subgroup;
  ElementSet core;
  std::size_t index = 1;          // [G : H]
  std::size_t core_index = 1;     // [G : N]
  std::vector<std::size_t> coset_representatives;
  Quotient quotient;
  double character_defect = 0.0;  // max |tr rho^G(n) - [G:H] tr rho(n)|, n in N
  bool characters_invariant = true;  // rho's character is G-conjugation invariant on N
  std::vector<ElementTower> towers;
};

/// aH is an action of subgroup(G, h).group; towers are reported for `tracked`
/// (default: every non-identity element) on the first l_max rounds.
ExtensionResult extend_finite_index(const ProductAction& aH, const GroupSpec& G, const ElementSet& h,
                                    std::size_t l_max, std::vector<Element> tracked = {});

// ---------------------------------------------------------------------------
// Pipelines

struct StronglyOuterOptions {
  std::size_t copies = 2;
  std::size_t l_max = 6;
  std::size_t extra_levels = 2;  // bump levels beyond l_max
  Theta theta = Theta::sqrt(2);
  std::vector<Element> tracked;  // default: GroupSpec::tracked()
};

struct StronglyOuterResult {
  ProductAction action;      // on the target type
  ProductAction separating;  // map-embed or abelian action, tensor power
  ProductAction universal;   // separating action on the universal pattern
  std::vector<Element> tracked;
  std::vector<FactorSequence> slices;
  std::vector<BumpUpResult> bumps;
  std::vector<TowerSchedule> schedules;  // per tracked element, on `action`
  std::vector<WitnessSeries> witnesses;
  bool same_type = false;
  bool pass = false;
};

StronglyOuterResult construct_strongly_outer(const GroupSpec& g, const FactorSequence& target,
                                             const StronglyOuterOptions& options = {});

struct UniversalRokhlinResult {
  ProductAction action;  // on the universal pattern
  ProductAction rounds;  // interleaved parts before placement on the universal pattern
  std::vector<ProductAction> parts;
  std::vector<std::string> part_names;
  std::vector<CutDownResult> cut_downs;
  std::optional<ExtensionResult> extension;
  std::vector<ElementTower> towers;
  bool pass = false;  // every finite-order element exact
};

UniversalRokhlinResult rokhlin_action_universal(const GroupSpec& g, std::size_t l_max,
                                                const Theta& theta = Theta::sqrt(2),
                                                std::vector<Element> tracked = {});

}  // namespace uhf
