#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uhf/linalg.hpp"

namespace uhf {

/// Sorted list of element indices of a finite group.
using ElementSet = std::vector<std::size_t>;

/// Finite group given by its multiplication table; the axioms are checked on construction.
class FiniteGroup {
 public:
  using Table = std::vector<std::vector<std::size_t>>;

  static FiniteGroup from_table(Table table, std::size_t identity);
  static FiniteGroup trivial();
  static FiniteGroup cyclic(std::size_t n);
  /// Permutations of {0..n-1} in lexicographic order; index 0 is the identity.
  static FiniteGroup symmetric(std::size_t n);
  /// Element (i, j) has index i * |b| + j.
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  std::size_t order() const { return table_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  std::size_t pow(std::size_t a, std::int64_t e) const;
  std::size_t element_order(std::size_t a) const;
  /// Least common multiple of the element orders.
  std::size_t exponent() const;
  const Table& table() const { return table_; }
  bool is_abelian() const;

  bool is_subgroup(const ElementSet& h) const;
  ElementSet generated_by(std::span<const std::size_t> gens) const;
  /// Conjugacy classes ordered by least element (the identity class first).
  std::vector<ElementSet> conjugacy_classes() const;

  std::string label(std::size_t a) const;
  void set_labels(std::vector<std::string> labels);

 private:
  FiniteGroup(Table table, std::size_t identity);
  Table table_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
  std::vector<std::string> labels_;
};

struct Subgroup {
  FiniteGroup group;                 // elements renumbered 0..|H|-1
  std::vector<std::size_t> embedding;  // subgroup index -> ambient index (sorted)
};

struct Quotient {
  FiniteGroup group;
  std::vector<std::size_t> projection;       // ambient element -> coset index
  std::vector<std::size_t> representatives;  // least element of each coset
};

Subgroup subgroup(const FiniteGroup& g, const ElementSet& h);
/// Least element of each left coset gH, in increasing order.
std::vector<std::size_t> coset_representatives(const FiniteGroup& g, const ElementSet& h);
ElementSet normal_core(const FiniteGroup& g, const ElementSet& h);
Quotient quotient(const FiniteGroup& g, const ElementSet& normal);

/// Unitary representation of a finite group: one image per element index.
struct Representation {
  std::size_t dim = 0;
  std::vector<Unitary> images;
};

Representation regular_representation(const FiniteGroup& g);
Representation trivial_representation(const FiniteGroup& g, std::size_t dim);
/// max ||rho(a) rho(b) - rho(ab)|| over the table plus ||rho(e) - 1||.
double homomorphism_defect(const FiniteGroup& g, const Representation& rho);
bool is_homomorphism(const FiniteGroup& g, const Representation& rho, double tol = kStructuralTol);
/// Pull back along a group homomorphism given as an index map.
Representation compose(const Representation& rho, std::span<const std::size_t> hom);

/// Induced representation from the subgroup h (rho indexed as in subgroup(g, h)),
/// built on the least-element coset representatives.
Representation induce(const Representation& rho, const FiniteGroup& g, const ElementSet& h);

struct CharacterTable {
  std::vector<ElementSet> classes;
  std::vector<std::size_t> class_of;  // element -> class index
  std::vector<double> degrees;        // per irreducible character
  /// normalized[i][c] = chi_i(g_c) / chi_i(1), irreducibles sorted by degree then values
  std::vector<std::vector<Complex>> normalized;
  std::size_t size() const { return degrees.size(); }
};

/// Irreducible characters by simultaneous diagonalization of the class-sum algebra.
CharacterTable character_table(const FiniteGroup& g);

struct SeparatingFamily {
  std::size_t element;  // the g with psi(g) != 1
  Representation psi;   // diag(1, phi)
  bool from_character;  // phi is a linear character, else the regular representation
};

/// One padded representation psi[g] = diag(1, phi[g]) per non-identity g.
std::vector<SeparatingFamily> map_embedding(const FiniteGroup& g);

// ---------------------------------------------------------------------------
// Abelian groups presented by generators

/// Finitely supported element of the direct sum of copies of Q + Q/Z.
class AbelianElement {
 public:
  struct Coordinate {
    Rational q;
    Rational r;  // in [0, 1)
  };
  AbelianElement() = default;
  void set(std::size_t index, Rational q, Rational r);
  Coordinate at(std::size_t index) const;
  const std::map<std::size_t, Coordinate>& support() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }
  AbelianElement scaled(std::int64_t n) const;
  AbelianElement shifted(std::size_t offset) const;
  friend AbelianElement operator+(const AbelianElement& a, const AbelianElement& b);
  friend bool operator==(const AbelianElement& a, const AbelianElement& b);

 private:
  std::map<std::size_t, Coordinate> coords_;
};

/// Real parameter that remembers whether it is known to be rational.
struct Theta {
  double value = 1.0;
  std::optional<Rational> exact;  // set when rational
  std::string label = "1";
  bool is_rational() const { return exact.has_value(); }
  static Theta rational(Rational r);
  static Theta sqrt(std::int64_t n);  // n not a perfect square
  static Theta parse(const std::string& text);
};

struct AbelianGenerator {
  std::optional<std::int64_t> order;  // nullopt: infinite
  AbelianElement coordinate;
  std::optional<Theta> theta;
};

class AbelianGroup {
 public:
  /// Generators with default coordinates: order k -> (0, 1/k), infinite -> (1, 0) in their own slot.
  static AbelianGroup from_orders(std::vector<std::optional<std::int64_t>> orders);
  explicit AbelianGroup(std::vector<AbelianGenerator> gens);
  const std::vector<AbelianGenerator>& generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }
  bool is_finite() const;
  std::size_t max_coordinate() const;

 private:
  std::vector<AbelianGenerator> gens_;
};

/// Group element: a table index for finite groups, an exponent vector for presented groups.
struct Element {
  std::vector<std::int64_t> v;
  auto operator<=>(const Element&) const = default;
};

class GroupSpec {
 public:
  GroupSpec(FiniteGroup g) : g_(std::move(g)) {}
  GroupSpec(AbelianGroup g) : g_(std::move(g)) {}

  bool is_table() const { return std::holds_alternative<FiniteGroup>(g_); }
  const FiniteGroup& table() const;
  const AbelianGroup& presented() const;
  bool is_finite() const;
  bool is_abelian() const;

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, std::int64_t e) const;
  bool is_identity(const Element& a) const;
  /// nullopt for infinite order.
  std::optional<std::int64_t> order_of(const Element& a) const;
  Element normalize(const Element& a) const;
  void validate(const Element& a) const;

  Element element(std::size_t index) const;  // table groups
  Element generator(std::size_t i) const;     // presented groups
  /// All elements of a finite group.
  std::vector<Element> elements() const;
  /// Elements to track in constructions: all non-identity elements of finite
  /// groups (up to `ball` for large ones), generators plus a small ball otherwise.
  std::vector<Element> tracked(std::size_t ball = 64) const;
  std::string describe(const Element& a) const;

 private:
  std::variant<FiniteGroup, AbelianGroup> g_;
};

GroupSpec direct_sum(const GroupSpec& a, const GroupSpec& b);

}  // namespace uhf
