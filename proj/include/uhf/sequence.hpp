#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uhf/linalg.hpp"

namespace uhf {

/// Prime -> multiplicity in {1, 2, ...} or infinity.
class SupernaturalNumber {
 public:
  SupernaturalNumber() = default;
  static SupernaturalNumber of_integer(std::int64_t n);
  /// p^infinity for every prime p dividing n.
  static SupernaturalNumber infinite_part(std::int64_t n);
  /// Every prime with infinite multiplicity.
  static SupernaturalNumber universal();

  /// nullopt: infinite multiplicity.
  std::optional<std::int64_t> multiplicity(std::int64_t p) const;
  bool is_universal() const { return universal_; }
  bool prefix_only() const { return prefix_only_; }
  void set_prefix_only(bool v) { prefix_only_ = v; }
  std::string to_string() const;

  friend SupernaturalNumber operator*(const SupernaturalNumber& a, const SupernaturalNumber& b);
  friend bool operator==(const SupernaturalNumber& a, const SupernaturalNumber& b);

 private:
  std::map<std::int64_t, std::int64_t> finite_;
  std::set<std::int64_t> infinite_;
  bool universal_ = false;
  bool prefix_only_ = false;
};

/// Throws when both values come from finite prefixes.
bool same_type(const SupernaturalNumber& a, const SupernaturalNumber& b);

std::vector<std::pair<std::int64_t, std::int64_t>> factorize(std::int64_t n);

/// Sequence of matrix sizes n_1, n_2, ... (stored 0-based), each at least 2.
class FactorSequence {
 public:
  using Fn = std::function<std::int64_t(std::size_t)>;

  static FactorSequence prefix(std::vector<std::int64_t> entries);
  static FactorSequence periodic(std::vector<std::int64_t> head, std::vector<std::int64_t> period);
  static FactorSequence constant(std::int64_t n) { return periodic({}, {n}); }
  /// 2, 3, 4, 5, ...
  static FactorSequence universal();
  static FactorSequence custom(Fn fn, std::optional<std::size_t> length, SupernaturalNumber type, std::string description);

  std::int64_t at(std::size_t l) const;
  std::optional<std::size_t> length() const { return length_; }
  bool is_finite() const { return length_.has_value(); }
  bool has(std::size_t l) const { return !length_ || l < *length_; }
  const SupernaturalNumber& type() const { return type_; }
  const std::string& description() const { return description_; }
  std::vector<std::int64_t> head(std::size_t count) const;
  /// (head, period) for sequences built by periodic().
  const std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>>& pattern() const {
    return pattern_;
  }
  /// Product of n_l over [begin, end); throws on overflow past 2^62.
  std::int64_t product(std::size_t begin, std::size_t end) const;

 private:
  Fn fn_;
  std::optional<std::size_t> length_;
  SupernaturalNumber type_;
  std::string description_;
  std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> pattern_;
};

/// Entries at positions i, i + m, i + 2m, ...; m > 1 needs a periodic or finite sequence.
FactorSequence slice(const FactorSequence& seq, std::size_t m, std::size_t i);

SupernaturalNumber supernatural_of(const FactorSequence& seq);

/// Position map of a round-robin interleaving: output index -> (source, index in source).
class Interleaving {
 public:
  explicit Interleaving(std::vector<std::optional<std::size_t>> lengths);
  std::pair<std::size_t, std::size_t> source(std::size_t l) const;
  std::optional<std::size_t> length() const { return length_; }
  std::size_t sources() const { return lengths_.size(); }

 private:
  std::vector<std::optional<std::size_t>> lengths_;
  std::vector<std::pair<std::size_t, std::size_t>> head_;  // explicit map over the finite rounds
  std::size_t rounds_ = 0;
  std::vector<std::size_t> infinite_;
  std::optional<std::size_t> length_;
};

FactorSequence interleave(const std::vector<FactorSequence>& seqs);

/// Consecutive block lengths; a cyclic partition repeats them forever, otherwise
/// every index past the listed blocks stays a singleton.
struct Partition {
  std::vector<std::size_t> lengths;
  bool cyclic = false;
  /// [begin, end) in the source for output block i.
  std::pair<std::size_t, std::size_t> block(std::size_t i) const;
};

FactorSequence regroup(const FactorSequence& seq, const Partition& p);

}  // namespace uhf
