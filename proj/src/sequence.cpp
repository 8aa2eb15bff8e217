#include "uhf/sequence.hpp"

#include <algorithm>
#include <numeric>

namespace uhf {

std::vector<std::pair<std::int64_t, std::int64_t>> factorize(std::int64_t n) {
  if (n < 1) throw Error("factorize: n must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    std::int64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

SupernaturalNumber SupernaturalNumber::of_integer(std::int64_t n) {
  SupernaturalNumber s;
  for (auto [p, e] : factorize(n)) s.finite_[p] = e;
  return s;
}

SupernaturalNumber SupernaturalNumber::infinite_part(std::int64_t n) {
  SupernaturalNumber s;
  for (auto [p, e] : factorize(n)) s.infinite_.insert(p);
  return s;
}

SupernaturalNumber SupernaturalNumber::universal() {
  SupernaturalNumber s;
  s.universal_ = true;
  return s;
}

std::optional<std::int64_t> SupernaturalNumber::multiplicity(std::int64_t p) const {
  if (universal_ || infinite_.count(p)) return std::nullopt;
  auto it = finite_.find(p);
  return it == finite_.end() ? 0 : it->second;
}

std::string SupernaturalNumber::to_string() const {
  std::string s = "{";
  if (universal_) {
    s += "*:inf";
  } else {
    std::map<std::int64_t, std::string> parts;
    for (auto [p, e] : finite_) parts[p] = std::to_string(e);
    for (auto p : infinite_) parts[p] = "inf";
    bool first = true;
    for (const auto& [p, e] : parts) {
      if (!first) s += ",";
      s += std::to_string(p) + ":" + e;
      first = false;
    }
  }
  s += "}";
  if (prefix_only_) s += " prefix-only";
  return s;
}

SupernaturalNumber operator*(const SupernaturalNumber& a, const SupernaturalNumber& b) {
  SupernaturalNumber out;
  out.prefix_only_ = a.prefix_only_ && b.prefix_only_;
  if (a.universal_ || b.universal_) {
    out.universal_ = true;
    return out;
  }
  out.infinite_ = a.infinite_;
  out.infinite_.insert(b.infinite_.begin(), b.infinite_.end());
  for (const auto* x : {&a, &b})
    for (auto [p, e] : x->finite_)
      if (!out.infinite_.count(p)) out.finite_[p] += e;
  return out;
}

bool operator==(const SupernaturalNumber& a, const SupernaturalNumber& b) {
  if (a.universal_ || b.universal_) return a.universal_ == b.universal_;
  return a.infinite_ == b.infinite_ && a.finite_ == b.finite_;
}

bool same_type(const SupernaturalNumber& a, const SupernaturalNumber& b) {
  if (a.prefix_only() && b.prefix_only()) throw Error("same_type: both values come from finite prefixes (undetermined)");
  return a == b;
}

// ---------------------------------------------------------------------------

namespace {

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void require_sizes(const std::vector<std::int64_t>& v) {
  for (auto n : v)
    if (n < 2) throw Error("factor sizes must be at least 2, got " + std::to_string(n));
}

}  // namespace

FactorSequence FactorSequence::prefix(std::vector<std::int64_t> entries) {
  require_sizes(entries);
  SupernaturalNumber t;
  for (auto n : entries) t = t * SupernaturalNumber::of_integer(n);
  t.set_prefix_only(true);
  const std::string desc = "prefix(" + join(entries) + ")";
  const std::size_t len = entries.size();
  return custom([e = std::move(entries)](std::size_t l) { return e[l]; }, len, t, desc);
}

FactorSequence FactorSequence::periodic(std::vector<std::int64_t> head, std::vector<std::int64_t> period) {
  if (period.empty()) return prefix(std::move(head));
  require_sizes(head);
  require_sizes(period);
  SupernaturalNumber t;
  for (auto n : head) t = t * SupernaturalNumber::of_integer(n);
  for (auto n : period) t = t * SupernaturalNumber::infinite_part(n);
  const std::string desc =
      head.empty() ? "periodic(" + join(period) + ")" : "periodic(" + join(head) + ";" + join(period) + ")";
  FactorSequence s = custom(
      [h = head, p = period](std::size_t l) { return l < h.size() ? h[l] : p[(l - h.size()) % p.size()]; },
      std::nullopt, t, desc);
  s.pattern_ = std::make_pair(std::move(head), std::move(period));
  return s;
}

FactorSequence slice(const FactorSequence& seq, std::size_t m, std::size_t i) {
  if (m == 0 || i >= m) throw Error("slice: need 0 <= i < m");
  if (m == 1) return seq;
  if (seq.is_finite()) {
    std::vector<std::int64_t> e;
    for (std::size_t l = i; l < *seq.length(); l += m) e.push_back(seq.at(l));
    if (e.empty()) throw Error("slice: slice " + std::to_string(i) + " of " + seq.description() + " is empty");
    return FactorSequence::prefix(std::move(e));
  }
  if (!seq.pattern())
    throw Error("slice: " + seq.description() + " is neither periodic nor finite, so its slices have no computable type");
  const auto& [h, p] = *seq.pattern();
  std::size_t t0 = 0;
  while (i + m * t0 < h.size()) ++t0;
  std::vector<std::int64_t> head, period;
  for (std::size_t t = 0; t < t0; ++t) head.push_back(seq.at(i + m * t));
  for (std::size_t t = t0; t < t0 + p.size(); ++t) period.push_back(seq.at(i + m * t));
  return FactorSequence::periodic(std::move(head), std::move(period));
}

FactorSequence FactorSequence::universal() {
  return custom([](std::size_t l) { return static_cast<std::int64_t>(l) + 2; }, std::nullopt,
                SupernaturalNumber::universal(), "universal(2,3,4,...)");
}

FactorSequence FactorSequence::custom(Fn fn, std::optional<std::size_t> length, SupernaturalNumber type,
                                      std::string description) {
  FactorSequence s;
  s.fn_ = std::move(fn);
  s.length_ = length;
  s.type_ = std::move(type);
  s.description_ = std::move(description);
  return s;
}

std::int64_t FactorSequence::at(std::size_t l) const {
  if (!has(l))
    throw Error("factor " + std::to_string(l + 1) + " is beyond the " + std::to_string(*length_) +
                " factors of " + description_);
  const std::int64_t n = fn_(l);
  if (n < 2) throw Error("factor sizes must be at least 2");
  return n;
}

std::vector<std::int64_t> FactorSequence::head(std::size_t count) const {
  std::vector<std::int64_t> out;
  for (std::size_t l = 0; l < count && has(l); ++l) out.push_back(at(l));
  return out;
}

std::int64_t FactorSequence::product(std::size_t begin, std::size_t end) const {
  std::int64_t p = 1;
  for (std::size_t l = begin; l < end; ++l) {
    const std::int64_t n = at(l);
    if (p > (std::int64_t{1} << 62) / n) throw Error("factor product overflows");
    p *= n;
  }
  return p;
}

SupernaturalNumber supernatural_of(const FactorSequence& seq) { return seq.type(); }

// ---------------------------------------------------------------------------

Interleaving::Interleaving(std::vector<std::optional<std::size_t>> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) throw Error("interleave: no sources");
  for (std::size_t s = 0; s < lengths_.size(); ++s) {
    if (lengths_[s])
      rounds_ = std::max(rounds_, *lengths_[s]);
    else
      infinite_.push_back(s);
  }
  for (std::size_t r = 0; r < rounds_; ++r)
    for (std::size_t s = 0; s < lengths_.size(); ++s)
      if (!lengths_[s] || r < *lengths_[s]) head_.emplace_back(s, r);
  if (infinite_.empty()) length_ = head_.size();
}

std::pair<std::size_t, std::size_t> Interleaving::source(std::size_t l) const {
  if (l < head_.size()) return head_[l];
  if (infinite_.empty()) throw Error("interleave: index past the end");
  const std::size_t k = l - head_.size();
  return {infinite_[k % infinite_.size()], rounds_ + k / infinite_.size()};
}

FactorSequence interleave(const std::vector<FactorSequence>& seqs) {
  std::vector<std::optional<std::size_t>> lengths;
  SupernaturalNumber t;
  bool first = true;
  std::string desc = "interleave(";
  for (const auto& s : seqs) {
    lengths.push_back(s.length());
    t = first ? s.type() : t * s.type();
    desc += (first ? "" : ",") + s.description();
    first = false;
  }
  desc += ")";
  Interleaving map(lengths);
  const auto len = map.length();
  return FactorSequence::custom(
      [map = std::move(map), seqs](std::size_t l) {
        auto [s, i] = map.source(l);
        return seqs[s].at(i);
      },
      len, t, desc);
}

std::pair<std::size_t, std::size_t> Partition::block(std::size_t i) const {
  if (cyclic) {
    if (lengths.empty()) throw Error("cyclic partition needs block lengths");
    const std::size_t period = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
    std::size_t begin = (i / lengths.size()) * period;
    for (std::size_t j = 0; j < i % lengths.size(); ++j) begin += lengths[j];
    return {begin, begin + lengths[i % lengths.size()]};
  }
  std::size_t begin = 0;
  for (std::size_t j = 0; j < std::min(i, lengths.size()); ++j) begin += lengths[j];
  if (i < lengths.size()) return {begin, begin + lengths[i]};
  begin += i - lengths.size();
  return {begin, begin + 1};
}

FactorSequence regroup(const FactorSequence& seq, const Partition& p) {
  for (auto n : p.lengths)
    if (n == 0) throw Error("regroup: empty block");
  if (p.cyclic && p.lengths.empty()) throw Error("cyclic partition needs block lengths");
  std::optional<std::size_t> len;
  if (seq.length()) {
    std::size_t count = 0;
    while (p.block(count).second <= *seq.length()) ++count;
    if (p.block(count).first < *seq.length()) throw Error("regroup: partition does not tile the prefix");
    len = count;
  }
  std::string desc = "regroup(" + seq.description() + ")";
  return FactorSequence::custom([seq, p](std::size_t l) {
        auto [b, e] = p.block(l);
        return seq.product(b, e);
      },
      len, seq.type(), desc);
}

}  // namespace uhf
