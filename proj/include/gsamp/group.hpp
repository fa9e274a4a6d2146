#pragma once

// Finite abelian groups Z_{s1} x ... x Z_{sd}: elements, characters, sequences,
// the unnormalized Fourier transform, convolution and stride subgroups.
//
// Elements are addressed by a mixed-radix row-major index (last coordinate
// fastest). The dual group uses the same moduli and the same indexing.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsamp/errors.hpp"

namespace gsamp {

using cplx = std::complex<double>;

class GroupSpec;

class GroupElement {
 public:
  GroupElement() = default;

  const std::vector<int>& coords() const noexcept { return coords_; }
  const std::vector<int>& moduli() const noexcept { return moduli_; }
  int operator[](std::size_t j) const { return coords_[j]; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  friend class GroupSpec;
  GroupElement(std::vector<int> moduli, std::vector<int> coords)
      : moduli_(std::move(moduli)), coords_(std::move(coords)) {}

  std::vector<int> moduli_;
  std::vector<int> coords_;
};

class GroupSpec {
 public:
  GroupSpec() : GroupSpec(std::vector<int>{1}) {}

  explicit GroupSpec(std::vector<int> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw ArgumentError("group needs at least one modulus");
    order_ = 1;
    exponent_ = 1;
    for (int s : moduli_) {
      if (s < 1) throw ArgumentError("group modulus must be >= 1, got " + std::to_string(s));
      order_ *= static_cast<std::size_t>(s);
      exponent_ = std::lcm(exponent_, s);
    }
  }

  const std::vector<int>& moduli() const noexcept { return moduli_; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  std::size_t order() const noexcept { return order_; }
  /// Least common multiple of the moduli; every character value is an
  /// exponent()-th root of unity.
  int exponent() const noexcept { return exponent_; }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.moduli_ == b.moduli_; }

  std::string describe() const {
    std::string out;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
      if (j) out += "x";
      out += "Z" + std::to_string(moduli_[j]);
    }
    return out;
  }

  GroupElement element(std::vector<int> coords) const {
    if (coords.size() != moduli_.size())
      throw ArgumentError("element rank " + std::to_string(coords.size()) + " does not match group " + describe());
    for (std::size_t j = 0; j < coords.size(); ++j) {
      int r = coords[j] % moduli_[j];
      coords[j] = r < 0 ? r + moduli_[j] : r;
    }
    return GroupElement(moduli_, std::move(coords));
  }

  GroupElement element_at(std::size_t index) const { return element(coords_of(index)); }
  GroupElement zero() const { return element(std::vector<int>(moduli_.size(), 0)); }

  std::vector<int> coords_of(std::size_t index) const {
    std::vector<int> c(moduli_.size());
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      c[j] = static_cast<int>(index % static_cast<std::size_t>(moduli_[j]));
      index /= static_cast<std::size_t>(moduli_[j]);
    }
    return c;
  }

  std::size_t index_of(std::span<const int> coords) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
      int r = coords[j] % moduli_[j];
      if (r < 0) r += moduli_[j];
      idx = idx * static_cast<std::size_t>(moduli_[j]) + static_cast<std::size_t>(r);
    }
    return idx;
  }

  std::size_t index_of(const GroupElement& h) const {
    require_member(h);
    return index_of(h.coords());
  }

  void require_member(const GroupElement& h) const {
    if (h.moduli() != moduli_) throw ArgumentError("element does not belong to group " + describe());
  }

  // Index arithmetic; digit-wise so it never allocates.
  std::size_t add_index(std::size_t a, std::size_t b) const { return combine(a, b, +1); }
  std::size_t sub_index(std::size_t a, std::size_t b) const { return combine(a, b, -1); }
  std::size_t neg_index(std::size_t a) const { return combine(0, a, -1); }

  /// Exponent k with xi(h) = exp(2 pi i k / exponent()).
  int pairing_exponent(std::size_t h, std::size_t xi) const {
    long long k = 0;
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      const auto s = static_cast<std::size_t>(moduli_[j]);
      const long long hj = static_cast<long long>(h % s);
      const long long xj = static_cast<long long>(xi % s);
      h /= s;
      xi /= s;
      k = (k + (hj * xj % moduli_[j]) * (exponent_ / moduli_[j])) % exponent_;
    }
    return static_cast<int>(k);
  }

 private:
  std::size_t combine(std::size_t a, std::size_t b, int sign) const {
    std::size_t out = 0;
    std::size_t place = 1;
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      const auto s = static_cast<std::size_t>(moduli_[j]);
      const std::size_t da = a % s;
      const std::size_t db = b % s;
      a /= s;
      b /= s;
      const std::size_t d = sign > 0 ? (da + db) % s : (da + s - db) % s;
      out += d * place;
      place *= s;
    }
    return out;
  }

  std::vector<int> moduli_;
  std::size_t order_ = 1;
  int exponent_ = 1;
};

inline GroupElement add(const GroupElement& a, const GroupElement& b) {
  if (a.moduli() != b.moduli()) throw ArgumentError("add: elements belong to different groups");
  std::vector<int> c(a.coords().size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = a[j] + b[j];
  return GroupSpec(a.moduli()).element(std::move(c));
}

inline GroupElement neg(const GroupElement& a) {
  std::vector<int> c(a.coords().size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = -a[j];
  return GroupSpec(a.moduli()).element(std::move(c));
}

inline GroupElement operator+(const GroupElement& a, const GroupElement& b) { return add(a, b); }
inline GroupElement operator-(const GroupElement& a) { return neg(a); }
inline GroupElement operator-(const GroupElement& a, const GroupElement& b) { return add(a, neg(b)); }

/// exp(2 pi i k / n), exact at the quarter points and with
/// root_of_unity(n-k, n) == conj(root_of_unity(k, n)) bit for bit.
inline cplx root_of_unity(long long k, long long n) {
  k %= n;
  if (k < 0) k += n;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == n) return {0.0, 1.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  if (2 * k > n) return std::conj(root_of_unity(n - k, n));
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(theta), std::sin(theta)};
}

/// A character of a finite abelian group, indexed by an element of the
/// (self-identified) dual group.
class Character {
 public:
  explicit Character(GroupElement index) : index_(std::move(index)) {}

  const GroupElement& index() const noexcept { return index_; }

  cplx operator()(const GroupElement& h) const {
    if (h.moduli() != index_.moduli()) throw ArgumentError("character and element live on different groups");
    const GroupSpec g(h.moduli());
    return root_of_unity(g.pairing_exponent(g.index_of(h), g.index_of(index_)), g.exponent());
  }

 private:
  GroupElement index_;
};

inline cplx character_value(const Character& xi, const GroupElement& h) { return xi(h); }

/// A complex function on a finite abelian group.
class GroupSequence {
 public:
  GroupSequence() = default;
  explicit GroupSequence(GroupSpec group) : group_(std::move(group)), values_(group_.order()) {}
  GroupSequence(GroupSpec group, std::vector<cplx> values) : group_(std::move(group)), values_(std::move(values)) {
    if (values_.size() != group_.order())
      throw ArgumentError("sequence length " + std::to_string(values_.size()) + " does not match |" +
                          group_.describe() + "| = " + std::to_string(group_.order()));
  }

  static GroupSequence delta(const GroupSpec& group, std::size_t at = 0) {
    GroupSequence d(group);
    d.values_.at(at) = 1.0;
    return d;
  }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::vector<cplx>& values() noexcept { return values_; }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  const cplx& at(const GroupElement& h) const { return values_[group_.index_of(h)]; }

  GroupSequence& operator+=(const GroupSequence& o) {
    require_same(o, "+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GroupSequence& operator-=(const GroupSequence& o) {
    require_same(o, "-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GroupSequence& operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend GroupSequence operator+(GroupSequence a, const GroupSequence& b) { return a += b; }
  friend GroupSequence operator-(GroupSequence a, const GroupSequence& b) { return a -= b; }
  friend GroupSequence operator*(cplx c, GroupSequence a) { return a *= c; }

  friend bool operator==(const GroupSequence&, const GroupSequence&) = default;

  void require_same(const GroupSequence& o, const char* op) const {
    if (!(group_ == o.group_))
      throw ArgumentError(std::string(op) + ": sequences on " + group_.describe() + " and " + o.group_.describe());
  }

 private:
  GroupSpec group_;
  std::vector<cplx> values_;
};

/// <x, y> = sum x(h) conj(y(h)); counting measure.
inline cplx inner(const GroupSequence& x, const GroupSequence& y) {
  x.require_same(y, "inner");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::conj(y[i]);
  return acc;
}

inline double norm_squared(const GroupSequence& x) {
  double acc = 0.0;
  for (const auto& v : x.values()) acc += std::norm(v);
  return acc;
}

inline double max_abs_diff(const GroupSequence& a, const GroupSequence& b) {
  a.require_same(b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace detail {

// Sums term(h) over h in pairs {h, -h}, visiting pairs in a fixed order. Because
// each pair is added as a unit, a sequence and its involution produce bitwise
// conjugate transforms.
template <class Term>
cplx paired_sum(const GroupSpec& g, Term&& term) {
  cplx acc = 0.0;
  for (std::size_t h = 0; h < g.order(); ++h) {
    const std::size_t nh = g.neg_index(h);
    if (nh < h) continue;
    if (nh == h)
      acc += term(h);
    else
      acc += term(h) + term(nh);
  }
  return acc;
}

inline std::vector<cplx> root_table(int n) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = root_of_unity(k, n);
  return w;
}

}  // namespace detail

/// x^(xi) = sum_h x(h) conj(xi(h)); no normalization.
inline GroupSequence dft(const GroupSequence& x) {
  const GroupSpec& g = x.group();
  const int n = g.exponent();
  const auto w = detail::root_table(n);
  GroupSequence out(g);
  for (std::size_t xi = 0; xi < g.order(); ++xi) {
    out[xi] = detail::paired_sum(g, [&](std::size_t h) {
      const int k = g.pairing_exponent(h, xi);
      return x[h] * w[static_cast<std::size_t>((n - k) % n)];
    });
  }
  return out;
}

/// Inverse of dft; carries the 1/|H| factor.
inline GroupSequence idft(const GroupSequence& xhat) {
  const GroupSpec& g = xhat.group();
  const int n = g.exponent();
  const auto w = detail::root_table(n);
  const double scale = static_cast<double>(g.order());
  GroupSequence out(g);
  for (std::size_t h = 0; h < g.order(); ++h) {
    out[h] = detail::paired_sum(g, [&](std::size_t xi) {
      return xhat[xi] * w[static_cast<std::size_t>(g.pairing_exponent(h, xi))];
    }) / scale;
  }
  return out;
}

/// (a * x)(h) = sum_{h'} a(h - h') x(h'), direct summation.
inline GroupSequence convolve(const GroupSequence& a, const GroupSequence& x) {
  a.require_same(x, "convolve");
  const GroupSpec& g = a.group();
  GroupSequence out(g);
  for (std::size_t h = 0; h < g.order(); ++h) {
    cplx acc = 0.0;
    for (std::size_t hp = 0; hp < g.order(); ++hp) acc += a[g.sub_index(h, hp)] * x[hp];
    out[h] = acc;
  }
  return out;
}

/// a*(h) = conj(a(-h)).
inline GroupSequence involution(const GroupSequence& a) {
  const GroupSpec& g = a.group();
  GroupSequence out(g);
  for (std::size_t h = 0; h < g.order(); ++h) out[h] = std::conj(a[g.neg_index(h)]);
  return out;
}

/// (T_t x)(g) = x(g - t).
inline GroupSequence translate(const GroupSequence& x, std::size_t t) {
  const GroupSpec& g = x.group();
  GroupSequence out(g);
  for (std::size_t h = 0; h < g.order(); ++h) out[h] = x[g.sub_index(h, t)];
  return out;
}

/// Product-form subgroup d_1 Z_{s1} x ... x d_d Z_{sd}, addressed through its
/// abstract form Z_{s1/d1} x ... x Z_{sd/dd} and the embedding k -> (d_j k_j).
class ProductSubgroup {
 public:
  ProductSubgroup() = default;

  ProductSubgroup(GroupSpec parent, std::vector<int> strides) : parent_(std::move(parent)), strides_(std::move(strides)) {
    if (strides_.size() != parent_.rank())
      throw ArgumentError("subgroup needs one stride per coordinate of " + parent_.describe());
    std::vector<int> sub(strides_.size());
    index_ = 1;
    for (std::size_t j = 0; j < strides_.size(); ++j) {
      const int s = parent_.moduli()[j];
      const int d = strides_[j];
      if (d < 1 || s % d != 0)
        throw ArgumentError("stride " + std::to_string(d) + " does not divide modulus " + std::to_string(s));
      sub[j] = s / d;
      index_ *= static_cast<std::size_t>(d);
    }
    abstract_ = GroupSpec(std::move(sub));
    embedding_.resize(abstract_.order());
    for (std::size_t k = 0; k < abstract_.order(); ++k) {
      auto c = abstract_.coords_of(k);
      for (std::size_t j = 0; j < c.size(); ++j) c[j] *= strides_[j];
      embedding_[k] = parent_.index_of(c);
    }
  }

  static ProductSubgroup whole(const GroupSpec& g) { return {g, std::vector<int>(g.rank(), 1)}; }

  const GroupSpec& parent() const noexcept { return parent_; }
  const GroupSpec& abstract() const noexcept { return abstract_; }
  const std::vector<int>& strides() const noexcept { return strides_; }
  /// [parent : subgroup] = prod d_j.
  std::size_t index() const noexcept { return index_; }

  /// Parent index of the embedded abstract element k.
  std::size_t embed(std::size_t k) const { return embedding_.at(k); }
  GroupElement embed(const GroupElement& k) const { return parent_.element_at(embed(abstract_.index_of(k))); }

  bool contains(std::size_t parent_index) const {
    const auto c = parent_.coords_of(parent_index);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] % strides_[j] != 0) return false;
    return true;
  }

  /// Abstract index of an element of the embedded subgroup.
  std::size_t locate(std::size_t parent_index) const {
    auto c = parent_.coords_of(parent_index);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] % strides_[j] != 0) throw ArgumentError("element is not in the subgroup");
      c[j] /= strides_[j];
    }
    return abstract_.index_of(c);
  }

  friend bool operator==(const ProductSubgroup& a, const ProductSubgroup& b) {
    return a.parent_ == b.parent_ && a.strides_ == b.strides_;
  }

 private:
  GroupSpec parent_;
  std::vector<int> strides_ = {1};
  GroupSpec abstract_;
  std::size_t index_ = 1;
  std::vector<std::size_t> embedding_ = {0};
};

/// One representative per coset of `sub` in its parent, in mixed-radix order
/// over residues 0..d_j-1.
inline std::vector<GroupElement> coset_representatives(const ProductSubgroup& sub) {
  const GroupSpec residues(sub.strides());
  std::vector<GroupElement> reps;
  reps.reserve(residues.order());
  for (std::size_t i = 0; i < residues.order(); ++i) reps.push_back(sub.parent().element(residues.coords_of(i)));
  return reps;
}

/// Embeds `inner` (a subgroup of outer's abstract group) into outer's parent.
inline ProductSubgroup nest(const ProductSubgroup& outer, const ProductSubgroup& inner) {
  if (!(inner.parent() == outer.abstract()))
    throw ArgumentError("nested subgroup must live on " + outer.abstract().describe());
  std::vector<int> strides(outer.strides().size());
  for (std::size_t j = 0; j < strides.size(); ++j) strides[j] = outer.strides()[j] * inner.strides()[j];
  return {outer.parent(), std::move(strides)};
}

}  // namespace gsamp
