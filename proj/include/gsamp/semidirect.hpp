#pragma once

// Finite crystallographic model: the torus (Z_L)^2 semi-direct a rotation group
// Gamma in {C1, C2, C4}, with the quasi-regular representation
// U(s, g) f(t) = f(g^T (t - s)) and a rotation-invariant lattice K'.

#include <array>
#include <string>

#include "gsamp/models.hpp"

namespace gsamp {

/// Integer 2x2 matrix [[a, b], [c, d]] acting on column vectors mod L.
struct Rotation {
  int a = 1, b = 0, c = 0, d = 1;

  static constexpr Rotation identity() { return {1, 0, 0, 1}; }
  static constexpr Rotation quarter() { return {0, -1, 1, 0}; }
  static constexpr Rotation half() { return {-1, 0, 0, -1}; }
  static constexpr Rotation three_quarter() { return {0, 1, -1, 0}; }

  constexpr Rotation transpose() const { return {a, c, b, d}; }
  constexpr std::array<int, 2> operator()(int x, int y) const { return {a * x + b * y, c * x + d * y}; }

  friend constexpr Rotation operator*(const Rotation& l, const Rotation& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend constexpr bool operator==(const Rotation&, const Rotation&) = default;
};

enum class RotationGroup { C1, C2, C4 };

inline std::vector<Rotation> rotation_elements(RotationGroup kind) {
  switch (kind) {
    case RotationGroup::C1: return {Rotation::identity()};
    case RotationGroup::C2: return {Rotation::identity(), Rotation::half()};
    case RotationGroup::C4:
      return {Rotation::identity(), Rotation::quarter(), Rotation::half(), Rotation::three_quarter()};
  }
  return {};
}

inline RotationGroup parse_rotation_group(const std::string& s) {
  if (s == "C1") return RotationGroup::C1;
  if (s == "C2") return RotationGroup::C2;
  if (s == "C4") return RotationGroup::C4;
  throw ArgumentError("unknown rotation group '" + s + "' (expected C1, C2 or C4)");
}

inline std::string to_string(RotationGroup kind) {
  switch (kind) {
    case RotationGroup::C1: return "C1";
    case RotationGroup::C2: return "C2";
    case RotationGroup::C4: return "C4";
  }
  return "?";
}

/// (shift, rotation) with the shift as a torus index and the rotation as an
/// index into the model's Gamma.
struct SemidirectElement {
  std::size_t shift = 0;
  std::size_t rotation = 0;
  friend bool operator==(const SemidirectElement&, const SemidirectElement&) = default;
};

class SemidirectModel {
 public:
  SemidirectModel(GroupSpec torus, RotationGroup gamma, std::vector<int> strides, GroupSequence window,
                  GroupSequence varphi)
      : torus_(std::move(torus)), kind_(gamma), rotations_(rotation_elements(gamma)), window_(std::move(window)),
        varphi_(std::move(varphi)) {
    if (torus_.rank() != 2 || torus_.moduli()[0] != torus_.moduli()[1])
      throw ArgumentError("semidirect model needs a square torus (Z_L)^2, got " + torus_.describe());
    if (strides.size() != 2 || strides[0] != strides[1])
      throw ArgumentError("lattice strides must be equal in both coordinates");
    lattice_ = ProductSubgroup(torus_, std::move(strides));
    if (!(window_.group() == torus_) || !(varphi_.group() == torus_))
      throw ArgumentError("window and generator must live on " + torus_.describe());
    for (const auto& g : rotations_)
      for (std::size_t k = 0; k < lattice_.abstract().order(); ++k)
        if (!lattice_.contains(rotate(g, lattice_.embed(k))))
          throw ArgumentError("lattice is not invariant under the rotation group");
  }

  const GroupSpec& torus() const noexcept { return torus_; }
  RotationGroup rotation_group() const noexcept { return kind_; }
  const std::vector<Rotation>& rotations() const noexcept { return rotations_; }
  std::size_t orientation_count() const noexcept { return rotations_.size(); }
  const ProductSubgroup& lattice() const noexcept { return lattice_; }
  const GroupSequence& window() const noexcept { return window_; }
  const GroupSequence& varphi() const noexcept { return varphi_; }

  std::size_t rotation_index(const Rotation& g) const {
    for (std::size_t i = 0; i < rotations_.size(); ++i)
      if (rotations_[i] == g) return i;
    throw ArgumentError("rotation is not an element of " + to_string(kind_));
  }

  /// Torus index of g t.
  std::size_t rotate(const Rotation& g, std::size_t t) const {
    const auto c = torus_.coords_of(t);
    const auto r = g(c[0], c[1]);
    return torus_.index_of(std::vector<int>{r[0], r[1]});
  }

  /// (s, g)(s', g') = (s + g s', g g').
  SemidirectElement compose(const SemidirectElement& x, const SemidirectElement& y) const {
    const Rotation& g = rotations_.at(x.rotation);
    return {torus_.add_index(x.shift, rotate(g, y.shift)), rotation_index(g * rotations_.at(y.rotation))};
  }

 private:
  GroupSpec torus_;
  RotationGroup kind_;
  std::vector<Rotation> rotations_;
  ProductSubgroup lattice_;
  GroupSequence window_;
  GroupSequence varphi_;
};

/// U(s, g) f (t) = f(g^T (t - s)).
inline GroupSequence quasi_regular_apply(const SemidirectModel& model, const SemidirectElement& e,
                                         const GroupSequence& f) {
  if (!(f.group() == model.torus())) throw ArgumentError("function must live on " + model.torus().describe());
  const Rotation gt = model.rotations().at(e.rotation).transpose();
  const GroupSpec& g = model.torus();
  GroupSequence out(g);
  for (std::size_t t = 0; t < g.order(); ++t) out[t] = f[model.rotate(gt, g.sub_index(t, e.shift))];
  return out;
}

inline GroupSequence quasi_regular_apply(const SemidirectModel& model, std::size_t shift, const Rotation& g,
                                         const GroupSequence& f) {
  return quasi_regular_apply(model, {shift, model.rotation_index(g)}, f);
}

/// F(s, g) = <f, U(s, g) phi> on torus x Gamma.
inline FunctionOnG semidirect_transform(const SemidirectModel& model, const GroupSequence& f) {
  const GroupSpec& g = model.torus();
  FunctionOnG F(g, model.orientation_count());
  for (std::size_t o = 0; o < model.orientation_count(); ++o)
    for (std::size_t s = 0; s < g.order(); ++s) F(s, o) = inner(f, quasi_regular_apply(model, {s, o}, model.window()));
  return F;
}

/// Coefficients x(k, g_n) on G' = K' x| Gamma; index k * N + n.
struct CrystalCoefficients {
  GroupSpec lattice;  // abstract K'
  std::size_t orientations = 1;
  std::vector<cplx> values;

  cplx& operator()(std::size_t k, std::size_t n) { return values[k * orientations + n]; }
  const cplx& operator()(std::size_t k, std::size_t n) const { return values[k * orientations + n]; }
};

/// The model rewritten as a translation model over K' with N = |Gamma|
/// generators phi_n = U(0, g_n) varphi.
struct ReducedSemidirect {
  TranslationModel model;
  std::size_t orientations;

  /// x_n(k) = x(k, g_n).
  VectorSequence regroup(const CrystalCoefficients& x) const {
    if (!(x.lattice == model.coefficient_group()) || x.orientations != orientations)
      throw ArgumentError("coefficients do not match the lattice");
    VectorSequence out(model.coefficient_group(), orientations);
    for (std::size_t k = 0; k < x.lattice.order(); ++k)
      for (std::size_t n = 0; n < orientations; ++n) out[n][k] = x(k, n);
    return out;
  }

  CrystalCoefficients ungroup(const VectorSequence& x) const {
    if (!(x.group() == model.coefficient_group()) || x.size() != orientations)
      throw ArgumentError("coefficients do not match the lattice");
    CrystalCoefficients out{x.group(), orientations, std::vector<cplx>(x.group().order() * orientations)};
    for (std::size_t k = 0; k < x.group().order(); ++k)
      for (std::size_t n = 0; n < orientations; ++n) out(k, n) = x[n][k];
    return out;
  }
};

inline ReducedSemidirect semidirect_reduce(const SemidirectModel& model) {
  std::vector<GroupSequence> gens;
  for (std::size_t n = 0; n < model.orientation_count(); ++n)
    gens.push_back(quasi_regular_apply(model, {0, n}, model.varphi()));
  return {TranslationModel(model.window(), model.lattice(), std::move(gens)), model.orientation_count()};
}

/// f = sum over (k, g_n) in G' of x(k, g_n) U(iota k, g_n) varphi, summed
/// directly over the non-abelian subgroup.
inline GroupSequence semidirect_synthesize(const SemidirectModel& model, const CrystalCoefficients& x) {
  GroupSequence f(model.torus());
  for (std::size_t k = 0; k < x.lattice.order(); ++k)
    for (std::size_t n = 0; n < x.orientations; ++n)
      f += x(k, n) * quasi_regular_apply(model, {model.lattice().embed(k), n}, model.varphi());
  return f;
}

}  // namespace gsamp
