#pragma once

// Translation model on a finite abelian group G: a window phi, a sampling
// subgroup H <= G and generators phi_1..phi_N. Everything the sampling layer
// needs (analysis transform, synthesis, sample systems, Gram data, the
// reproducing kernel) is computed here with the counting-measure inner product.

#include <Eigen/Dense>
#include <optional>

#include "gsamp/dual.hpp"

namespace gsamp {

/// Complex values on a finite domain: a group G, or G x Gamma when
/// `orientations` > 1. Index = orientation * |G| + element.
class FunctionOnG {
 public:
  FunctionOnG() = default;
  explicit FunctionOnG(GroupSpec group, std::size_t orientations = 1)
      : group_(std::move(group)), orientations_(orientations), values_(group_.order() * orientations) {
    if (orientations == 0) throw ArgumentError("function domain needs at least one orientation");
  }
  explicit FunctionOnG(const GroupSequence& s) : group_(s.group()), orientations_(1), values_(s.values()) {}

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t orientations() const noexcept { return orientations_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }

  cplx& operator()(std::size_t s, std::size_t orientation = 0) { return values_[orientation * group_.order() + s]; }
  const cplx& operator()(std::size_t s, std::size_t orientation = 0) const {
    return values_[orientation * group_.order() + s];
  }

  /// The slice at one orientation as a sequence on G.
  GroupSequence slice(std::size_t orientation = 0) const {
    const auto n = group_.order();
    return {group_, std::vector<cplx>(values_.begin() + static_cast<std::ptrdiff_t>(orientation * n),
                                      values_.begin() + static_cast<std::ptrdiff_t>((orientation + 1) * n))};
  }

 private:
  GroupSpec group_;
  std::size_t orientations_ = 1;
  std::vector<cplx> values_;
};

inline double max_abs_diff(const FunctionOnG& a, const FunctionOnG& b) {
  if (!(a.group() == b.group()) || a.orientations() != b.orientations())
    throw ArgumentError("functions live on different domains");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs(const FunctionOnG& a) {
  double m = 0.0;
  for (const auto& v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// F(t) = <f, T_t phi> = sum_s f(s) conj(phi(s - t)).
inline GroupSequence correlate(const GroupSequence& f, const GroupSequence& phi) {
  f.require_same(phi, "correlate");
  const GroupSpec& g = f.group();
  GroupSequence out(g);
  for (std::size_t t = 0; t < g.order(); ++t) {
    cplx acc = 0.0;
    for (std::size_t s = 0; s < g.order(); ++s) acc += f[s] * std::conj(phi[g.sub_index(s, t)]);
    out[t] = acc;
  }
  return out;
}

struct WindowReport {
  double min_power = 0.0;  // min over xi of |phi^(xi)|^2
  double max_power = 0.0;
  bool is_frame = false;   // {T_t phi} is a frame for all of l2(G)
};

struct RieszBounds {
  double lower = 0.0;
  double upper = 0.0;
  double tolerance = 0.0;
  bool is_riesz = false;
};

inline WindowReport window_report(const GroupSequence& phi) {
  const GroupSequence ph = dft(phi);
  WindowReport r;
  r.min_power = std::numeric_limits<double>::infinity();
  for (const auto& v : ph.values()) {
    r.min_power = std::min(r.min_power, std::norm(v));
    r.max_power = std::max(r.max_power, std::norm(v));
  }
  r.is_frame = r.min_power > kDefaultFrameTolerance * r.max_power;
  return r;
}

class TranslationModel {
 public:
  TranslationModel(GroupSequence window, ProductSubgroup sampling, std::vector<GroupSequence> generators)
      : window_(std::move(window)), sampling_(std::move(sampling)), generators_(std::move(generators)) {
    if (!(window_.group() == sampling_.parent()))
      throw ArgumentError("window lives on " + window_.group().describe() + ", sampling subgroup on " +
                          sampling_.parent().describe());
    if (generators_.empty()) throw ArgumentError("model needs at least one generator");
    for (const auto& g : generators_)
      if (!(g.group() == window_.group())) throw ArgumentError("generators must live on the ambient group");
    window_report_ = gsamp::window_report(window_);
    riesz_ = compute_riesz_bounds();
  }

  const GroupSpec& ambient() const noexcept { return window_.group(); }
  const GroupSequence& window() const noexcept { return window_; }
  const ProductSubgroup& sampling_subgroup() const noexcept { return sampling_; }
  /// The abstract group H on which coefficients and samples live.
  const GroupSpec& coefficient_group() const noexcept { return sampling_.abstract(); }
  const std::vector<GroupSequence>& generators() const noexcept { return generators_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }

  const WindowReport& window_check() const noexcept { return window_report_; }
  /// Riesz bounds of {U(h) phi_n} from the Gram system's transfer matrix.
  const RieszBounds& riesz_bounds() const noexcept { return riesz_; }

  void require_riesz() const {
    if (!riesz_.is_riesz)
      throw PreconditionError("generators do not form a Riesz sequence: lambda_min = " +
                              std::to_string(riesz_.lower));
  }

  /// U(iota(h)) applied to a function on G, for h in the abstract subgroup.
  GroupSequence shift(const GroupSequence& f, std::size_t h) const { return translate(f, sampling_.embed(h)); }

 private:
  RieszBounds compute_riesz_bounds() const;

  GroupSequence window_;
  ProductSubgroup sampling_;
  std::vector<GroupSequence> generators_;
  WindowReport window_report_;
  RieszBounds riesz_;
};

/// a_{m,n}(h) = <phi_n, U(iota h) psi_m> over the abstract subgroup.
inline SequenceMatrix sample_matrix(const TranslationModel& model, const std::vector<GroupSequence>& probes) {
  if (probes.empty()) throw ArgumentError("need at least one probe");
  const GroupSpec& g = model.ambient();
  const GroupSpec& h = model.coefficient_group();
  SequenceMatrix A(h, probes.size(), model.generator_count());
  for (std::size_t m = 0; m < probes.size(); ++m) {
    if (!(probes[m].group() == g)) throw ArgumentError("probe must live on " + g.describe());
    for (std::size_t n = 0; n < model.generator_count(); ++n) {
      const GroupSequence& phi_n = model.generators()[n];
      for (std::size_t k = 0; k < h.order(); ++k) {
        const std::size_t t = model.sampling_subgroup().embed(k);
        cplx acc = 0.0;
        for (std::size_t s = 0; s < g.order(); ++s) acc += phi_n[s] * std::conj(probes[m][g.sub_index(s, t)]);
        A(m, n)[k] = acc;
      }
    }
  }
  return A;
}

/// N x N system g_{n,n'}(k) = <phi_n', U(iota k) phi_n>; its block-circulant
/// expansion is the Gram matrix of {U(iota h) phi_n}.
inline SequenceMatrix gram_system(const TranslationModel& model) { return sample_matrix(model, model.generators()); }

inline RieszBounds TranslationModel::compute_riesz_bounds() const {
  const TransferMatrix gh = transfer(gram_system(*this));
  RieszBounds r;
  r.lower = std::numeric_limits<double>::infinity();
  for (std::size_t xi = 0; xi < gh.characters(); ++xi) {
    const auto ev = psd_eigenvalues(gh.at(xi));
    r.lower = std::min(r.lower, ev.front());
    r.upper = std::max(r.upper, ev.back());
  }
  r.tolerance = kDefaultFrameTolerance * r.upper;
  r.is_riesz = r.lower > r.tolerance;
  return r;
}

/// F(t) = <f, U(t) phi> on the ambient group.
inline FunctionOnG analysis_transform(const TranslationModel& model, const GroupSequence& f) {
  if (!(f.group() == model.ambient())) throw ArgumentError("function must live on " + model.ambient().describe());
  return FunctionOnG(correlate(f, model.window()));
}

/// f = sum_n sum_h x_n(h) U(iota h) phi_n.
inline GroupSequence synthesize(const TranslationModel& model, const VectorSequence& x) {
  if (x.size() != model.generator_count())
    throw ArgumentError("synthesize: model has " + std::to_string(model.generator_count()) +
                        " generators, coefficients have " + std::to_string(x.size()) + " components");
  if (!(x.group() == model.coefficient_group()))
    throw ArgumentError("coefficients must live on " + model.coefficient_group().describe());
  const GroupSpec& g = model.ambient();
  GroupSequence f(g);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const GroupSequence& phi_n = model.generators()[n];
    for (std::size_t k = 0; k < x.group().order(); ++k) {
      const cplx c = x[n][k];
      if (c == cplx{}) continue;
      const std::size_t t = model.sampling_subgroup().embed(k);
      for (std::size_t s = 0; s < g.order(); ++s) f[s] += c * phi_n[g.sub_index(s, t)];
    }
  }
  return f;
}

/// Coefficients of the orthogonal projection of f onto H_Phi, through the
/// Riesz dual of {U(iota h) phi_n}.
inline VectorSequence coefficients_of(const TranslationModel& model, const GroupSequence& f) {
  model.require_riesz();
  if (!(f.group() == model.ambient())) throw ArgumentError("function must live on " + model.ambient().describe());
  // c_n(h) = <f, U(iota h) phi_n>, and c = G * x with G the Gram system.
  VectorSequence c(model.coefficient_group(), model.generator_count());
  for (std::size_t n = 0; n < model.generator_count(); ++n) {
    const GroupSequence corr = correlate(f, model.generators()[n]);
    for (std::size_t k = 0; k < c.group().order(); ++k) c[n][k] = corr[model.sampling_subgroup().embed(k)];
  }
  return apply(square_inverse(gram_system(model)).coefficients, c);
}

/// Extreme eigenvalues of the explicit (|H|N) x (|H|N) Gram matrix of
/// {U(iota h) phi_n}.
inline RieszBounds riesz_sequence_check(const TranslationModel& model, std::size_t cap = kDefaultOracleCap) {
  const GroupSpec& h = model.coefficient_group();
  const std::size_t count = h.order() * model.generator_count();
  if (count > cap)
    throw ResourceError("Gram matrix of " + std::to_string(count) + " vectors exceeds cap " + std::to_string(cap));
  const auto dim = static_cast<Eigen::Index>(model.ambient().order());
  Eigen::MatrixXcd vecs(dim, static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < model.generator_count(); ++n)
    for (std::size_t k = 0; k < h.order(); ++k) {
      const GroupSequence v = model.shift(model.generators()[n], k);
      for (Eigen::Index s = 0; s < dim; ++s)
        vecs(s, static_cast<Eigen::Index>(n * h.order() + k)) = v[static_cast<std::size_t>(s)];
    }
  const auto ev = psd_eigenvalues(vecs.adjoint() * vecs);
  RieszBounds r{ev.front(), ev.back(), kDefaultFrameTolerance * ev.back(), false};
  r.is_riesz = r.lower > r.tolerance;
  return r;
}

/// Frame operator S = sum_t psi(t) psi(t)^* of {U(t) phi}_{t in G} as a dense matrix.
inline Eigen::MatrixXcd frame_operator(const GroupSequence& phi) {
  const GroupSpec& g = phi.group();
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXcd psi(n, n);
  for (std::size_t t = 0; t < g.order(); ++t)
    for (std::size_t s = 0; s < g.order(); ++s)
      psi(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = phi[g.sub_index(s, t)];
  return psi * psi.adjoint();
}

/// k(u, v) = <psi(v), S^{-1} psi(u)> with psi(t) = U(t) phi.
struct ReproducingKernel {
  GroupSpec group;
  Eigen::MatrixXcd table;  // table(u, v) = k(u, v)

  cplx operator()(std::size_t u, std::size_t v) const {
    return table(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }

  /// u -> sum_v F(v) k(u, v).
  FunctionOnG reproduce(const FunctionOnG& F) const {
    if (!(F.group() == group) || F.orientations() != 1) throw ArgumentError("function on the wrong domain");
    const auto n = static_cast<Eigen::Index>(group.order());
    Eigen::VectorXcd f(n);
    for (Eigen::Index v = 0; v < n; ++v) f(v) = F(static_cast<std::size_t>(v));
    const Eigen::VectorXcd out = table * f;
    FunctionOnG r(group);
    for (Eigen::Index u = 0; u < n; ++u) r(static_cast<std::size_t>(u)) = out(u);
    return r;
  }
};

inline constexpr std::size_t kKernelCap = 1024;

inline ReproducingKernel reproducing_kernel(const TranslationModel& model, std::size_t cap = kKernelCap) {
  const GroupSpec& g = model.ambient();
  if (g.order() > cap)
    throw ResourceError("kernel table of order " + std::to_string(g.order()) + " exceeds cap " + std::to_string(cap));
  if (!model.window_check().is_frame)
    throw PreconditionError("window translates are not a frame for l2(G); frame operator is singular");
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXcd psi(n, n);
  for (std::size_t t = 0; t < g.order(); ++t)
    for (std::size_t s = 0; s < g.order(); ++s)
      psi(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = model.window()[g.sub_index(s, t)];
  const Eigen::MatrixXcd S = psi * psi.adjoint();
  const auto ldlt = S.ldlt();
  if (ldlt.info() != Eigen::Success) throw PreconditionError("frame operator factorization failed");
  // k(u, v) = psi(u)^* S^{-1} psi(v)
  return {g, psi.adjoint() * ldlt.solve(psi)};
}

}  // namespace gsamp
