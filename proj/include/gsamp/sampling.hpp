#pragma once

// Generalized regular sampling in H_{U,phi,Phi}: samples are the output of a
// convolution system A acting on expansion coefficients; a left inverse B of A
// yields sampling functions S_m with F(s) = sum_m sum_t L_m F(t) S_m(s - t).

#include <optional>
#include <sstream>

#include "gsamp/semidirect.hpp"

namespace gsamp {

/// Per-character residual accepted for B^ A^ = I.
inline constexpr double kLeftInverseTolerance = 1e-9;
/// Relative tolerance for reconstructed coefficients and functions.
inline constexpr double kReconstructionTolerance = 1e-8;

enum class DualKind { moore_penrose, family, square };

inline DualKind parse_dual_kind(const std::string& s) {
  if (s == "mp" || s == "moore_penrose") return DualKind::moore_penrose;
  if (s == "family") return DualKind::family;
  if (s == "square") return DualKind::square;
  throw ArgumentError("unknown left inverse '" + s + "' (expected mp, family or square)");
}

inline std::string to_string(DualKind k) {
  switch (k) {
    case DualKind::moore_penrose: return "mp";
    case DualKind::family: return "family";
    case DualKind::square: return "square";
  }
  return "?";
}

/// Generalized samples: M sequences over the abstract subgroup.
using SampleSet = VectorSequence;

inline LeftInverse choose_left_inverse(const SequenceMatrix& A, DualKind kind, const TransferMatrix* family,
                                       std::optional<double> tol) {
  switch (kind) {
    case DualKind::moore_penrose: return moore_penrose(A, tol);
    case DualKind::family:
      if (!family) throw ArgumentError("family left inverse needs a parameter matrix C");
      return left_inverse_family(A, *family, tol);
    case DualKind::square: return square_inverse(A);
  }
  throw ArgumentError("unknown left inverse kind");
}

/// A validated sampling procedure: a frame system A over the model's
/// coefficient group together with a left inverse B.
class SamplingProcedure {
 public:
  SamplingProcedure(TranslationModel model, SequenceMatrix system, LeftInverse dual,
                    std::optional<double> tol = std::nullopt)
      : model_(std::move(model)), system_(std::move(system)), dual_(std::move(dual)) {
    if (!(system_.group() == model_.coefficient_group()))
      throw ArgumentError("system lives on " + system_.group().describe() + ", model samples on " +
                          model_.coefficient_group().describe());
    if (system_.cols() != model_.generator_count())
      throw ArgumentError("system has " + std::to_string(system_.cols()) + " columns for " +
                          std::to_string(model_.generator_count()) + " generators");
    model_.require_riesz();
    diagnostics_ = diagnostics(system_, tol);
    if (!diagnostics_.is_frame) {
      std::ostringstream os;
      os << "sampling system is not stable: delta_A = " << diagnostics_.delta << " <= " << diagnostics_.tolerance;
      throw PreconditionError(os.str());
    }
    residual_ = verify_left_inverse(system_, dual_);
    if (!(residual_ < kLeftInverseTolerance))
      throw PreconditionError("B is not a left inverse of A: residual " + std::to_string(residual_));
  }

  static SamplingProcedure build(TranslationModel model, SequenceMatrix A, DualKind kind = DualKind::moore_penrose,
                                 const TransferMatrix* family = nullptr, std::optional<double> tol = std::nullopt) {
    if (A.rows() < A.cols())
      throw PreconditionError("stable sampling needs M >= N, got M = " + std::to_string(A.rows()) +
                              ", N = " + std::to_string(A.cols()));
    LeftInverse B = choose_left_inverse(A, kind, family, tol);
    return {std::move(model), std::move(A), std::move(B), tol};
  }

  static SamplingProcedure from_probes(TranslationModel model, const std::vector<GroupSequence>& probes,
                                       DualKind kind = DualKind::moore_penrose, const TransferMatrix* family = nullptr,
                                       std::optional<double> tol = std::nullopt) {
    SequenceMatrix A = sample_matrix(model, probes);
    return build(std::move(model), std::move(A), kind, family, tol);
  }

  const TranslationModel& model() const noexcept { return model_; }
  const SequenceMatrix& system() const noexcept { return system_; }
  const LeftInverse& dual() const noexcept { return dual_; }
  const FrameDiagnostics& frame() const noexcept { return diagnostics_; }
  double left_inverse_residual() const noexcept { return residual_; }
  std::size_t channels() const noexcept { return system_.rows(); }

 private:
  TranslationModel model_;
  SequenceMatrix system_;
  LeftInverse dual_;
  FrameDiagnostics diagnostics_;
  double residual_ = 0.0;
};

/// L_A F = A * x.
inline SampleSet take_samples(const SamplingProcedure& proc, const VectorSequence& x) {
  return apply(proc.system(), x);
}

/// Samples of the projection of an ambient function onto H_Phi.
inline SampleSet take_samples_from_function(const SamplingProcedure& proc, const GroupSequence& f) {
  return take_samples(proc, coefficients_of(proc.model(), f));
}

/// <f, U(iota t) psi_m> evaluated directly on the ambient group.
inline SampleSet direct_samples(const TranslationModel& model, const std::vector<GroupSequence>& probes,
                                const GroupSequence& f) {
  VectorSequence out(model.coefficient_group(), probes.size());
  for (std::size_t m = 0; m < probes.size(); ++m) {
    const GroupSequence corr = correlate(f, probes[m]);
    for (std::size_t t = 0; t < out.group().order(); ++t) out[m][t] = corr[model.sampling_subgroup().embed(t)];
  }
  return out;
}

/// x = B * samples.
inline VectorSequence reconstruct_coefficients(const SamplingProcedure& proc, const SampleSet& samples) {
  if (samples.size() != proc.channels())
    throw ArgumentError("expected " + std::to_string(proc.channels()) + " sample channels, got " +
                        std::to_string(samples.size()));
  return apply(proc.dual().coefficients, samples);
}

struct SamplingFunctions {
  std::vector<GroupSequence> beta;  // beta_m in H_Phi
  std::vector<FunctionOnG> S;       // S_m(s) = <beta_m, U(s) phi>
};

inline SamplingFunctions build_sampling_functions(const SamplingProcedure& proc) {
  SamplingFunctions out;
  for (std::size_t m = 0; m < proc.channels(); ++m) {
    out.beta.push_back(synthesize(proc.model(), proc.dual().coefficients.column(m)));
    out.S.push_back(analysis_transform(proc.model(), out.beta.back()));
  }
  return out;
}

/// F(s) = sum_m sum_t L_m F(t) S_m(s - iota t), by direct summation.
inline FunctionOnG reconstruct_function(const SamplingProcedure& proc, const SampleSet& samples,
                                        const SamplingFunctions& fns) {
  if (samples.size() != proc.channels() || fns.S.size() != proc.channels())
    throw ArgumentError("sample channels do not match the procedure");
  const GroupSpec& g = proc.model().ambient();
  const auto& sub = proc.model().sampling_subgroup();
  FunctionOnG F(g);
  for (std::size_t m = 0; m < samples.size(); ++m)
    for (std::size_t t = 0; t < samples.group().order(); ++t) {
      const cplx c = samples[m][t];
      if (c == cplx{}) continue;
      const std::size_t shift = sub.embed(t);
      for (std::size_t s = 0; s < g.order(); ++s) F(s) += c * fns.S[m](g.sub_index(s, shift));
    }
  return F;
}

inline FunctionOnG reconstruct_function(const SamplingProcedure& proc, const SampleSet& samples) {
  return reconstruct_function(proc, samples, build_sampling_functions(proc));
}

/// Pointwise sampling F(iota t) with a single generator; the unique dual
/// comes from inverting a^ characterwise.
inline SamplingProcedure shannon_procedure(const TranslationModel& model, std::optional<double> det_tol = std::nullopt) {
  if (model.generator_count() != 1)
    throw PreconditionError("pointwise recovery needs exactly one generator, model has " +
                            std::to_string(model.generator_count()));
  SequenceMatrix a = sample_matrix(model, {model.window()});
  LeftInverse b = square_inverse(a, det_tol);
  return {model, std::move(a), std::move(b)};
}

/// max |L_n S_n'(. - t') (t) - delta_{n,n'} delta_{t,t'}| over all n, n', t, t'.
inline double interpolation_check(const SamplingProcedure& proc) {
  if (proc.system().rows() != proc.system().cols())
    throw PreconditionError("interpolation property needs M = N");
  if (!proc.frame().is_riesz) throw PreconditionError("interpolation property needs a Riesz system");
  const GroupSpec& h = proc.system().group();
  double worst = 0.0;
  for (std::size_t np = 0; np < proc.channels(); ++np) {
    const VectorSequence b = proc.dual().coefficients.column(np);
    for (std::size_t tp = 0; tp < h.order(); ++tp) {
      // S_n'(. - iota t') has coefficients T_t' b_n'.
      const SampleSet l = apply(proc.system(), translate(b, tp));
      for (std::size_t n = 0; n < proc.channels(); ++n)
        for (std::size_t t = 0; t < h.order(); ++t) {
          const double expected = (n == np && t == tp) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(l[n][t] - expected));
        }
    }
  }
  return worst;
}

/// A nonzero coefficient vector annihilated by A at its most degenerate
/// character: x_n(h) = v_n xi0(h) with v the bottom eigenvector of A^(xi0)^* A^(xi0).
inline VectorSequence kernel_witness(const SequenceMatrix& A) {
  const TransferMatrix ah = transfer(A);
  const GroupSpec& g = A.group();
  std::size_t worst_xi = 0;
  double worst = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd v;
  for (std::size_t xi = 0; xi < ah.characters(); ++xi) {
    const Eigen::MatrixXcd gram = ah.at(xi).adjoint() * ah.at(xi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gram + gram.adjoint()));
    if (es.eigenvalues()(0) < worst) {
      worst = es.eigenvalues()(0);
      worst_xi = xi;
      v = es.eigenvectors().col(0);
    }
  }
  VectorSequence x(g, A.cols());
  for (std::size_t n = 0; n < A.cols(); ++n)
    for (std::size_t h = 0; h < g.order(); ++h)
      x[n][h] = v(static_cast<Eigen::Index>(n)) * root_of_unity(g.pairing_exponent(h, worst_xi), g.exponent());
  return x;
}

/// max |a - b| / max |b|, or the absolute error when b vanishes.
inline double relative_residual(const VectorSequence& a, const VectorSequence& b) {
  double scale = 0.0;
  for (const auto& c : b.components())
    for (const auto& v : c.values()) scale = std::max(scale, std::abs(v));
  const double d = max_abs_diff(a, b);
  return scale > 0.0 ? d / scale : d;
}

inline double relative_residual(const FunctionOnG& a, const FunctionOnG& b) {
  const double scale = max_abs(b);
  const double d = max_abs_diff(a, b);
  return scale > 0.0 ? d / scale : d;
}

// ---------------------------------------------------------------------------
// Sampling at a subgroup R of finite index L in H.

/// The model over R with N L generators phi_{nl} = U(iota h_l) phi_n, index n * L + l.
inline TranslationModel regroup_model(const TranslationModel& model, const ProductSubgroup& r_in_h) {
  if (!(r_in_h.parent() == model.coefficient_group()))
    throw ArgumentError("R must be a subgroup of " + model.coefficient_group().describe());
  const auto reps = coset_representatives(r_in_h);
  std::vector<GroupSequence> gens;
  for (const auto& phi_n : model.generators())
    for (const auto& h_l : reps) gens.push_back(model.shift(phi_n, r_in_h.parent().index_of(h_l)));
  return {model.window(), nest(model.sampling_subgroup(), r_in_h), std::move(gens)};
}

class FiniteIndexProcedure {
 public:
  FiniteIndexProcedure(const TranslationModel& model, ProductSubgroup r_in_h, SamplingProcedure procedure)
      : subgroup_(std::move(r_in_h)), cosets_(coset_representatives(subgroup_)), base_generators_(model.generator_count()),
        procedure_(std::move(procedure)) {}

  const ProductSubgroup& subgroup() const noexcept { return subgroup_; }
  const std::vector<GroupElement>& cosets() const noexcept { return cosets_; }
  std::size_t index() const noexcept { return cosets_.size(); }
  const SamplingProcedure& procedure() const noexcept { return procedure_; }

  /// x_{nl}(r) = x_n(h_l + r).
  VectorSequence regroup(const VectorSequence& x) const {
    const GroupSpec& h = subgroup_.parent();
    const GroupSpec& r = subgroup_.abstract();
    if (!(x.group() == h) || x.size() != base_generators_) throw ArgumentError("coefficients do not live on H");
    VectorSequence out(r, base_generators_ * index());
    for (std::size_t n = 0; n < base_generators_; ++n)
      for (std::size_t l = 0; l < index(); ++l) {
        const std::size_t hl = h.index_of(cosets_[l]);
        for (std::size_t k = 0; k < r.order(); ++k) out[n * index() + l][k] = x[n][h.add_index(hl, subgroup_.embed(k))];
      }
    return out;
  }

  VectorSequence ungroup(const VectorSequence& y) const {
    const GroupSpec& h = subgroup_.parent();
    const GroupSpec& r = subgroup_.abstract();
    if (!(y.group() == r) || y.size() != base_generators_ * index()) throw ArgumentError("coefficients do not live on R");
    VectorSequence out(h, base_generators_);
    for (std::size_t n = 0; n < base_generators_; ++n)
      for (std::size_t l = 0; l < index(); ++l) {
        const std::size_t hl = h.index_of(cosets_[l]);
        for (std::size_t k = 0; k < r.order(); ++k) out[n][h.add_index(hl, subgroup_.embed(k))] = y[n * index() + l][k];
      }
    return out;
  }

  /// Samples over H restricted to the embedded R.
  VectorSequence restrict(const VectorSequence& on_h) const {
    VectorSequence out(subgroup_.abstract(), on_h.size());
    for (std::size_t m = 0; m < on_h.size(); ++m)
      for (std::size_t k = 0; k < subgroup_.abstract().order(); ++k) out[m][k] = on_h[m][subgroup_.embed(k)];
    return out;
  }

 private:
  ProductSubgroup subgroup_;
  std::vector<GroupElement> cosets_;
  std::size_t base_generators_;
  SamplingProcedure procedure_;
};

inline FiniteIndexProcedure finite_index_procedure(const TranslationModel& model, const ProductSubgroup& r_in_h,
                                                   SequenceMatrix a_r, DualKind kind = DualKind::moore_penrose,
                                                   const TransferMatrix* family = nullptr,
                                                   std::optional<double> tol = std::nullopt) {
  const std::size_t nl = model.generator_count() * r_in_h.index();
  if (a_r.cols() != nl)
    throw ArgumentError("system over R needs N*L = " + std::to_string(nl) + " columns, got " +
                        std::to_string(a_r.cols()));
  if (a_r.rows() < nl)
    throw PreconditionError("sampling at R needs M >= N*L = " + std::to_string(nl) + ", got M = " +
                            std::to_string(a_r.rows()));
  TranslationModel regrouped = regroup_model(model, r_in_h);
  return {model, r_in_h, SamplingProcedure::build(std::move(regrouped), std::move(a_r), kind, family, tol)};
}

inline FiniteIndexProcedure finite_index_procedure(const TranslationModel& model, const ProductSubgroup& r_in_h,
                                                   const std::vector<GroupSequence>& probes,
                                                   DualKind kind = DualKind::moore_penrose,
                                                   const TransferMatrix* family = nullptr,
                                                   std::optional<double> tol = std::nullopt) {
  return finite_index_procedure(model, r_in_h, sample_matrix(regroup_model(model, r_in_h), probes), kind, family, tol);
}

// ---------------------------------------------------------------------------
// Semi-direct sampling: samples at the lattice K', reconstruction on torus x Gamma.

struct SemidirectReconstruction {
  FunctionOnG reconstructed;
  FunctionOnG direct;
  double residual = 0.0;
};

/// Reconstructs F(s, g) = <f, U(s, g) phi> for every (s, g) from the samples
/// L_m F(k), k in K', with f = synthesize(x) in the reduced model.
inline SemidirectReconstruction semidirect_sample_and_reconstruct(const SemidirectModel& model,
                                                                  const SamplingProcedure& proc,
                                                                  const VectorSequence& x) {
  if (!(proc.model().coefficient_group() == model.lattice().abstract()) ||
      proc.model().generator_count() != model.orientation_count())
    throw ArgumentError("procedure was not built over the model's lattice");
  const GroupSpec& g = model.torus();
  const GroupSequence f = synthesize(proc.model(), x);
  const SampleSet samples = take_samples(proc, x);
  const SamplingFunctions fns = build_sampling_functions(proc);

  SemidirectReconstruction out{FunctionOnG(g, model.orientation_count()), semidirect_transform(model, f), 0.0};
  for (std::size_t m = 0; m < proc.channels(); ++m) {
    const FunctionOnG S = semidirect_transform(model, fns.beta[m]);
    for (std::size_t k = 0; k < samples.group().order(); ++k) {
      const cplx c = samples[m][k];
      const std::size_t shift = model.lattice().embed(k);
      for (std::size_t o = 0; o < model.orientation_count(); ++o)
        for (std::size_t s = 0; s < g.order(); ++s) out.reconstructed(s, o) += c * S(g.sub_index(s, shift), o);
    }
  }
  out.residual = relative_residual(out.reconstructed, out.direct);
  return out;
}

}  // namespace gsamp
