#pragma once

// Frame and Riesz diagnostics for the translate family {T_h a*_m} of a
// convolution system, computed from the spectra of A^(xi)* A^(xi).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gsamp/convolution.hpp"

namespace gsamp {

/// Eigenvalues of the translate-family Gram matrix equal the per-character
/// eigenvalues of A^(xi)* A^(xi) times this factor. With the unnormalized
/// forward transform the block-circulant analysis matrix is diagonalized by
/// the unitary DFT, so the factor is exactly one.
inline constexpr double kGramNormalization = 1.0;

/// Relative factor in the default frame tolerance tol = kDefaultFrameTolerance * beta_A.
inline constexpr double kDefaultFrameTolerance = 1e-10;

struct CharacterSpectrum {
  std::size_t xi = 0;
  std::vector<double> eigenvalues;  // ascending
  double determinant = 0.0;
};

struct FrameDiagnostics {
  double alpha = 0.0;  // min over xi of lambda_min
  double beta = 0.0;   // max over xi of lambda_max
  double delta = 0.0;  // min over xi of det
  bool is_frame = false;
  bool is_riesz = false;
  double tolerance = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// Characters where det(A^* A) <= tolerance.
  std::vector<std::size_t> degenerate_characters;
  std::vector<CharacterSpectrum> per_xi;
};

/// Hermitian part, eigenvalues ascending, clamped at zero for PSD input.
inline std::vector<double> psd_eigenvalues(const Eigen::MatrixXcd& gram) {
  const Eigen::MatrixXcd h = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> ev(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) ev[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()(i));
  return ev;
}

inline FrameDiagnostics diagnostics(const TransferMatrix& Ah, std::optional<double> tol = std::nullopt) {
  if (tol && *tol < 0.0) throw ArgumentError("frame tolerance must be >= 0");
  FrameDiagnostics d;
  d.rows = Ah.rows();
  d.cols = Ah.cols();
  d.alpha = std::numeric_limits<double>::infinity();
  d.delta = std::numeric_limits<double>::infinity();
  d.per_xi.reserve(Ah.characters());
  for (std::size_t xi = 0; xi < Ah.characters(); ++xi) {
    CharacterSpectrum s;
    s.xi = xi;
    s.eigenvalues = psd_eigenvalues(Ah.at(xi).adjoint() * Ah.at(xi));
    s.determinant = 1.0;
    for (double l : s.eigenvalues) s.determinant *= l;
    d.alpha = std::min(d.alpha, s.eigenvalues.front());
    d.beta = std::max(d.beta, s.eigenvalues.back());
    d.delta = std::min(d.delta, s.determinant);
    d.per_xi.push_back(std::move(s));
  }
  d.tolerance = tol ? *tol : kDefaultFrameTolerance * d.beta;
  for (const auto& s : d.per_xi)
    if (!(s.determinant > d.tolerance)) d.degenerate_characters.push_back(s.xi);
  d.is_frame = d.delta > d.tolerance;
  // For M = N, det(A^* A) = |det A|^2, so this is min |det A| > sqrt(tol).
  d.is_riesz = d.is_frame && d.rows == d.cols;
  return d;
}

inline FrameDiagnostics diagnostics(const SequenceMatrix& A, std::optional<double> tol = std::nullopt) {
  return diagnostics(transfer(A), tol);
}

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr std::size_t kDefaultOracleCap = 4096;

/// Dense (M|H|) x (N|H|) analysis matrix of {T_h a*_m}: row (m, h), column
/// (n, g) holds a_{m,n}(h - g).
inline Eigen::MatrixXcd analysis_matrix(const SequenceMatrix& A) {
  const GroupSpec& g = A.group();
  const auto n_h = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXcd op(static_cast<Eigen::Index>(A.rows()) * n_h, static_cast<Eigen::Index>(A.cols()) * n_h);
  for (std::size_t m = 0; m < A.rows(); ++m)
    for (std::size_t n = 0; n < A.cols(); ++n)
      for (std::size_t h = 0; h < g.order(); ++h)
        for (std::size_t k = 0; k < g.order(); ++k)
          op(static_cast<Eigen::Index>(m) * n_h + static_cast<Eigen::Index>(h),
             static_cast<Eigen::Index>(n) * n_h + static_cast<Eigen::Index>(k)) = A(m, n)[g.sub_index(h, k)];
  return op;
}

/// Extreme eigenvalues of the translate-family Gram matrix by brute force,
/// scaled by kGramNormalization.
inline FrameBounds oracle_frame_bounds(const SequenceMatrix& A, std::size_t cap = kDefaultOracleCap) {
  const std::size_t rows = A.group().order() * std::max(A.rows(), A.cols());
  if (rows > cap)
    throw ResourceError("oracle needs a " + std::to_string(rows) + "-row analysis matrix, cap is " + std::to_string(cap));
  const Eigen::MatrixXcd op = analysis_matrix(A);
  const auto ev = psd_eigenvalues(op.adjoint() * op);
  return {ev.front() * kGramNormalization, ev.back() * kGramNormalization};
}

/// alpha^N <= delta <= alpha * beta^(N-1), each with `slack` relative room.
inline bool check_determinant_bounds(const FrameDiagnostics& d, double slack = 1e-9) {
  const double n = static_cast<double>(d.cols);
  const double low = std::pow(d.alpha, n);
  const double high = d.alpha * std::pow(d.beta, n - 1.0);
  const auto leq = [slack](double a, double b) { return a <= b + slack * std::max(std::abs(a), std::abs(b)); };
  return leq(low, d.delta) && leq(d.delta, high);
}

inline bool check_determinant_bounds(const SequenceMatrix& A) { return check_determinant_bounds(diagnostics(A)); }

}  // namespace gsamp
