#pragma once

// Left inverses B^(xi) A^(xi) = I_N of a frame system: the Moore-Penrose
// pseudo-inverse, the full family A^+ + C (I - A A^+), and the square inverse.

#include <Eigen/Dense>
#include <sstream>

#include "gsamp/frame.hpp"

namespace gsamp {

struct LeftInverse {
  TransferMatrix transfer;     // N x M per character
  SequenceMatrix coefficients;  // N x M over the same group
};

/// Below this value of delta_A / beta_A^N the pseudo-inverse switches from
/// the normal equations to an SVD.
inline constexpr double kNormalEquationThreshold = 1e-8;
inline constexpr double kSvdRankTolerance = 1e-12;

namespace detail {

inline Eigen::MatrixXcd pinv_normal(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  return gram.ldlt().solve(a.adjoint());
}

inline Eigen::MatrixXcd pinv_svd(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = s.size() > 0 ? kSvdRankTolerance * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

inline std::string describe_characters(const GroupSpec& g, const std::vector<std::size_t>& xis) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xis.size(); ++i) {
    if (i) os << ", ";
    os << "(";
    const auto c = g.coords_of(xis[i]);
    for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
    os << ")";
  }
  return os.str();
}

inline std::vector<std::vector<int>> character_coords(const GroupSpec& g, const std::vector<std::size_t>& xis) {
  std::vector<std::vector<int>> out;
  for (auto xi : xis) out.push_back(g.coords_of(xi));
  return out;
}

}  // namespace detail

inline LeftInverse make_left_inverse(TransferMatrix bh) {
  SequenceMatrix b = from_transfer(bh);
  return {std::move(bh), std::move(b)};
}

/// Per-character pseudo-inverse [A^* A]^{-1} A^*.
inline LeftInverse moore_penrose(const SequenceMatrix& A, std::optional<double> tol = std::nullopt) {
  const TransferMatrix ah = transfer(A);
  const FrameDiagnostics d = diagnostics(ah, tol);
  if (!d.is_frame) {
    std::ostringstream os;
    os << "system is not a frame: delta_A = " << d.delta << " <= tol = " << d.tolerance;
    throw PreconditionError(os.str());
  }
  const bool use_normal = d.delta / std::pow(d.beta, static_cast<double>(A.cols())) > kNormalEquationThreshold;
  TransferMatrix bh(A.group(), A.cols(), A.rows());
  for (std::size_t xi = 0; xi < ah.characters(); ++xi)
    bh.set(xi, use_normal ? detail::pinv_normal(ah.at(xi)) : detail::pinv_svd(ah.at(xi)));
  return make_left_inverse(std::move(bh));
}

/// B^ = A^+ + C (I_M - A^ A^+). Every member is a left inverse.
inline LeftInverse left_inverse_family(const SequenceMatrix& A, const TransferMatrix& C,
                                       std::optional<double> tol = std::nullopt) {
  if (C.rows() != A.cols() || C.cols() != A.rows())
    throw ArgumentError("family parameter must be " + std::to_string(A.cols()) + "x" + std::to_string(A.rows()));
  if (!(C.group() == A.group())) throw ArgumentError("family parameter lives on a different dual group");
  const TransferMatrix ah = transfer(A);
  const LeftInverse mp = moore_penrose(A, tol);
  const auto m = static_cast<Eigen::Index>(A.rows());
  TransferMatrix bh(A.group(), A.cols(), A.rows());
  for (std::size_t xi = 0; xi < ah.characters(); ++xi) {
    const Eigen::MatrixXcd& pinv = mp.transfer.at(xi);
    const Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(m, m) - ah.at(xi) * pinv;
    bh.set(xi, pinv + C.at(xi) * proj);
  }
  return make_left_inverse(std::move(bh));
}

/// max over xi of |B^(xi) A^(xi) - I_N| entrywise.
inline double verify_left_inverse(const TransferMatrix& ah, const TransferMatrix& bh) {
  if (bh.rows() != ah.cols() || bh.cols() != ah.rows())
    throw ArgumentError("left inverse must be " + std::to_string(ah.cols()) + "x" + std::to_string(ah.rows()));
  const auto n = static_cast<Eigen::Index>(ah.cols());
  double worst = 0.0;
  for (std::size_t xi = 0; xi < ah.characters(); ++xi) {
    const Eigen::MatrixXcd r = bh.at(xi) * ah.at(xi) - Eigen::MatrixXcd::Identity(n, n);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

inline double verify_left_inverse(const SequenceMatrix& A, const SequenceMatrix& B) {
  return verify_left_inverse(transfer(A), transfer(B));
}

inline double verify_left_inverse(const SequenceMatrix& A, const LeftInverse& B) {
  return verify_left_inverse(A, B.coefficients);
}

/// Default tolerance on |det A^(xi)|: sqrt of the frame tolerance on det(A^* A).
inline double default_determinant_tolerance(const TransferMatrix& ah) {
  double beta = 0.0;
  for (std::size_t xi = 0; xi < ah.characters(); ++xi)
    beta = std::max(beta, psd_eigenvalues(ah.at(xi).adjoint() * ah.at(xi)).back());
  return std::sqrt(kDefaultFrameTolerance * beta);
}

/// Exact per-character inverse of a square system whose translates form a
/// Riesz basis; the dual is unique.
inline LeftInverse square_inverse(const SequenceMatrix& A, std::optional<double> tol = std::nullopt) {
  if (A.rows() != A.cols())
    throw PreconditionError("square inverse needs M = N, got " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()));
  const TransferMatrix ah = transfer(A);
  const double det_tol = tol ? *tol : default_determinant_tolerance(ah);
  std::vector<std::size_t> singular;
  TransferMatrix bh(A.group(), A.cols(), A.rows());
  for (std::size_t xi = 0; xi < ah.characters(); ++xi) {
    const auto lu = ah.at(xi).fullPivLu();
    if (!(std::abs(lu.determinant()) > det_tol)) {
      singular.push_back(xi);
      continue;
    }
    bh.set(xi, lu.inverse());
  }
  if (!singular.empty())
    throw SingularCharacterError("transfer matrix is singular at character(s) " +
                                     detail::describe_characters(A.group(), singular),
                                 detail::character_coords(A.group(), singular));
  return make_left_inverse(std::move(bh));
}

}  // namespace gsamp
