#pragma once

// Matrix convolution systems l2_N(H) -> l2_M(H) and their transfer matrices.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsamp/group.hpp"

namespace gsamp {

/// An element of l2_N(H): N sequences over a common group.
class VectorSequence {
 public:
  VectorSequence() = default;
  VectorSequence(const GroupSpec& group, std::size_t components)
      : group_(group), components_(components, GroupSequence(group)) {
    if (components == 0) throw ArgumentError("vector sequence needs at least one component");
  }
  explicit VectorSequence(std::vector<GroupSequence> components) : components_(std::move(components)) {
    if (components_.empty()) throw ArgumentError("vector sequence needs at least one component");
    group_ = components_.front().group();
    for (const auto& c : components_)
      if (!(c.group() == group_)) throw ArgumentError("vector sequence components must share a group");
  }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return components_.size(); }
  GroupSequence& operator[](std::size_t n) { return components_[n]; }
  const GroupSequence& operator[](std::size_t n) const { return components_[n]; }
  const std::vector<GroupSequence>& components() const noexcept { return components_; }

  friend bool operator==(const VectorSequence&, const VectorSequence&) = default;

 private:
  GroupSpec group_;
  std::vector<GroupSequence> components_;
};

inline double norm_squared(const VectorSequence& x) {
  double acc = 0.0;
  for (const auto& c : x.components()) acc += norm_squared(c);
  return acc;
}

inline cplx inner(const VectorSequence& x, const VectorSequence& y) {
  if (x.size() != y.size()) throw ArgumentError("inner: component counts differ");
  cplx acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) acc += inner(x[n], y[n]);
  return acc;
}

inline double max_abs_diff(const VectorSequence& a, const VectorSequence& b) {
  if (a.size() != b.size()) throw ArgumentError("max_abs_diff: component counts differ");
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, max_abs_diff(a[n], b[n]));
  return m;
}

inline VectorSequence translate(const VectorSequence& x, std::size_t t) {
  std::vector<GroupSequence> out;
  out.reserve(x.size());
  for (const auto& c : x.components()) out.push_back(translate(c, t));
  return VectorSequence(std::move(out));
}

/// M x N matrix whose entries are sequences on one group.
class SequenceMatrix {
 public:
  SequenceMatrix() = default;
  SequenceMatrix(const GroupSpec& group, std::size_t rows, std::size_t cols)
      : group_(group), rows_(rows), cols_(cols), entries_(rows * cols, GroupSequence(group)) {
    if (rows == 0 || cols == 0) throw ArgumentError("sequence matrix needs M, N >= 1");
  }
  SequenceMatrix(std::size_t rows, std::size_t cols, std::vector<GroupSequence> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ArgumentError("sequence matrix needs M, N >= 1");
    if (entries_.size() != rows * cols)
      throw ArgumentError("sequence matrix expects " + std::to_string(rows * cols) + " entries, got " +
                          std::to_string(entries_.size()));
    group_ = entries_.front().group();
    for (const auto& e : entries_)
      if (!(e.group() == group_)) throw ArgumentError("sequence matrix entries must share a group");
  }

  static SequenceMatrix identity(const GroupSpec& group, std::size_t n) {
    SequenceMatrix m(group, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = GroupSequence::delta(group);
    return m;
  }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  GroupSequence& operator()(std::size_t m, std::size_t n) { return entries_[m * cols_ + n]; }
  const GroupSequence& operator()(std::size_t m, std::size_t n) const { return entries_[m * cols_ + n]; }
  const std::vector<GroupSequence>& entries() const noexcept { return entries_; }

  /// Column n as an element of l2_M(H).
  VectorSequence column(std::size_t n) const {
    std::vector<GroupSequence> c;
    for (std::size_t m = 0; m < rows_; ++m) c.push_back((*this)(m, n));
    return VectorSequence(std::move(c));
  }

  friend bool operator==(const SequenceMatrix&, const SequenceMatrix&) = default;

 private:
  GroupSpec group_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GroupSequence> entries_;
};

/// One complex rows x cols matrix per character of the dual group.
class TransferMatrix {
 public:
  TransferMatrix() = default;
  TransferMatrix(const GroupSpec& group, std::size_t rows, std::size_t cols)
      : group_(group), rows_(rows), cols_(cols),
        blocks_(group.order(), Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))) {}

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t characters() const noexcept { return blocks_.size(); }

  Eigen::MatrixXcd& at(std::size_t xi) { return blocks_[xi]; }
  const Eigen::MatrixXcd& at(std::size_t xi) const { return blocks_[xi]; }

  void set(std::size_t xi, Eigen::MatrixXcd block) {
    if (static_cast<std::size_t>(block.rows()) != rows_ || static_cast<std::size_t>(block.cols()) != cols_)
      throw ArgumentError("transfer block has the wrong shape");
    blocks_.at(xi) = std::move(block);
  }

 private:
  GroupSpec group_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// (A * x)_m = sum_n a_{m,n} * x_n.
inline VectorSequence apply(const SequenceMatrix& A, const VectorSequence& x) {
  if (x.size() != A.cols())
    throw ArgumentError("apply: system has " + std::to_string(A.cols()) + " inputs, vector has " +
                        std::to_string(x.size()));
  if (!(x.group() == A.group()))
    throw ArgumentError("apply: system on " + A.group().describe() + ", vector on " + x.group().describe());
  VectorSequence out(A.group(), A.rows());
  for (std::size_t m = 0; m < A.rows(); ++m)
    for (std::size_t n = 0; n < A.cols(); ++n) out[m] += convolve(A(m, n), x[n]);
  return out;
}

inline TransferMatrix transfer(const SequenceMatrix& A) {
  TransferMatrix T(A.group(), A.rows(), A.cols());
  for (std::size_t m = 0; m < A.rows(); ++m) {
    for (std::size_t n = 0; n < A.cols(); ++n) {
      const GroupSequence ahat = dft(A(m, n));
      for (std::size_t xi = 0; xi < T.characters(); ++xi)
        T.at(xi)(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = ahat[xi];
    }
  }
  return T;
}

inline SequenceMatrix from_transfer(const TransferMatrix& T) {
  SequenceMatrix A(T.group(), T.rows(), T.cols());
  for (std::size_t m = 0; m < T.rows(); ++m) {
    for (std::size_t n = 0; n < T.cols(); ++n) {
      GroupSequence ahat(T.group());
      for (std::size_t xi = 0; xi < T.characters(); ++xi)
        ahat[xi] = T.at(xi)(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      A(m, n) = idft(ahat);
    }
  }
  return A;
}

/// Transfer-domain representation of a vector sequence: one length-N column
/// per character.
inline std::vector<Eigen::VectorXcd> transfer(const VectorSequence& x) {
  std::vector<Eigen::VectorXcd> out(x.group().order(), Eigen::VectorXcd(static_cast<Eigen::Index>(x.size())));
  for (std::size_t n = 0; n < x.size(); ++n) {
    const GroupSequence xhat = dft(x[n]);
    for (std::size_t xi = 0; xi < out.size(); ++xi) out[xi](static_cast<Eigen::Index>(n)) = xhat[xi];
  }
  return out;
}

/// N x M system with entries a*_{m,n} at (n, m); its transfer matrix is the
/// conjugate transpose of A's at every character.
inline SequenceMatrix adjoint_system(const SequenceMatrix& A) {
  SequenceMatrix out(A.group(), A.cols(), A.rows());
  for (std::size_t m = 0; m < A.rows(); ++m)
    for (std::size_t n = 0; n < A.cols(); ++n) out(n, m) = involution(A(m, n));
  return out;
}

/// B A, formed as B^(xi) A^(xi) per character and transformed back.
inline SequenceMatrix compose(const SequenceMatrix& B, const SequenceMatrix& A) {
  if (B.cols() != A.rows())
    throw ArgumentError("compose: inner dimensions " + std::to_string(B.cols()) + " and " + std::to_string(A.rows()));
  if (!(B.group() == A.group())) throw ArgumentError("compose: systems on different groups");
  const TransferMatrix Bh = transfer(B);
  const TransferMatrix Ah = transfer(A);
  TransferMatrix out(A.group(), B.rows(), A.cols());
  for (std::size_t xi = 0; xi < out.characters(); ++xi) out.set(xi, Bh.at(xi) * Ah.at(xi));
  return from_transfer(out);
}

}  // namespace gsamp
