#include <gtest/gtest.h>

#include "gsamp/convolution.hpp"
#include "gsamp/random.hpp"
#include "oracles.hpp"

using namespace gsamp;

namespace {

GroupSequence seq(std::vector<int> moduli, std::vector<cplx> v) { return {GroupSpec(std::move(moduli)), std::move(v)}; }

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST(SequenceMatrix, Validation) {
  const GroupSpec z4({4});
  EXPECT_THROW(SequenceMatrix(z4, 0, 1), ArgumentError);
  EXPECT_THROW(SequenceMatrix(1, 2, {GroupSequence(z4)}), ArgumentError);
  EXPECT_THROW(SequenceMatrix(1, 2, {GroupSequence(z4), GroupSequence(GroupSpec({2}))}), ArgumentError);
  EXPECT_THROW(VectorSequence({GroupSequence(z4), GroupSequence(GroupSpec({4, 1}))}), ArgumentError);
}

TEST(Apply, Examples) {
  const GroupSpec g({3, 2});
  Rng rng(1);
  const VectorSequence x = rng.vector(g, 3);
  EXPECT_EQ(apply(SequenceMatrix::identity(g, 3), x), x);
  const SequenceMatrix A = rng.matrix(g, 2, 3);
  EXPECT_EQ(apply(A, VectorSequence(g, 3)), VectorSequence(g, 2));

  const GroupSpec z2({2});
  const SequenceMatrix B(1, 2, {seq({2}, {1, 0}), seq({2}, {0, 1})});
  const VectorSequence y({seq({2}, {1, 0}), seq({2}, {1, 0})});
  EXPECT_EQ(apply(B, y), VectorSequence({seq({2}, {1, 1})}));

  EXPECT_THROW(apply(A, rng.vector(g, 2)), ArgumentError);
  EXPECT_THROW(apply(A, rng.vector(GroupSpec({6}), 3)), ArgumentError);
}

TEST(Apply, IsTheAnalysisOperatorOfTheTranslates) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupSpec g(trial % 2 ? std::vector<int>{4, 3} : std::vector<int>{7});
    const std::size_t M = 1 + static_cast<std::size_t>(trial % 3), N = 1 + static_cast<std::size_t>(trial % 2);
    const SequenceMatrix A = rng.matrix(g, M, N);
    const VectorSequence x = rng.vector(g, N);
    const VectorSequence y = apply(A, x);
    const SequenceMatrix Astar = adjoint_system(A);
    for (std::size_t m = 0; m < M; ++m) {
      // a*_m is row m of A with each entry involuted, i.e. column m of A*.
      const VectorSequence am = Astar.column(m);
      for (std::size_t h = 0; h < g.order(); ++h) {
        cplx expect = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
          const auto t = oracle::translate(g.moduli(), am[n].values(), g.coords_of(h));
          expect += oracle::inner(x[n].values(), t);
        }
        EXPECT_LT(std::abs(y[m][h] - expect), 1e-10);
      }
    }
  }
}

TEST(Transfer, Examples) {
  const GroupSpec z4({4});
  const TransferMatrix I = transfer(SequenceMatrix::identity(z4, 2));
  for (std::size_t xi = 0; xi < 4; ++xi) EXPECT_EQ(I.at(xi), Eigen::MatrixXcd::Identity(2, 2));

  const TransferMatrix a = transfer(SequenceMatrix(1, 1, {seq({4}, {1, 0.5, 0, 0})}));
  const std::vector<cplx> expect = {1.5, {1.0, -0.5}, 0.5, {1.0, 0.5}};
  for (std::size_t xi = 0; xi < 4; ++xi) EXPECT_LT(std::abs(a.at(xi)(0, 0) - expect[xi]), 1e-15);

  const TransferMatrix z = transfer(SequenceMatrix(z4, 2, 3));
  for (std::size_t xi = 0; xi < 4; ++xi) EXPECT_EQ(z.at(xi), Eigen::MatrixXcd::Zero(2, 3));
}

TEST(Transfer, RoundTripAndConvolutionTheorem) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const GroupSpec g(trial % 2 ? std::vector<int>{2, 2, 3} : std::vector<int>{9});
    const SequenceMatrix A = rng.matrix(g, 3, 2);
    const SequenceMatrix back = from_transfer(transfer(A));
    for (std::size_t m = 0; m < 3; ++m)
      for (std::size_t n = 0; n < 2; ++n) EXPECT_LT(max_abs_diff(back(m, n), A(m, n)), 1e-12);

    const VectorSequence x = rng.vector(g, 2);
    const auto lhs = transfer(apply(A, x));
    const auto xh = transfer(x);
    const TransferMatrix ah = transfer(A);
    for (std::size_t xi = 0; xi < g.order(); ++xi) {
      const Eigen::VectorXcd rhs = ah.at(xi) * xh[xi];
      EXPECT_LE((lhs[xi] - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST(Adjoint, Examples) {
  const GroupSpec z3({3});
  EXPECT_EQ(adjoint_system(SequenceMatrix::identity(z3, 2)), SequenceMatrix::identity(z3, 2));
  EXPECT_EQ(adjoint_system(SequenceMatrix(1, 1, {seq({4}, {1, 0.5, 0, 0})})),
            SequenceMatrix(1, 1, {seq({4}, {1, 0, 0, 0.5})}));
}

TEST(Adjoint, InvolutiveExactConjugateTransposeAndInnerProducts) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const GroupSpec g(trial % 2 ? std::vector<int>{5, 2} : std::vector<int>{8});
    const SequenceMatrix A = rng.matrix(g, 2, 3);
    const SequenceMatrix As = adjoint_system(A);
    EXPECT_EQ(As.rows(), 3u);
    EXPECT_EQ(adjoint_system(As), A);

    const TransferMatrix ah = transfer(A), ash = transfer(As);
    for (std::size_t xi = 0; xi < g.order(); ++xi) {
      const Eigen::MatrixXcd ct = ah.at(xi).adjoint();
      EXPECT_TRUE(ash.at(xi) == ct) << "character " << xi;
    }

    const VectorSequence x = rng.vector(g, 3), y = rng.vector(g, 2);
    cplx lhs = 0.0, rhs = 0.0;
    const VectorSequence ax = apply(A, x), asy = apply(As, y);
    for (std::size_t m = 0; m < 2; ++m) lhs += oracle::inner(ax[m].values(), y[m].values());
    for (std::size_t n = 0; n < 3; ++n) rhs += oracle::inner(x[n].values(), asy[n].values());
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Compose, Examples) {
  const GroupSpec z3({3});
  Rng rng(8);
  const SequenceMatrix A = rng.matrix(z3, 3, 2);
  const SequenceMatrix IA = compose(SequenceMatrix::identity(z3, 3), A);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t n = 0; n < 2; ++n) EXPECT_LT(max_abs_diff(IA(m, n), A(m, n)), 1e-14);
  const SequenceMatrix Z = compose(rng.matrix(z3, 2, 3), SequenceMatrix(z3, 3, 2));
  for (const auto& e : Z.entries()) EXPECT_EQ(norm_squared(e), 0.0);
  EXPECT_THROW(compose(A, A), ArgumentError);
}

TEST(Compose, MatchesPerCharacterProductAndDirectConvolution) {
  Rng rng(10);
  const GroupSpec z3({3});
  for (int trial = 0; trial < 20; ++trial) {
    const SequenceMatrix B = rng.matrix(z3, 2, 3), A = rng.matrix(z3, 3, 2);
    const SequenceMatrix BA = compose(B, A);
    const TransferMatrix bah = transfer(BA), bh = transfer(B), ah = transfer(A);
    for (std::size_t xi = 0; xi < 3; ++xi) {
      Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 3; ++k) prod(i, j) += bh.at(xi)(i, k) * ah.at(xi)(k, j);
      EXPECT_LT(max_abs(bah.at(xi) - prod), 1e-12);
    }
    // Direct-convolution oracle for the composed entries.
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        std::vector<cplx> expect(3);
        for (std::size_t k = 0; k < 3; ++k) {
          const auto c = oracle::convolve({3}, B(i, k).values(), A(k, j).values());
          for (std::size_t h = 0; h < 3; ++h) expect[h] += c[h];
        }
        for (std::size_t h = 0; h < 3; ++h) EXPECT_LT(std::abs(BA(i, j)[h] - expect[h]), 1e-12);
      }
    const VectorSequence x = rng.vector(z3, 2);
    EXPECT_LT(max_abs_diff(apply(BA, x), apply(B, apply(A, x))), 1e-12);
  }
}
