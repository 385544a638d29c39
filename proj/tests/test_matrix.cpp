// Smith normal form, linear solving, kernels, presented-module maps and the
// sparse lattice echelon.

#include <gtest/gtest.h>

#include <random>

#include "mild/presented.hpp"
#include "mild/sparse.hpp"
#include "support/oracles.hpp"

using namespace mild;

namespace {

const CoefficientRing Q = CoefficientRing::rationals();
const CoefficientRing Z2 = CoefficientRing::localized({2});
const CoefficientRing Z23 = CoefficientRing::localized({2, 3});

std::vector<Scalar> col(std::initializer_list<long long> v) {
  std::vector<Scalar> c;
  for (auto x : v) c.emplace_back(x);
  return c;
}

void check_smith(const ScalarMatrix& M, const CoefficientRing& R) {
  auto s = smith_normal_form(M, R);
  ASSERT_EQ(s.U * M * s.V, s.D) << M.str();
  ASSERT_EQ(s.U * s.U_inv, ScalarMatrix::identity(M.rows()));
  ASSERT_EQ(s.V * s.V_inv, ScalarMatrix::identity(M.cols()));
  for (int i = 0; i < s.D.rows(); ++i)
    for (int j = 0; j < s.D.cols(); ++j)
      if (i != j || i >= s.rank) {
        ASSERT_TRUE(s.D(i, j).is_zero());
      }
  for (int i = 0; i < s.rank; ++i) {
    ASSERT_FALSE(s.diagonal(i).is_zero());
    ASSERT_EQ(R.canon(s.diagonal(i)), s.diagonal(i));
    if (i + 1 < s.rank) {
      ASSERT_TRUE(R.divides(s.diagonal(i), s.diagonal(i + 1)));
    }
  }
  auto unit_det = [&](const ScalarMatrix& X) {
    mpq_class d = oracle::determinant(oracle::to_q(X));
    if (R.is_field()) return d != 0;
    return d != 0 && oracle::s_unit(d.get_num(), R.inverted_primes()) &&
           oracle::s_unit(d.get_den(), R.inverted_primes());
  };
  ASSERT_TRUE(unit_det(s.U));
  ASSERT_TRUE(unit_det(s.V));
  ASSERT_EQ(s.rank, oracle::rank(oracle::to_q(M)));
  for (int i = 0; i < s.U.rows(); ++i)
    for (int j = 0; j < s.U.cols(); ++j) ASSERT_TRUE(R.contains(s.U(i, j)));
}

}  // namespace

TEST(Smith, Examples) {
  auto I = ScalarMatrix::identity(2);
  EXPECT_EQ(smith_normal_form(I, Z2).D, I);
  EXPECT_EQ(smith_normal_form(ScalarMatrix{{3, 3}, {3, 9}}, Z2).D, (ScalarMatrix{{3, 0}, {0, 3}}));
  EXPECT_EQ(smith_normal_form(ScalarMatrix{{0, 3}, {9, 0}}, Z2).D, (ScalarMatrix{{3, 0}, {0, 9}}));
  EXPECT_EQ(smith_normal_form(ScalarMatrix{{2, 0}, {0, 3}}, CoefficientRing::localized({2, 5})).D,
            (ScalarMatrix{{1, 0}, {0, 3}}));
  EXPECT_EQ(smith_normal_form(ScalarMatrix{{6, 0}, {0, 10}}, CoefficientRing::localized({2})).D,
            (ScalarMatrix{{1, 0}, {0, 15}}));
}

TEST(Smith, RandomReconstructionAllRings) {
  std::mt19937 rng(2024);
  for (const CoefficientRing* R : {&Q, &Z2, &Z23})
    for (int t = 0; t < 200; ++t) check_smith(oracle::random_matrix(rng, 6, 30), *R);
}

TEST(Smith, Deterministic) {
  ScalarMatrix M{{4, 6, 2}, {3, 9, 12}, {5, 0, 7}};
  auto a = smith_normal_form(M, Z2), b = smith_normal_form(M, Z2);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(Solve, Examples) {
  ScalarMatrix three{{3}};
  EXPECT_EQ(*solve_linear(three, col({6}), Z2), col({2}));
  EXPECT_FALSE(solve_linear(three, col({1}), Z2).has_value());
  EXPECT_EQ(*solve_linear(three, col({1}), Q), std::vector<Scalar>{Scalar(1, 3)});
}

TEST(Solve, SoundAndCompleteOnSquareSystems) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> val(-12, 12), dim(1, 5);
  for (const CoefficientRing* R : {&Q, &Z2, &Z23})
    for (int t = 0; t < 200; ++t) {
      int n = dim(rng);
      ScalarMatrix M(n, n);
      std::vector<Scalar> b(n);
      for (int i = 0; i < n; ++i) {
        b[i] = Scalar(val(rng));
        for (int j = 0; j < n; ++j) M(i, j) = Scalar(val(rng));
      }
      auto x = solve_linear(M, b, *R);
      if (x) {
        EXPECT_EQ(M.apply(*x), b);
      }
      std::vector<mpq_class> bq;
      for (auto& s : b) bq.push_back(s.to_mpq());
      auto xq = oracle::solve_square(oracle::to_q(M), bq);
      if (!xq) continue;  // singular: only soundness is checked
      bool admissible = true;
      for (auto& v : *xq)
        if (!R->is_field() && !oracle::s_unit(v.get_den(), R->inverted_primes())) admissible = false;
      EXPECT_EQ(x.has_value(), admissible) << M.str();
    }
}

TEST(Kernel, Examples) {
  auto k = kernel_basis(ScalarMatrix{{1, 1}}, Q);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(ScalarMatrix({{1, 1}}).apply(k[0]), col({0}));
  EXPECT_EQ(kernel_basis(ScalarMatrix(2, 2), Q).size(), 2u);
  EXPECT_TRUE(kernel_basis(ScalarMatrix{{2, 4}, {6, 8}}, Z2).empty());
}

TEST(Kernel, RandomDimensionAndCycles) {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    ScalarMatrix M = oracle::random_matrix(rng, 6, 9);
    auto k = kernel_basis(M, Z23);
    for (auto& v : k) EXPECT_EQ(M.apply(v), std::vector<Scalar>(M.rows()));
    EXPECT_EQ(int(k.size()), M.cols() - oracle::rank(oracle::to_q(M)));
  }
}

TEST(Cokernel, Examples) {
  auto e = cokernel_presentation(ScalarMatrix{{1, 0}, {0, 3}}, Z2);
  EXPECT_EQ(e.free_rank, 0);
  EXPECT_EQ(e.torsion, col({3}));
  auto z = cokernel_presentation(ScalarMatrix(3, 0), Z2);
  EXPECT_EQ(z.free_rank, 3);
  EXPECT_TRUE(z.torsion.empty());
  auto q = cokernel_presentation(ScalarMatrix{{3}}, Q);
  EXPECT_EQ(q.free_rank, 0);
  EXPECT_TRUE(q.torsion.empty());
}

TEST(Presented, TorsionAwareInjectivity) {
  // R -> R/3, 1 -> 1 : surjective, kernel generated by 3
  ScalarMatrix F{{1}};
  auto ker = presented_kernel(F, col({0}), col({3}), Z2);
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_EQ(Z2.canon(ker[0].coords[0]), Scalar(3));
  EXPECT_TRUE(presented_surjective(F, col({3}), Z2));
  // R/3 -> R/9, 1 -> 3 : injective, cokernel R/3
  ScalarMatrix G{{3}};
  EXPECT_TRUE(presented_injective(G, col({3}), col({9}), Z2));
  auto cok = presented_cokernel(G, col({9}), Z2);
  ASSERT_EQ(cok.size(), 1u);
  EXPECT_EQ(cok[0].order, Scalar(3));
  // R -> R, 1 -> 3 : injective, not surjective over Z_(2), iso over Q
  EXPECT_TRUE(presented_injective(G, col({0}), col({0}), Z2));
  EXPECT_FALSE(presented_surjective(G, col({0}), Z2));
  EXPECT_TRUE(presented_surjective(G, col({0}), Q));
  // R^2 -> R, [1 1]: kernel (1,-1)
  auto k2 = presented_kernel(ScalarMatrix{{1, 1}}, col({0, 0}), col({0}), Q);
  ASSERT_EQ(k2.size(), 1u);
  EXPECT_EQ(k2[0].coords[0], -k2[0].coords[1]);
}

TEST(Echelon, RelationsAndSolve) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> val(-6, 6), len(1, 7);
  for (const CoefficientRing* R : {&Q, &Z2, &Z23})
    for (int t = 0; t < 150; ++t) {
      int n = len(rng), m = len(rng);
      LatticeEchelon E(*R, true);
      std::vector<SparseVec> vs;
      for (int i = 0; i < m; ++i) {
        std::vector<Scalar> d(n);
        for (auto& x : d) x = Scalar(val(rng) * (rng() % 3 == 0 ? 3 : 1));
        vs.push_back(SparseVec::from_dense(d));
        E.insert(vs.back());
      }
      // relations really are relations, and their count is m - rank
      for (auto& rel : E.relations()) {
        SparseVec s;
        for (auto& [i, c] : rel) s.axpy(c, vs[i]);
        EXPECT_TRUE(s.empty());
      }
      EXPECT_EQ(int(E.relations().size()), m - E.rank());
      // every integer combination is solvable, and the solution reproduces it
      SparseVec target;
      for (int i = 0; i < m; ++i) target.axpy(Scalar(val(rng)), vs[i]);
      auto sol = E.solve(target);
      ASSERT_TRUE(sol.has_value());
      SparseVec back;
      for (auto& [i, c] : *sol) back.axpy(c, vs[i]);
      EXPECT_EQ(back, target);
    }
}
