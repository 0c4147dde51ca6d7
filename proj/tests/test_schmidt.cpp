#include <doctest.h>

#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "fca/dense.hpp"
#include "fca/gates.hpp"
#include "fca/schmidt.hpp"

using namespace fca;

namespace {

// Independent oracle: reshuffle the dense matrix of a two-cell operator and
// count singular values. Valid for even operators, where the graded and the
// plain tensor structures coincide on the even (x) even and odd (x) odd parts
// up to the left parity chain, which is unitary and rank-preserving.
int reshuffle_rank(const GradedOperator& o, double tol = 1e-8) {
  CellLayout lay{2, 1};
  Dense m = to_dense(o, lay);
  Eigen::MatrixXcd r(4, 4);
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++)
      for (int k = 0; k < 2; k++)
        for (int l = 0; l < 2; l++) r(2 * i + j, 2 * k + l) = m(2 * i + k, 2 * j + l);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  int rank = 0;
  for (Eigen::Index s = 0; s < svd.singularValues().size(); s++)
    if (svd.singularValues()(s) > tol * svd.singularValues()(0)) rank++;
  return rank;
}

}  // namespace

TEST_CASE("Pe decomposes into I and Z factors") {
  CellLayout lay{2, 1};
  GradedOperator pe =
      0.5 * GradedOperator::identity(4) + 0.5 * op_mul(majorana_z(lay, 0), majorana_z(lay, 1));
  auto dec = operator_schmidt(pe, lay, 1);
  REQUIRE(dec.pairs.size() == 2);
  CHECK(dec.pairs[0].weight == doctest::Approx(0.5));
  CHECK(dec.pairs[1].weight == doctest::Approx(0.5));
  for (auto& p : dec.pairs) {
    CHECK(p.left.is_homogeneous());
    CHECK(p.right.is_homogeneous());
    // factors proportional to I or Z: a single string each
    CHECK(p.left.term_count() == 1);
  }
  CHECK((dec.reconstruct() - pe).hs_norm() < 1e-12);
}

TEST_CASE("projector times identity has Schmidt rank 1") {
  CellLayout lay{2, 1};
  // |0><0| (x) I
  GradedOperator pr = 0.5 * (GradedOperator::identity(4) + majorana_z(lay, 0));
  auto dec = operator_schmidt(pr, lay, 1);
  CHECK(dec.pairs.size() == 1);
  CHECK(schmidt_rank(pr, lay, 1) == 1);
  CHECK(reshuffle_rank(pr) == 1);
  CHECK((dec.reconstruct() - pr).hs_norm() < 1e-12);
}

TEST_CASE("PiX has rank 2 with one odd-odd pair") {
  CellLayout lay{2, 1};
  GradedOperator pix = 0.5 * GradedOperator::identity(4) +
                       cplx(0, 0.5) * op_mul(majorana_x(lay, 0), majorana_x(lay, 1));
  auto dec = operator_schmidt(pix, lay, 1);
  REQUIRE(dec.pairs.size() == 2);
  int odd_pairs = 0;
  for (auto& p : dec.pairs) {
    CHECK(p.left.parity() == p.right.parity());
    if (p.left.parity() == 1) odd_pairs++;
  }
  CHECK(odd_pairs == 1);
  CHECK((dec.reconstruct() - pix).hs_norm() < 1e-12);
}

TEST_CASE("product operators have rank 1, entangling gates more") {
  CellLayout lay{2, 1};
  GradedOperator xy = op_mul(majorana_x(lay, 0), majorana_y(lay, 1));
  CHECK(schmidt_rank(xy, lay, 1) == 1);

  GradedOperator pe =
      0.5 * GradedOperator::identity(4) + 0.5 * op_mul(majorana_z(lay, 0), majorana_z(lay, 1));
  CHECK(schmidt_rank(pe, lay, 1) == 2);
  CHECK(reshuffle_rank(pe) == 2);

  GradedOperator swap = gate_fermionic_swap();
  CHECK(schmidt_rank(swap, lay, 1) == 4);
  CHECK(reshuffle_rank(swap) == 4);
}

TEST_CASE("factors are orthonormal under the normalized HS inner product") {
  std::mt19937 rng(51);
  CellLayout lay{2, 1};
  std::uniform_real_distribution<double> ud(-1, 1);
  GradedOperator o(4);
  for (uint64_t m = 0; m < 16; m++)
    if (!(std::popcount(m) & 1)) o.add_mask(m, cplx(ud(rng), ud(rng)));
  auto dec = operator_schmidt(o, lay, 1);
  for (size_t a = 0; a < dec.pairs.size(); a++)
    for (size_t b = 0; b < dec.pairs.size(); b++) {
      if (dec.pairs[a].left.parity() != dec.pairs[b].left.parity()) continue;
      cplx li = hs_inner(dec.pairs[a].left, dec.pairs[b].left);
      CHECK(std::abs(li - (a == b ? cplx(1, 0) : cplx(0, 0))) < 1e-10);
    }
  CHECK((dec.reconstruct() - o).hs_norm() < 1e-10);
}

TEST_CASE("mixed parity and degenerate cuts are rejected") {
  CellLayout lay{2, 1};
  GradedOperator odd = majorana_x(lay, 0);
  auto dec = operator_schmidt(odd, lay, 1);  // homogeneous odd is accepted
  CHECK(dec.pairs.size() == 1);
  GradedOperator mixed = majorana_x(lay, 0) + GradedOperator::identity(4);
  CHECK_THROWS_AS(operator_schmidt(mixed, lay, 1), std::invalid_argument);
  CHECK_THROWS_AS(operator_schmidt(odd, lay, 0), std::invalid_argument);
}

TEST_CASE("rank1_factors recovers gauge-fixed factors") {
  CellLayout lay{2, 1};
  CellLayout one{1, 1};
  GradedOperator a = majorana_x(one, 0) + cplx(0, 1) * majorana_y(one, 0);
  GradedOperator b = majorana_z(one, 0) - cplx(2, 0) * GradedOperator::identity(2);
  GradedOperator prod = graded_tensor(a, one, b, one);
  auto f = rank1_factors(prod, lay, 1);
  REQUIRE(f.has_value());
  GradedOperator rec = graded_tensor(f->left, one, f->right, one);
  rec *= f->scale;
  CHECK((rec - prod).hs_norm() < 1e-10);
  CHECK(f->left.hs_norm() == doctest::Approx(1.0));
  CHECK(f->right.hs_norm() == doctest::Approx(1.0));

  GradedOperator pe =
      0.5 * GradedOperator::identity(4) + 0.5 * op_mul(majorana_z(lay, 0), majorana_z(lay, 1));
  CHECK(!rank1_factors(pe, lay, 1).has_value());
}
