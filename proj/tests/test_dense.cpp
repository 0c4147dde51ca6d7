#include <doctest.h>

#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "fca/dense.hpp"

using namespace fca;

namespace {

// Independent Jordan-Wigner oracle built from explicit Kronecker products.
Eigen::Matrix2cd pauli(char p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Dense kron_chain(const std::string& word) {
  Dense m = pauli(word[0]);
  for (size_t k = 1; k < word.size(); k++) m = Eigen::kroneckerProduct(m, pauli(word[k])).eval();
  return m;
}

// gamma_{2m} = Z...Z X I...I, gamma_{2m+1} = Z...Z Y I...I
Dense gamma_oracle(int modes, int j) {
  int m = j / 2;
  std::string word(size_t(modes), 'I');
  for (int k = 0; k < m; k++) word[size_t(k)] = 'Z';
  word[size_t(m)] = (j % 2) ? 'Y' : 'X';
  return kron_chain(word);
}

GradedOperator random_op(std::mt19937& rng, int width, int terms) {
  std::uniform_real_distribution<double> ud(-1, 1);
  std::uniform_int_distribution<uint64_t> md(0, (uint64_t(1) << width) - 1);
  GradedOperator o(width);
  for (int t = 0; t < terms; t++) o.add_mask(md(rng), cplx(ud(rng), ud(rng)));
  return o;
}

}  // namespace

TEST_CASE("dense generators match the Kronecker oracle") {
  CellLayout lay{3, 1};
  for (int j = 0; j < lay.width(); j++) {
    GradedOperator g = GradedOperator::from_string(gamma_string(lay.width(), j));
    CHECK((to_dense(g, lay) - gamma_oracle(lay.modes(), j)).norm() < 1e-13);
  }
}

TEST_CASE("X on one mode is the bit flip; identity maps to identity") {
  CellLayout lay{1, 1};
  Dense x = to_dense(majorana_x(lay, 0), lay);
  CHECK((x - pauli('X')).norm() < 1e-14);
  Dense id = to_dense(GradedOperator::identity(2), lay);
  CHECK((id - Dense::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("XY = iZ on one mode") {
  CellLayout lay{1, 1};
  Dense prod = to_dense(op_mul(majorana_x(lay, 0), majorana_y(lay, 0)), lay);
  CHECK((prod - cplx(0, 1) * pauli('Z')).norm() < 1e-13);
}

TEST_CASE("to_dense is a star-isomorphism") {
  std::mt19937 rng(31);
  CellLayout lay{3, 1};
  for (int trial = 0; trial < 40; trial++) {
    GradedOperator a = random_op(rng, lay.width(), 8);
    GradedOperator b = random_op(rng, lay.width(), 8);
    Dense da = to_dense(a, lay), db = to_dense(b, lay);
    CHECK((to_dense(op_mul(a, b), lay) - da * db).norm() < 1e-11);
    CHECK((to_dense(a.adjoint(), lay) - da.adjoint()).norm() < 1e-11);
  }
}

TEST_CASE("round trip to_dense / from_dense is the identity") {
  std::mt19937 rng(37);
  CellLayout lay{3, 1};
  for (int trial = 0; trial < 20; trial++) {
    GradedOperator o = random_op(rng, lay.width(), 10);
    GradedOperator back = from_dense(to_dense(o, lay), lay);
    CHECK((o - back).hs_norm() < 1e-12);
  }
}

TEST_CASE("graded tensor sign matches the explicit JW Kronecker construction") {
  // (X (x) Y) embedded then squared reproduces (-1)^{g g} against the oracle
  CellLayout one{1, 1}, two{2, 1};
  GradedOperator xy = graded_tensor(majorana_x(one, 0), one, majorana_y(one, 0), one);
  Dense oracle = gamma_oracle(2, 0) * gamma_oracle(2, 3);
  CHECK((to_dense(xy, two) - oracle).norm() < 1e-13);

  // two disjoint embedded factors on 4 cells
  CellLayout four{4, 1};
  GradedOperator left = embed(xy, {0, 1}, two, four);
  GradedOperator right = embed(xy, {2, 3}, two, four);
  Dense dl = gamma_oracle(4, 0) * gamma_oracle(4, 3);
  Dense dr = gamma_oracle(4, 4) * gamma_oracle(4, 7);
  CHECK((to_dense(op_mul(left, right), four) - dl * dr).norm() < 1e-12);
}

TEST_CASE("apply_left agrees with dense multiplication") {
  std::mt19937 rng(41);
  CellLayout lay{3, 1};
  GradedOperator op = random_op(rng, lay.width(), 6);
  Dense m = Dense::Random(lay.dim(), lay.dim());
  Dense expect = to_dense(op, lay) * m;
  Dense got = m;
  apply_left(got, op, lay);
  CHECK((got - expect).norm() < 1e-11);
}

TEST_CASE("apply_vec agrees with dense matrix-vector product") {
  std::mt19937 rng(43);
  CellLayout lay{3, 1};
  GradedOperator op = random_op(rng, lay.width(), 6);
  DenseVec v = DenseVec::Random(lay.dim());
  CHECK((apply_vec(op, lay, v) - to_dense(op, lay) * v).norm() < 1e-11);
}

TEST_CASE("spectral norm matches SVD on small matrices") {
  std::mt19937 rng(47);
  Dense m = Dense::Random(40, 40);
  Eigen::JacobiSVD<Dense> svd(m);
  CHECK(spectral_norm(m) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
}

TEST_CASE("extract_local finds the supported window and the leakage") {
  CellLayout lay{4, 1};
  GradedOperator o = op_mul(majorana_x(lay, 1), majorana_y(lay, 2));
  Dense od = to_dense(o, lay);
  auto loc = extract_local(od, lay, {1, 2});
  CHECK(loc.outside_norm < 1e-12);
  CellLayout two{2, 1};
  GradedOperator expect = op_mul(majorana_x(two, 0), majorana_y(two, 1));
  CHECK((loc.op - expect).hs_norm() < 1e-12);

  auto missing = extract_local(od, lay, {0, 1});
  CHECK(missing.outside_norm > 0.9);
}

TEST_CASE("mode cap guard") {
  CellLayout big{20, 1};
  CHECK_THROWS_AS(check_dense_cap(big), std::invalid_argument);
}
