#include <doctest.h>

#include "fca/majorana.hpp"

using namespace fca;

TEST_CASE("product of distinct generators keeps ascending order") {
  MajoranaString g0 = gamma_string(4, 0);
  MajoranaString g1 = gamma_string(4, 1);
  MajoranaString p = mul_strings(g0, g1);
  CHECK(p.mask == 0b11);
  CHECK(p.phase_exp == 0);
}

TEST_CASE("gamma squared is the identity") {
  MajoranaString g0 = gamma_string(4, 0);
  MajoranaString p = mul_strings(g0, g0);
  CHECK(p.mask == 0);
  CHECK(p.phase_exp == 0);
}

TEST_CASE("one transposition contributes a minus sign") {
  MajoranaString g0 = gamma_string(4, 0);
  MajoranaString g1 = gamma_string(4, 1);
  MajoranaString p = mul_strings(g1, g0);
  CHECK(p.mask == 0b11);
  CHECK(p.phase_exp == 2);
}

TEST_CASE("width mismatch is rejected") {
  CHECK_THROWS_AS(mul_strings(gamma_string(2, 0), gamma_string(4, 0)), std::invalid_argument);
}

TEST_CASE("adjoint reverses the generator order") {
  // (g0 g1)^dag = g1 g0 = -g0 g1
  MajoranaString s = mul_strings(gamma_string(4, 0), gamma_string(4, 1));
  MajoranaString sd = adjoint_string(s);
  CHECK(sd.mask == s.mask);
  CHECK(sd.phase_exp == 2);

  // a three-generator string needs 3 transpositions: sign (-1)^3
  MajoranaString t{6, 0b111, 0};
  MajoranaString td = adjoint_string(t);
  CHECK(td.phase_exp == 2);
}

TEST_CASE("grade counts generators mod 2") {
  CHECK(MajoranaString{4, 0b0110, 0}.grade() == 0);
  CHECK(MajoranaString{4, 0b0111, 0}.grade() == 1);
}

TEST_CASE("associativity of string products over random triples") {
  uint64_t state = 88172645463325252ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int trial = 0; trial < 500; trial++) {
    int width = 12;
    MajoranaString a{width, next() & 0xFFF, uint8_t(next() & 3)};
    MajoranaString b{width, next() & 0xFFF, uint8_t(next() & 3)};
    MajoranaString c{width, next() & 0xFFF, uint8_t(next() & 3)};
    MajoranaString lhs = mul_strings(mul_strings(a, b), c);
    MajoranaString rhs = mul_strings(a, mul_strings(b, c));
    CHECK(lhs == rhs);
  }
}
