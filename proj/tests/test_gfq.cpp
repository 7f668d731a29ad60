#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unicent/gfq.hpp"

using namespace unicent;

TEST_CASE("default modulus selection is deterministic") {
  auto F9 = FieldCtx::create(3, 2);
  CHECK(F9->modulus == std::vector<int>{1, 0, 1});  // X^2 + 1
  CHECK(F9->Q == 9);
  CHECK(F9->q_sub == 3);

  auto F3 = FieldCtx::create(3, 1);
  CHECK(F3->Q == 3);

  auto F81 = FieldCtx::create(3, 4);
  CHECK(F81->Q == 81);
  CHECK(F81->q_sub == 9);
}

TEST_CASE("reducible or invalid moduli are rejected") {
  CHECK_THROWS(FieldCtx::create(3, 2, std::vector<int>{0, 1, 1}));  // X^2+X
  CHECK_THROWS(FieldCtx::create(4, 1));
  CHECK_THROWS(FieldCtx::create(2, 1));
}

TEST_CASE("basic arithmetic in F_9 and F_3") {
  auto F9 = FieldCtx::create(3, 2);
  int i = F9->from_coeffs({0, 1});
  CHECK(F9->mul(i, i) == F9->from_int(-1));
  CHECK(F9->pow(i, BigInt(0)) == 1);

  auto F3 = FieldCtx::create(3, 1);
  CHECK(F3->add(2, 2) == 1);

  CHECK_THROWS(F9->inv(0));
  CHECK_THROWS(F9->div(1, 0));
}

TEST_CASE("field axioms on random elements") {
  for (auto [p, k] : {std::pair{3, 2}, {5, 2}, {7, 2}, {3, 4}}) {
    auto F = FieldCtx::create(p, k);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 300; ++t) {
      int a = static_cast<int>(rng() % F->Q);
      int b = static_cast<int>(rng() % F->Q);
      int c = static_cast<int>(rng() % F->Q);
      CHECK(F->add(a, b) == F->add(b, a));
      CHECK(F->mul(a, b) == F->mul(b, a));
      CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
    }
  }
}

TEST_CASE("sigma is the involutory field automorphism with fixed field F_q") {
  for (auto [p, k] : {std::pair{3, 2}, {5, 2}, {7, 2}, {3, 4}}) {
    auto F = FieldCtx::create(p, k);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
      int a = static_cast<int>(rng() % F->Q);
      int b = static_cast<int>(rng() % F->Q);
      CHECK(F->sigma(F->sigma(a)) == a);
      CHECK(F->sigma(F->add(a, b)) == F->add(F->sigma(a), F->sigma(b)));
      CHECK(F->sigma(F->mul(a, b)) == F->mul(F->sigma(a), F->sigma(b)));
    }
    int fixed = 0;
    for (int a = 0; a < F->Q; ++a)
      if (F->sigma(a) == a) ++fixed;
    CHECK(fixed == F->q_sub);
  }
}

TEST_CASE("sigma in F_9 sends i to -i and fixes F_3") {
  auto F9 = FieldCtx::create(3, 2);
  int i = F9->from_coeffs({0, 1});
  CHECK(F9->sigma(i) == F9->neg(i));
  for (int c = 0; c < 3; ++c) CHECK(F9->sigma(F9->from_int(c)) == F9->from_int(c));
}

TEST_CASE("sigma requires a quadratic extension") {
  auto F3 = FieldCtx::create(3, 1);
  CHECK_THROWS(F3->sigma(1));
}

TEST_CASE("element orders") {
  auto F9 = FieldCtx::create(3, 2);
  CHECK(F9->order(1) == 1);
  int i = F9->from_coeffs({0, 1});
  CHECK(F9->order(i) == 4);
  int gens = 0;
  for (int a = 1; a < 9; ++a) {
    BigInt o = F9->order(a);
    CHECK((BigInt(8) % o) == 0);
    if (o == 8) ++gens;
  }
  CHECK(gens == 4);  // phi(8)
  CHECK_THROWS(F9->order(0));
}

TEST_CASE("norm maps onto the subfield") {
  auto F9 = FieldCtx::create(3, 2);
  for (int a = 0; a < 9; ++a) CHECK(F9->in_subfield(F9->norm(a)));
  for (int c = 0; c < 3; ++c) {
    int a = F9->from_int(c);
    int s = F9->solve_norm(a);
    if (c == 0)
      CHECK(s == 0);
    else {
      REQUIRE(s >= 0);
      CHECK(F9->norm(s) == a);
    }
  }
}

TEST_CASE("element text format round trip") {
  auto F9 = FieldCtx::create(3, 2);
  int x = F9->parse_elem("2,1");
  CHECK(F9->coeffs(x) == std::vector<int>{2, 1});
  CHECK(F9->elem_str(x) == "2,1");

  auto ctx = FieldCtx::parse_spec("3^2:1,0,1");
  CHECK(ctx->Q == 9);
  CHECK(ctx->spec_string() == "3^2:1,0,1");
  CHECK(ctx.get() == F9.get());  // cached identical context
}
