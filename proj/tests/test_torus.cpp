#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "hofa/torus.hpp"
#include "oracles.hpp"

using namespace hofa;

namespace {

Monomial mono(std::vector<std::uint8_t> exps, int k, int c) { return {std::move(exps), k, c}; }

TorusValue tv(std::uint64_t num, int depth, int p) { return {num, depth, p}; }

}  // namespace

TEST(TorusValue, ArithmeticAndLifting) {
  const auto a = tv(1, 1, 2);  // 1/4
  const auto b = tv(1, 0, 2);  // 1/2
  EXPECT_EQ(a + a, b);
  EXPECT_EQ((a + b).numerator(), 3u);
  EXPECT_EQ(-a, tv(3, 1, 2));
  EXPECT_EQ(b.lifted(2).numerator(), 4u);
  EXPECT_EQ(tv(4, 2, 2).canonical().depth(), 0);
  EXPECT_TRUE(tv(2, 1, 3).in_group(1));
  EXPECT_FALSE(tv(2, 1, 3).in_group(0));
  EXPECT_DOUBLE_EQ(tv(3, 1, 2).to_double(), 0.75);
  EXPECT_EQ(a.scaled(4), TorusValue(2));
}

TEST(TorusValue, IotaEmbedsField) {
  EXPECT_EQ(TorusValue::iota(2, 3), tv(2, 0, 3));
  EXPECT_THROW(TorusValue::iota(3, 3), ValidationError);
}

TEST(NCPolynomial, EvaluationExamples) {
  const NCPolynomial P(2, 1, {mono({1}, 1, 1)});
  EXPECT_EQ(P.eval(FieldVector(2, {0})), tv(0, 0, 2));
  EXPECT_EQ(P.eval(FieldVector(2, {1})), tv(1, 1, 2));

  const NCPolynomial Q(2, 2, {mono({1, 0}, 0, 1), mono({0, 1}, 0, 1)});
  EXPECT_EQ(Q.eval(FieldVector(2, {1, 1})), tv(0, 0, 2));

  const NCPolynomial Z(3, 2);
  for (std::uint64_t x = 0; x < 9; ++x) EXPECT_EQ(Z.eval_index(x), TorusValue(3));
}

TEST(NCPolynomial, ValidationRejectsBadMonomials) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code([] { NCPolynomial(2, 1, {mono({2}, 0, 1)}); }), "poly.monomial");
  EXPECT_EQ(code([] { NCPolynomial(3, 1, {mono({1}, 0, 3)}); }), "poly.monomial");
  EXPECT_EQ(code([] { NCPolynomial(2, 2, {mono({0, 0}, 0, 1)}); }), "poly.monomial");
  EXPECT_EQ(code([] { NCPolynomial(2, 2, {mono({1}, 0, 1)}); }), "poly.monomial");
  EXPECT_EQ(code([] { NCPolynomial(2, 1, {mono({1}, 0, 1), mono({1}, 0, 1)}); }), "poly.monomial");
  EXPECT_TRUE(NCPolynomial(2, 1, {mono({1}, 0, 0)}).is_zero());
}

TEST(NCPolynomial, EvaluationMatchesIntegerOracle) {
  Rng rng({11, 0});
  for (int p : {2, 3, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(3));
      const int d = 1 + static_cast<int>(rng.below(5));
      const auto P = testing_helpers::random_poly(p, n, d, rng);
      const auto table = P.table();
      for (std::uint64_t x = 0; x < table.size(); ++x) {
        EXPECT_EQ(table.num[x], oracle::eval_numerator(P, x, table.depth));
      }
    }
  }
}

TEST(NCPolynomial, StructuralDegreeDepthExamples) {
  EXPECT_EQ(degree_depth_structural(NCPolynomial(2, 1, {mono({1}, 1, 1)})), std::make_pair(2, 1));
  EXPECT_EQ(degree_depth_structural(NCPolynomial(2, 2, {mono({1, 1}, 0, 1)})), std::make_pair(2, 0));
  EXPECT_EQ(degree_depth_structural(NCPolynomial(3, 2, {mono({1, 1}, 1, 1)})), std::make_pair(4, 1));
  EXPECT_EQ(degree_depth_structural(NCPolynomial(3, 2)), std::make_pair(0, 0));
}

TEST(NCPolynomial, AdditionCarriesAcrossDepths) {
  const NCPolynomial P(2, 1, {mono({1}, 1, 1)});
  EXPECT_EQ(P + P, NCPolynomial(2, 1, {mono({1}, 0, 1)}));
  EXPECT_TRUE((P + -P).is_zero());
}

TEST(NCPolynomial, ScalarMultipleExamples) {
  const NCPolynomial P(2, 1, {mono({1}, 1, 1)});
  const auto twice = scalar_multiple(P, 2);
  EXPECT_EQ(twice, NCPolynomial(2, 1, {mono({1}, 0, 1)}));
  EXPECT_EQ(degree_depth_structural(twice), std::make_pair(1, 0));

  const NCPolynomial C(3, 2, {mono({1, 1}, 0, 2), mono({2, 0}, 0, 1)});
  EXPECT_TRUE(scalar_multiple(C, 3).is_zero());
  EXPECT_EQ(scalar_multiple(C, 1), C);
}

TEST(NCPolynomial, ScalarMultipleAgreesWithTableRoute) {
  Rng rng({12, 0});
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(3));
      const int d = 1 + static_cast<int>(rng.below(5));
      const auto P = testing_helpers::random_poly(p, n, d, rng);
      for (std::int64_t lambda : {1, 2, 3, 4, 7, 9, 10}) {
        const auto sym = scalar_multiple(P, lambda);
        EXPECT_EQ(sym, scalar_multiple_via_table(P, lambda));
        for (std::uint64_t x = 0; x < checked_pow(p, n); ++x) EXPECT_EQ(sym.eval_index(x), P.eval_index(x).scaled(lambda));
      }
    }
  }
}

TEST(NCPolynomial, NonzeroUnitMultiplesPreserveType) {
  Rng rng({13, 0});
  for (int p : {2, 3, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto P = testing_helpers::random_poly(p, 2, 1 + static_cast<int>(rng.below(5)), rng);
      for (int lambda = 1; lambda < p; ++lambda) {
        EXPECT_EQ(degree_depth_structural(scalar_multiple(P, lambda)), degree_depth_structural(P));
      }
    }
  }
}

TEST(NCPolynomial, IotaEmbedExamples) {
  const auto Q1 = iota_embed(2, 1, {mono({1}, 0, 1)});
  std::set<std::uint64_t> values;
  for (std::uint64_t x = 0; x < 2; ++x) values.insert(Q1.eval_index(x).lifted(0).numerator());
  EXPECT_EQ(values, (std::set<std::uint64_t>{0, 1}));

  const auto Q2 = iota_embed(2, 2, {mono({1, 1}, 0, 1)});
  EXPECT_EQ(Q2.degree(), 2);
  EXPECT_EQ(Q2.depth(), 0);

  const auto Q3 = iota_embed(3, 1, {mono({1}, 0, 2)});
  EXPECT_EQ(Q3.eval(FieldVector(3, {2})), tv(1, 0, 3));
  EXPECT_THROW(iota_embed(2, 1, {mono({1}, 1, 1)}), ValidationError);
}

TEST(NCPolynomial, InterpolationRoundTrip) {
  Rng rng({14, 0});
  for (int p : {2, 3, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(3));
      const auto P = testing_helpers::random_poly(p, n, 1 + static_cast<int>(rng.below(6)), rng);
      EXPECT_EQ(interpolate(P.table()), P);
    }
  }
  TorusFunction shifted(2, 1, 0, {1, 0});
  try {
    interpolate(shifted);
    ADD_FAILURE();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), "torus.shift");
  }
}

TEST(TorusFunction, AdditiveDerivativeExamples) {
  TorusFunction constant(3, 2, 1, std::vector<std::uint32_t>(9, 5));
  const auto dc = additive_derivative(constant, FieldVector(3, {1, 2}));
  for (auto v : dc.num) EXPECT_EQ(v, 0u);

  const auto iota_x1 = NCPolynomial(2, 1, {mono({1}, 0, 1)}).table();
  const auto d1 = additive_derivative(iota_x1, FieldVector(2, {1}));
  EXPECT_EQ(d1.at(0), tv(1, 0, 2));
  EXPECT_EQ(d1.at(1), tv(1, 0, 2));

  const auto quarter = NCPolynomial(2, 1, {mono({1}, 1, 1)}).table();
  const auto d2 = additive_derivative(quarter, FieldVector(2, {1}));
  EXPECT_EQ(d2.at(0), tv(1, 1, 2));
  EXPECT_EQ(d2.at(1), tv(3, 1, 2));
}

TEST(TorusFunction, DegreeViaTablesExamples) {
  EXPECT_EQ(degree_via_tables(NCPolynomial(2, 1, {mono({1}, 1, 1)}).table(), 4).degree, 2);
  EXPECT_EQ(degree_via_tables(TorusFunction(3, 2, 0, std::vector<std::uint32_t>(9, 1)), 4).degree, 0);
  EXPECT_EQ(degree_via_tables(NCPolynomial(2, 2, {mono({1, 1}, 0, 1)}).table(), 4).degree, 2);
  EXPECT_EQ(degree_via_tables(NCPolynomial(3, 2, {mono({1, 1}, 1, 1)}).table(), 6).degree, 4);
  EXPECT_TRUE(degree_via_tables(NCPolynomial(2, 3, {mono({1, 1, 1}, 0, 1)}).table(), 2).exceeds_max());
}

TEST(TorusFunction, DegreeViaTablesMatchesBruteForce) {
  Rng rng({15, 0});
  struct Case { int p, n, dmax; };
  for (const auto c : {Case{2, 3, 4}, Case{2, 4, 3}, Case{3, 2, 4}, Case{5, 1, 5}}) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto P = testing_helpers::random_poly(c.p, c.n, 1 + static_cast<int>(rng.below(c.dmax)), rng);
      const auto table = P.table();
      const auto fast = degree_via_tables(table, c.dmax);
      const int brute = oracle::degree_brute(table, c.dmax);
      ASSERT_TRUE(fast.degree.has_value());
      EXPECT_EQ(*fast.degree, brute);
      EXPECT_EQ(*fast.degree, P.degree());
    }
  }
  // arbitrary tables, not necessarily low degree
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint32_t> num(8);
    for (auto& v : num) v = static_cast<std::uint32_t>(rng.below(4));
    const TorusFunction f(2, 3, 1, num);
    const auto fast = degree_via_tables(f, 4);
    EXPECT_EQ(fast.degree.value_or(5), oracle::degree_brute(f, 4));
  }
}

TEST(TorusFunction, DerivativeLowersDegree) {
  Rng rng({16, 0});
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto P = testing_helpers::random_poly(p, 2, 2 + static_cast<int>(rng.below(3)), rng);
      const auto table = P.table();
      for (std::uint64_t h = 0; h < table.size(); ++h) {
        const auto dh = additive_derivative(table, FieldVector::from_index(p, 2, h));
        EXPECT_LE(degree_via_tables(dh, P.degree()).degree.value_or(99), P.degree() - 1);
      }
    }
  }
}

TEST(TorusFunction, ValueCountBound) {
  Rng rng({17, 0});
  for (int p : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + static_cast<int>(rng.below(5));
      const auto P = testing_helpers::random_poly(p, 3, d, rng);
      const auto t = P.table();
      std::set<std::uint32_t> values(t.num.begin(), t.num.end());
      EXPECT_LE(values.size(), checked_pow(p, (d - 1) / (p - 1) + 1));
      EXPECT_LE(t.depth, P.depth());
    }
  }
}

TEST(TorusFunction, DegreeWorkLimitIsDistinctFromExceeds) {
  const auto t = NCPolynomial(2, 6, {mono({1, 1, 1, 0, 0, 0}, 0, 1)}).table();
  RunOptions tight;
  tight.work_ceiling = 10;
  try {
    degree_via_tables(t, 5, tight);
    ADD_FAILURE();
  } catch (const WorkLimitError& e) {
    EXPECT_EQ(e.code(), "work.degree_via_tables");
    EXPECT_GT(e.estimate(), 10);
  }
  EXPECT_GT(degree_via_tables_work(2, 6, 0, 5), 10);
}

TEST(TorusFunction, RandomizedDegreeTest) {
  const auto t = NCPolynomial(3, 3, {mono({2, 1, 0}, 0, 1), mono({1, 0, 0}, 1, 2)}).table();
  EXPECT_TRUE(degree_at_most_randomized(t, 3, 200, {1, 0}));
  EXPECT_FALSE(degree_at_most_randomized(t, 2, 200, {1, 0}));
}
