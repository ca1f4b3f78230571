#include <doctest.h>

#include <random>
#include <set>

#include "mll/multiindex.hpp"
#include "oracles.hpp"

using mll::Integer;
using mll::MultiIndex;
using mll::Rational;

TEST_CASE("order puts lower total order first, then lexicographic") {
  CHECK(mll::order_lt({1, 0, 0}, {2, 0, 0}));
  CHECK(mll::order_lt({0, 0, 1}, {1, 0, 0}));
  CHECK(mll::order_lt({0, 2, 0}, {1, 0, 1}));
  CHECK_FALSE(mll::order_lt({1, 0, 0}, {1, 0, 0}));
  CHECK_FALSE(mll::order_lt({0, 0, 3}, {1, 1, 0}));
  CHECK_THROWS_AS(mll::order_lt({1, 0}, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("order is a strict total order on |alpha| <= 6") {
  for (std::size_t dim : {2u, 3u}) {
    const auto all = mll::indices_up_to(dim, 6);
    for (const auto& a : all) {
      CHECK_FALSE(mll::order_lt(a, a));
      for (const auto& b : all) {
        if (a == b) continue;
        const bool ab = mll::order_lt(a, b);
        const bool ba = mll::order_lt(b, a);
        REQUIRE(ab != ba);
      }
    }
    // Transitivity on a strided subset keeps this cheap.
    for (std::size_t i = 0; i < all.size(); i += 3) {
      for (std::size_t j = 0; j < all.size(); j += 2) {
        for (std::size_t k = 0; k < all.size(); k += 5) {
          if (mll::order_lt(all[i], all[j]) && mll::order_lt(all[j], all[k])) {
            REQUIRE(mll::order_lt(all[i], all[k]));
          }
        }
      }
    }
  }
}

TEST_CASE("basic multi-index arithmetic") {
  const MultiIndex a{2, 1, 0};
  CHECK(a.order() == 3);
  CHECK(a.factorial() == 2);
  CHECK(a.to_string() == "(2,1,0)");
  CHECK(MultiIndex::parse("2,1,0") == a);
  CHECK(MultiIndex::parse(" 2, 1 ,0") == a);
  CHECK(a - MultiIndex{1, 1, 0} == MultiIndex{1, 0, 0});
  CHECK_THROWS_AS(a - MultiIndex({0, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS((MultiIndex{1, -1}), std::invalid_argument);
  CHECK_THROWS(MultiIndex::parse("1,x"));
  CHECK(a.scaled(3) == MultiIndex{6, 3, 0});
  CHECK(MultiIndex{1, 0, 0}.leq(a));
  CHECK_FALSE(MultiIndex{0, 2, 0}.leq(a));
}

TEST_CASE("factorials and binomials are exact") {
  CHECK(mll::factorial(0) == 1);
  CHECK(mll::factorial(20) == Integer("2432902008176640000"));
  CHECK(mll::factorial(25) == Integer("15511210043330985984000000"));
  CHECK(mll::binomial(10, 3) == 120);
  CHECK(mll::binomial(3, 5) == 0);
  const unsigned parts[] = {2, 1, 1};
  CHECK(mll::multinomial(4, parts) == 12);
  CHECK(mll::binomial(MultiIndex{2, 2}, MultiIndex{1, 1}) == 4);
  const MultiIndex split[] = {MultiIndex{1, 0}, MultiIndex{1, 2}};
  CHECK(mll::multinomial(MultiIndex{2, 2}, split) == 2);
  const MultiIndex bad[] = {MultiIndex{1, 0}, MultiIndex{0, 2}};
  CHECK_THROWS_AS(mll::multinomial(MultiIndex{2, 2}, bad), std::invalid_argument);
}

TEST_CASE("index enumerations") {
  CHECK(mll::indices_of_order(3, 2).size() == 6);
  CHECK(mll::indices_up_to(2, 3).size() == 10);
  const auto lower = mll::lower_set(MultiIndex{2, 1});
  CHECK(lower.size() == 6);
  CHECK(lower.front().is_zero());
  CHECK(lower.back() == MultiIndex({2, 1}));
  for (std::size_t i = 1; i < lower.size(); ++i) CHECK(mll::order_lt(lower[i - 1], lower[i]));
}

TEST_CASE("partition examples") {
  SUBCASE("i = 1 gives the single tuple (1; beta)") {
    const auto p = mll::enumerate_partitions(1, MultiIndex{2, 1, 0});
    REQUIRE(p.size() == 3);
    REQUIRE(p[0].size() == 1);
    CHECK(p[0][0].multiplicities == std::vector<unsigned>{1});
    CHECK(p[0][0].parts[0] == MultiIndex({2, 1, 0}));
    CHECK(p[1].empty());
    CHECK(p[2].empty());
  }
  SUBCASE("i = 2, beta = (2,0,0)") {
    const auto p = mll::enumerate_partitions(2, MultiIndex{2, 0, 0});
    REQUIRE(p[0].size() == 1);
    CHECK(p[0][0].to_string() == "s=1; k=2; lambda=(1,0,0)");
    CHECK(p[1].empty());
  }
  SUBCASE("i = |beta| only uses order-one parts") {
    const auto p = mll::enumerate_partitions(2, MultiIndex{0, 2, 0});
    REQUIRE(p[0].size() == 1);
    CHECK(p[0][0].multiplicities == std::vector<unsigned>{2});
    CHECK(p[0][0].parts[0] == MultiIndex({0, 1, 0}));
    CHECK(p[1].empty());
  }
  SUBCASE("i > |beta| is empty, bad arguments throw") {
    for (const auto& g : mll::enumerate_partitions(4, MultiIndex{1, 1, 0})) CHECK(g.empty());
    CHECK_THROWS_AS(mll::enumerate_partitions(1, MultiIndex{0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(mll::enumerate_partitions(0, MultiIndex{1, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("partitions agree with generate-and-filter for |beta| <= 5") {
  for (std::size_t dim : {2u, 3u}) {
    for (const auto& beta : mll::indices_up_to(dim, 5)) {
      if (beta.is_zero()) continue;
      for (unsigned i = 1; i <= beta.order(); ++i) {
        const auto got = mll::enumerate_partitions(i, beta);
        for (std::size_t s = 0; s < got.size(); ++s) {
          for (const auto& t : got[s]) REQUIRE(mll::is_valid_partition(t, i, beta));
          for (std::size_t l = 1; l < got[s].size(); ++l) REQUIRE_FALSE(got[s][l] == got[s][l - 1]);
        }
        REQUIRE(oracle::as_strings(got) == oracle::partitions(i, beta));
      }
    }
  }
}

TEST_CASE("validator rejects malformed tuples") {
  const MultiIndex beta{2, 1};
  mll::PartitionTuple ok{{1, 1}, {MultiIndex{1, 0}, MultiIndex{1, 1}}};
  CHECK(mll::is_valid_partition(ok, 2, beta));
  mll::PartitionTuple unordered{{1, 1}, {MultiIndex{1, 1}, MultiIndex{1, 0}}};
  CHECK_FALSE(mll::is_valid_partition(unordered, 2, beta));
  mll::PartitionTuple wrong_sum{{1, 1}, {MultiIndex{1, 0}, MultiIndex{0, 1}}};
  CHECK_FALSE(mll::is_valid_partition(wrong_sum, 2, beta));
  mll::PartitionTuple zero_k{{0, 1}, {MultiIndex{0, 1}, MultiIndex{2, 1}}};
  CHECK_FALSE(mll::is_valid_partition(zero_k, 1, beta));
  mll::PartitionTuple zero_part{{1, 1}, {MultiIndex{0, 0}, MultiIndex{2, 1}}};
  CHECK_FALSE(mll::is_valid_partition(zero_part, 2, beta));
}

TEST_CASE("enumeration stays feasible at |beta| = 8") {
  const auto p = mll::enumerate_partitions(4, MultiIndex{3, 3, 2});
  std::size_t total = 0;
  for (const auto& g : p) {
    for (const auto& t : g) REQUIRE(mll::is_valid_partition(t, 4, MultiIndex{3, 3, 2}));
    total += g.size();
  }
  CHECK(total > 0);
}

TEST_CASE("multi-index binomial is bounded by the scalar one, |alpha| <= 8") {
  for (std::size_t dim : {2u, 3u}) {
    for (const auto& alpha : mll::indices_up_to(dim, 8)) {
      for (const auto& beta : mll::lower_set(alpha)) {
        REQUIRE(mll::binomial(alpha, beta) <= mll::binomial(alpha.order(), beta.order()));
      }
    }
  }
}

TEST_CASE("multi-index multinomial is bounded by the scalar one, |alpha| <= 6") {
  for (const auto& alpha : mll::indices_up_to(3, 6)) {
    const auto lower = mll::lower_set(alpha);
    for (const auto& b1 : lower) {
      const MultiIndex rest = alpha - b1;
      const MultiIndex two[] = {b1, rest};
      const unsigned two_orders[] = {b1.order(), rest.order()};
      REQUIRE(mll::multinomial(alpha, two) <= mll::multinomial(alpha.order(), two_orders));
      for (const auto& b2 : mll::lower_set(rest)) {
        const MultiIndex b3 = rest - b2;
        const MultiIndex three[] = {b1, b2, b3};
        const unsigned orders[] = {b1.order(), b2.order(), b3.order()};
        REQUIRE(mll::multinomial(alpha, three) <= mll::multinomial(alpha.order(), orders));
      }
    }
  }
}

TEST_CASE("split convolution over |alpha| = m factors into order sums") {
  std::mt19937_64 rng(7);
  for (std::size_t dim : {2u, 3u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = oracle::random_weights(rng, dim, 6);
      const auto y = oracle::random_weights(rng, dim, 6);
      for (unsigned m = 0; m <= 6; ++m) {
        for (unsigned j = 0; j <= m; ++j) {
          Rational lhs = 0;
          for (const auto& alpha : mll::indices_of_order(dim, m)) {
            for (const auto& beta : mll::lower_set(alpha)) {
              if (beta.order() == j) lhs += x.at(beta) * y.at(alpha - beta);
            }
          }
          Rational sx = 0;
          Rational sy = 0;
          for (const auto& b : mll::indices_of_order(dim, j)) sx += x.at(b);
          for (const auto& g : mll::indices_of_order(dim, m - j)) sy += y.at(g);
          REQUIRE(lhs == sx * sy);
        }
      }
    }
  }
}

TEST_CASE("three-factor split convolution") {
  std::mt19937_64 rng(11);
  const std::size_t dim = 3;
  const auto x = oracle::random_weights(rng, dim, 6);
  const auto y = oracle::random_weights(rng, dim, 6);
  const auto z = oracle::random_weights(rng, dim, 6);
  auto order_sum = [&](const auto& w, unsigned n) {
    Rational s = 0;
    for (const auto& a : mll::indices_of_order(dim, n)) s += w.at(a);
    return s;
  };
  for (unsigned m = 0; m <= 6; ++m) {
    for (unsigned j = 0; j <= m; ++j) {
      for (unsigned k = 0; k <= j; ++k) {
        Rational lhs = 0;
        for (const auto& alpha : mll::indices_of_order(dim, m)) {
          for (const auto& beta : mll::lower_set(alpha)) {
            if (beta.order() != j) continue;
            for (const auto& gamma : mll::lower_set(beta)) {
              if (gamma.order() == k) lhs += x.at(gamma) * y.at(beta - gamma) * z.at(alpha - beta);
            }
          }
        }
        REQUIRE(lhs == order_sum(x, k) * order_sum(y, j - k) * order_sum(z, m - j));
      }
    }
  }
}
