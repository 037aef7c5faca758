#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "squeezelab/fock.hpp"

using namespace squeezelab;

TEST_SUITE("fock_core") {

TEST_CASE("single-mode box enumerates 0..2") {
  std::vector<int> cap{2};
  const auto map = build_basis_map(1, cap);
  CHECK(map.dimension() == 3);
  for (int k = 0; k <= 2; ++k) {
    CHECK(map.offset(FockIndex{k}).value() == static_cast<std::size_t>(k));
    CHECK(map.index(static_cast<std::size_t>(k)) == FockIndex{k});
  }
  CHECK_FALSE(map.offset(FockIndex{3}).has_value());
}

TEST_CASE("two-mode box is row-major, last mode fastest") {
  std::vector<int> cap{1, 1};
  const auto map = build_basis_map(2, cap);
  REQUIRE(map.dimension() == 4);
  CHECK(map.index(0) == FockIndex{0, 0});
  CHECK(map.index(1) == FockIndex{0, 1});
  CHECK(map.index(2) == FockIndex{1, 0});
  CHECK(map.index(3) == FockIndex{1, 1});
}

TEST_CASE("four-mode box round trip on random offsets") {
  const int n = 9;
  std::vector<int> cap{n, n, n, n};
  const auto map = build_basis_map(4, cap);
  CHECK(map.dimension() == static_cast<std::size_t>(std::pow(n + 1, 4)));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, map.dimension() - 1);
  for (int i = 0; i < 100; ++i) {
    const auto off = pick(rng);
    CHECK(map.offset(map.index(off)).value() == off);
  }
}

TEST_CASE("basis map rejects bad shapes") {
  std::vector<int> none;
  CHECK_THROWS_AS(build_basis_map(0, none), std::invalid_argument);
  std::vector<int> neg{-1};
  CHECK_THROWS_AS(build_basis_map(1, neg), std::invalid_argument);
  std::vector<int> huge{1 << 30, 1 << 30, 1 << 30, 1 << 30};
  CHECK_THROWS_AS(build_basis_map(4, huge), std::length_error);
}

TEST_CASE("support map is sorted, deduplicated and invertible") {
  std::vector<FockIndex> states{{2, 0}, {0, 1}, {2, 0}, {1, 1}};
  const auto map = BasisMap::from_support(2, states);
  CHECK(map.dimension() == 3);
  CHECK_FALSE(map.is_box());
  for (std::size_t k = 0; k < map.dimension(); ++k) CHECK(map.offset(map.index(k)).value() == k);
  CHECK(map.truncation()[0] == 2);
  CHECK_FALSE(map.offset(FockIndex{5, 5}).has_value());
}

TEST_CASE("FockIndex validates and selects") {
  CHECK_THROWS_AS((FockIndex{1, -1}), std::invalid_argument);
  CHECK_THROWS_AS((FockIndex{1, 2, 3, 4, 5}), std::invalid_argument);
  const FockIndex k{4, 3, 2, 1};
  const std::vector<std::size_t> modes{0, 2};
  CHECK(k.select(modes) == FockIndex{4, 2});
  CHECK(k.total() == 10);
  CHECK(k.with(1, 7) == FockIndex{4, 7, 2, 1});
  CHECK(k.to_string() == "|4,3,2,1>");
}

TEST_CASE("norm_squared") {
  const AmplitudeTensor vac(4, {{FockIndex{0, 0, 0, 0}, Complex{1.0, 0.0}}});
  CHECK(norm_squared(vac) == doctest::Approx(1.0));
  const AmplitudeTensor t(2, {{FockIndex{0, 0}, Complex{0.6, 0.0}}, {FockIndex{1, 1}, Complex{0.0, -0.8}}});
  CHECK(norm_squared(t) == doctest::Approx(1.0));
  // global phase
  CHECK(norm_squared(t.scaled(std::polar(1.0, 0.7))) == doctest::Approx(1.0));
}

TEST_CASE("amplitude tensor rejects duplicates and wrong mode counts") {
  CHECK_THROWS_AS(AmplitudeTensor(2, {{FockIndex{0, 0}, 1.0}, {FockIndex{0, 0}, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AmplitudeTensor(2, {{FockIndex{0, 0, 0}, 1.0}}), std::invalid_argument);
}

TEST_CASE("ladder operators") {
  const AmplitudeTensor one(1, {{FockIndex{3}, Complex{1.0, 0.0}}});
  const auto up = apply_ladder(one, 0, Ladder::Raise);
  CHECK(up.amplitude(FockIndex{4}).real() == doctest::Approx(2.0));
  const auto down = apply_ladder(one, 0, Ladder::Lower);
  CHECK(down.amplitude(FockIndex{2}).real() == doctest::Approx(std::sqrt(3.0)));
  const AmplitudeTensor vac(1, {{FockIndex{0}, Complex{1.0, 0.0}}});
  CHECK(apply_ladder(vac, 0, Ladder::Lower).empty());
  // <3| a^+ a |3> = 3, ops[0] acts first
  const std::pair<std::size_t, Ladder> ops[] = {{0, Ladder::Lower}, {0, Ladder::Raise}};
  CHECK(expectation(one, ops).real() == doctest::Approx(3.0));
}

TEST_CASE("log-space helpers") {
  CHECK(std::exp(log_factorial(10)) == doctest::Approx(3628800.0));
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0));
  CHECK(std::isinf(log_binomial(3, 4)));
  CHECK(log_factorial_ratio(45, 40) == doctest::Approx(std::log(45.0 * 44 * 43 * 42 * 41)));
  // beyond the table: Stirling tail agrees with lgamma
  CHECK(log_factorial(20000) == doctest::Approx(std::lgamma(20001.0)).epsilon(1e-14));
  const double v[] = {std::log(1.0), std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(6.0)));
}

}
