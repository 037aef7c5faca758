#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "squeezelab/reductions.hpp"
#include "squeezelab/states.hpp"

using namespace squeezelab;

namespace {

/// Compares a DensityMatrix with a dense real oracle over the box [0, cap]^k.
double max_oracle_diff(const DensityMatrix& rho, const Eigen::MatrixXd& ref, int cap) {
  const std::size_t k = rho.kept_modes().size();
  std::vector<int> caps(k, cap);
  const auto box = build_basis_map(k, caps);
  double worst = 0.0;
  for (std::size_t i = 0; i < box.dimension(); ++i)
    for (std::size_t j = 0; j < box.dimension(); ++j) {
      const FockIndex a = box.index(i), b = box.index(j);
      Complex v{0.0, 0.0};
      if (rho.basis().offset(a) && rho.basis().offset(b)) v = rho.element(a, b);
      worst = std::max(worst, std::abs(v - ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
  return worst;
}

}  // namespace

TEST_SUITE("reductions") {

TEST_CASE("partial trace matches brute-force dyad sums") {
  const double r = 0.5;
  const int n = 5;
  const std::vector<std::vector<int>> keeps{{1}, {3}, {1, 2}, {1, 3}, {2, 4}, {1, 2, 4}, {2, 3, 4}};
  const std::array<std::array<int, 4>, 3> configs{{{0, 0, 0, 0}, {2, 0, 1, 0}, {1, 2, 0, 1}}};
  for (const auto& m : configs) {
    for (auto kind : {PhotonKind::Add, PhotonKind::Subtract}) {
      if (kind == PhotonKind::Subtract && m == std::array<int, 4>{}) continue;
      const auto s = apply_photon_config(SqueezingParams(r), PhotonConfig(kind, m), n + 3);
      const auto map = to_map(s.amplitudes());
      for (const auto& keep : keeps) {
        std::vector<int> keep0;
        for (int k : keep) keep0.push_back(k - 1);
        const auto rho = partial_trace(s, keep);
        const int cap = s.per_mode_cap()[0];
        CAPTURE(keep.size());
        CHECK(max_oracle_diff(rho, oracle::partial_trace(map, keep0, cap), cap) < 1e-10);
      }
    }
  }
}

TEST_CASE("reduced states are Hermitian, unit trace and positive") {
  const auto s = apply_photon_config(SqueezingParams(0.4), PhotonConfig(PhotonKind::Subtract, {3, 1, 2, 0}), 20);
  for (const std::vector<int>& keep : {std::vector<int>{1}, {1, 3}, {1, 2, 3}, {2, 4}}) {
    const auto rho = partial_trace(s, keep);
    CHECK(rho.hermiticity_error() < 1e-14);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto ev = rho.eigenvalues();
    CHECK(ev.front() > -1e-12);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
  }
}

TEST_CASE("complementary reductions of a pure state share their nonzero spectrum") {
  const auto s = apply_photon_config(SqueezingParams(0.4), PhotonConfig(PhotonKind::Add, {2, 0, 1, 3}), 16);
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> splits{
      {{1}, {2, 3, 4}}, {{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{2}, {1, 3, 4}}};
  for (const auto& [a, b] : splits) {
    auto ea = partial_trace(s, a).eigenvalues();
    auto eb = partial_trace(s, b).eigenvalues();
    auto big = [](std::vector<double> v) {
      std::erase_if(v, [](double x) { return x < 1e-12; });
      return v;
    };
    ea = big(ea);
    eb = big(eb);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i] == doctest::Approx(eb[i]).epsilon(1e-9));
  }
}

TEST_CASE("partial trace argument checks") {
  const auto s = build_fmsv(SqueezingParams(0.3), 4);
  CHECK_THROWS_AS(partial_trace(s, std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(s, std::vector<int>{1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(s, std::vector<int>{5}), std::invalid_argument);
}

TEST_CASE("pure density matrix has a single unit eigenvalue") {
  const auto t = build_tmsv(SqueezingParams(0.4), 10);
  const auto rho = density_from_pure(t.amplitudes);
  const auto ev = rho.eigenvalues();
  CHECK(ev.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::accumulate(ev.begin(), ev.end() - 1, 0.0)) < 1e-12);
}

TEST_CASE("partial transpose swaps the chosen mode") {
  std::vector<MatrixEntry> entries{
      {FockIndex{0, 1}, FockIndex{1, 0}, Complex{0.25, 0.0}},
      {FockIndex{1, 0}, FockIndex{0, 1}, Complex{0.25, 0.0}},
      {FockIndex{0, 1}, FockIndex{0, 1}, Complex{0.5, 0.0}},
      {FockIndex{1, 0}, FockIndex{1, 0}, Complex{0.5, 0.0}},
  };
  const auto rho = density_from_entries({1, 2}, entries);
  CHECK(rho.sectors().size() == 1);
  const auto pt = partial_transpose(rho, 2);
  CHECK(pt.element(FockIndex{0, 0}, FockIndex{1, 1}).real() == doctest::Approx(0.25));
  CHECK(pt.element(FockIndex{1, 1}, FockIndex{0, 0}).real() == doctest::Approx(0.25));
  CHECK(pt.element(FockIndex{0, 1}, FockIndex{0, 1}).real() == doctest::Approx(0.5));
  // transposing the other mode gives the full transpose of pt up to the same spectrum
  const auto e2 = partial_transpose(rho, 2).eigenvalues();
  const auto e1 = partial_transpose(rho, 1).eigenvalues();
  REQUIRE(e1.size() == e2.size());
  for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e1[i] == doctest::Approx(e2[i]));
  CHECK(e1.front() == doctest::Approx(-0.25));
  CHECK_THROWS_AS(partial_transpose(rho, 3), std::invalid_argument);
}

TEST_CASE("duplicate entries are summed") {
  std::vector<MatrixEntry> entries{
      {FockIndex{2}, FockIndex{2}, Complex{0.5, 0.0}},
      {FockIndex{2}, FockIndex{2}, Complex{0.5, 0.0}},
  };
  const auto rho = density_from_entries({1}, entries);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.dimension() == 1);
}

TEST_CASE("binomial tail recursion matches direct summation") {
  for (double x : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99})
    for (int r = 0; r <= 40; ++r) {
      CAPTURE(x); CAPTURE(r);
      const double direct = oracle::f_direct(r, x);
      const double rec = binomial_tail_series(r, x);
      if (direct == 0.0) CHECK(rec == 0.0);
      else CHECK(std::abs(rec - direct) <= 1e-12 * std::abs(direct));
    }
}

TEST_CASE("single-mode closed forms match the tensor reduction") {
  for (double r : {0.2, 0.4, 0.8}) {
    const SqueezingParams p(r);
    const int n = r > 0.6 ? 120 : 60;
    for (int m = 0; m <= 10; ++m) {
      CAPTURE(r); CAPTURE(m);
      const auto add_cf = added_single_mode_distribution(p.x(), m);
      const auto sub_cf = subtracted_single_mode_distribution(p.x(), m);
      const auto add = partial_trace(apply_photon_config(p, PhotonConfig(PhotonKind::Add, {m, 0, 0, 0}), n),
                                     std::vector<int>{1});
      CHECK(add.hermiticity_error() == 0.0);
      for (const auto& [k, w] : add_cf.weights)
        if (add.basis().offset(FockIndex{k}))
          CHECK(std::abs(add.element(FockIndex{k}, FockIndex{k}).real() - w) < 1e-12);
      if (m == 0) continue;
      const auto sub = partial_trace(
          apply_photon_config(p, PhotonConfig(PhotonKind::Subtract, {m, 0, 0, 0}), m + n), std::vector<int>{1});
      for (const auto& [k, w] : sub_cf.weights)
        if (sub.basis().offset(FockIndex{k}))
          CHECK(std::abs(sub.element(FockIndex{k}, FockIndex{k}).real() - w) < 1e-12);
    }
  }
}

TEST_CASE("single-mode distributions are normalized and shifted by m") {
  const double x = SqueezingParams(0.4).x();
  for (int m = 0; m <= 40; m += 5) {
    const auto a = added_single_mode_distribution(x, m);
    const auto s = subtracted_single_mode_distribution(x, m);
    CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.weights.begin()->first == m);
    CHECK(s.weights.begin()->first == 0);
    // same weights, occupation offset m
    for (const auto& [k, w] : s.weights) {
      auto it = a.weights.find(k + m);
      if (it != a.weights.end()) CHECK(it->second == doctest::Approx(w).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-mode distributions at x = 0 and out of range") {
  const auto a = added_single_mode_distribution(0.0, 3);
  REQUIRE(a.weights.size() == 1);
  CHECK(a.weights.at(3) == doctest::Approx(1.0));
  const auto s = subtracted_single_mode_distribution(0.0, 3);
  REQUIRE(s.weights.size() == 1);
  CHECK(s.weights.at(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(added_single_mode_distribution(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(subtracted_single_mode_distribution(-0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(added_single_mode_distribution(0.5, -1), std::invalid_argument);
}

}
