#include <doctest.h>

#include "oracles.hpp"
#include "rcp/clustering.hpp"

using rcp::AssociationMatrix;
using rcp::NetworkState;
using rcp::Vec;

TEST_CASE("distortion") {
  const std::vector<Vec> single = {{1.0, 0.0}};
  CHECK(rcp::distortion({0.0, 0.0}, single[0], single, 0.7) == doctest::Approx(1.0));

  const std::vector<Vec> pair = {{1.0, 0.0}, {1.0, 1.0}};
  CHECK(rcp::distortion({0.0, 0.0}, pair[0], pair, 0.0) == doctest::Approx(1.0));
  CHECK(rcp::distortion({0.0, 0.0}, pair[0], pair, 0.5) == doctest::Approx(1.5));
}

TEST_CASE("gibbs associations: symmetry and limits") {
  NetworkState state;
  state.nodes = {{0.0, 0.0}};
  state.controllers = {{1.0, 0.0}, {-1.0, 0.0}};
  const AssociationMatrix equidistant = rcp::gibbs_associations(state, 0.37, 0.2);
  CHECK(equidistant(0, 0) == doctest::Approx(0.5));
  CHECK(equidistant(0, 1) == doctest::Approx(0.5));

  rcp::SplitMix64 rng(5);
  const NetworkState random = oracles::random_state(12, 5, 2, rng);
  const AssociationMatrix hot = rcp::gibbs_associations(random, 1e9, 0.3);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(std::fabs(hot(i, j) - 0.2) < 1e-6);
    }
  }

  CHECK_THROWS_WITH_AS(rcp::gibbs_associations(random, 0.0, 0.0),
                       "temperature must be positive", std::invalid_argument);
}

TEST_CASE("gibbs associations: hand-evaluated row") {
  NetworkState state;
  state.nodes = {{0.0, 0.0}};
  state.controllers = {{1.0, 0.0}, {2.0, 0.0}};
  const AssociationMatrix assoc = rcp::gibbs_associations(state, 1.0, 0.0);
  const double z = 1.0 + std::exp(-3.0);
  CHECK(assoc(0, 0) == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(assoc(0, 1) == doctest::Approx(std::exp(-3.0) / z).epsilon(1e-12));
  CHECK(assoc(0, 0) == doctest::Approx(0.9526).epsilon(1e-4));
}

TEST_CASE("gibbs rows sum to one across extreme temperatures") {
  rcp::SplitMix64 rng(99);
  for (double t : {1e-6, 1e-3, 1.0, 1e3, 1e9}) {
    const NetworkState state = oracles::random_state(40, 7, 3, rng);
    const AssociationMatrix assoc = rcp::gibbs_associations(state, t, 0.4);
    for (std::size_t i = 0; i < 40; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 7; ++j) {
        CHECK(assoc(i, j) >= 0.0);
        sum += assoc(i, j);
      }
      CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("hard limit recovers nearest-by-distortion assignment") {
  rcp::SplitMix64 rng(123);
  for (int rep = 0; rep < 30; ++rep) {
    const NetworkState state = oracles::random_state(25, 6, 2, rng);
    const double gamma = rng.next_uniform(0.0, 0.5);
    const AssociationMatrix assoc = rcp::gibbs_associations(state, 1e-8, gamma);
    const std::vector<double> sync = rcp::controller_sync_sums(state.controllers);
    for (std::size_t i = 0; i < 25; ++i) {
      std::size_t argmax = 0, argmin = 0;
      for (std::size_t j = 1; j < 6; ++j) {
        if (assoc(i, j) > assoc(i, argmax)) argmax = j;
        const double dj = rcp::dist_sq(state.nodes[i], state.controllers[j]) + gamma * sync[j];
        const double dbest =
            rcp::dist_sq(state.nodes[i], state.controllers[argmin]) + gamma * sync[argmin];
        if (dj < dbest) argmin = j;
      }
      CHECK(argmax == argmin);
    }
  }
}

TEST_CASE("posteriors and masses") {
  SUBCASE("uniform associations give uniform posterior and masses") {
    const std::size_t n = 8, m = 4;
    AssociationMatrix assoc{n, m, std::vector<double>(n * m, 1.0 / m)};
    const auto [post, masses] = rcp::posteriors_and_masses(assoc);
    for (double mass : masses.masses) CHECK(mass == doctest::Approx(0.25).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(post(i, j) == doctest::Approx(1.0 / n).epsilon(1e-12));
      }
    }
  }

  SUBCASE("hard assignment to one controller floors the empty clusters") {
    const std::size_t n = 5, m = 3;
    AssociationMatrix assoc{n, m, std::vector<double>(n * m, 0.0)};
    for (std::size_t i = 0; i < n; ++i) assoc(i, 0) = 1.0;
    const auto [post, masses] = rcp::posteriors_and_masses(assoc);
    CHECK(masses.masses[0] == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t j = 1; j < m; ++j) {
      CHECK(masses.masses[j] > 0.0);
      CHECK(masses.masses[j] <= rcp::kMassFloor);
    }
    double total = 0.0;
    for (double mass : masses.masses) total += mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Degenerate columns fall back to a uniform posterior.
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(post(i, 1) == doctest::Approx(1.0 / n));
      CHECK(post(i, 2) == doctest::Approx(1.0 / n));
    }
  }

  SUBCASE("Bayes identity on random stochastic matrices") {
    rcp::SplitMix64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 2 + rng.next_u64() % 30;
      const std::size_t m = 1 + rng.next_u64() % 8;
      const AssociationMatrix assoc = oracles::random_stochastic(n, m, rng);
      const auto [post, masses] = rcp::posteriors_and_masses(assoc);
      for (std::size_t j = 0; j < m; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(std::fabs(post(i, j) * masses.masses[j] - assoc(i, j) / n) < 1e-9);
          colsum += post(i, j);
        }
        CHECK(std::fabs(colsum - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("theta apply") {
  SUBCASE("identity cases") {
    const std::vector<Vec> one = {{2.0, -1.0}};
    CHECK(rcp::theta_apply(one, 3.0) == one);
    rcp::SplitMix64 rng(8);
    const std::vector<Vec> many = oracles::random_points(6, 2, rng);
    CHECK(rcp::theta_apply(many, 0.0) == many);
  }
  SUBCASE("hand evaluation") {
    const std::vector<Vec> y = {{1.0, 0.0}, {0.0, 1.0}};
    const auto r = rcp::theta_apply(y, 0.5);
    CHECK(r[0][0] == doctest::Approx(1.5));
    CHECK(r[0][1] == doctest::Approx(-0.5));
    CHECK(r[1][0] == doctest::Approx(-0.5));
    CHECK(r[1][1] == doctest::Approx(1.5));
  }
}

TEST_CASE("theta solve") {
  SUBCASE("gamma zero is the identity") {
    rcp::SplitMix64 rng(9);
    const std::vector<Vec> c = oracles::random_points(5, 2, rng);
    CHECK(rcp::theta_solve(c, 0.0) == c);
  }
  SUBCASE("hand evaluation") {
    const std::vector<Vec> c = {{0.0, 0.0}, {1.0, 0.0}};
    const auto y = rcp::theta_solve(c, 0.5);
    CHECK(y[0][0] == doctest::Approx(0.25));
    CHECK(y[1][0] == doctest::Approx(0.75));
  }
  SUBCASE("solve then apply round-trips") {
    rcp::SplitMix64 rng(10);
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t m = 1 + rng.next_u64() % 64;
      const double gamma = rng.next_uniform(0.0, 10.0);
      const std::vector<Vec> c = oracles::random_points(m, 2, rng);
      const auto y = rcp::theta_solve(c, gamma);
      const auto back = rcp::theta_apply(y, gamma);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < 2; ++k) {
          CHECK(back[j][k] == doctest::Approx(c[j][k]).epsilon(1e-10));
        }
      }
    }
  }
  SUBCASE("matches a dense direct solve") {
    rcp::SplitMix64 rng(12);
    for (int rep = 0; rep < 25; ++rep) {
      const std::size_t m = 2 + rng.next_u64() % 32;
      const double gamma = rng.next_uniform(0.0, 1.0);
      const std::vector<Vec> c = oracles::random_points(m, 3, rng);
      const auto fast = rcp::theta_solve(c, gamma);
      const auto dense = oracles::dense_theta_solve(c, gamma);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < 3; ++k) {
          CHECK(fast[j][k] == doctest::Approx(dense[j][k]).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("optimal centroids") {
  SUBCASE("single controller is the arithmetic mean") {
    NetworkState state;
    state.nodes = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    state.controllers = {{0.3, 0.3}};
    const AssociationMatrix assoc = rcp::gibbs_associations(state, 5.0, 0.0);
    const auto c = rcp::optimal_centroids(state, assoc, 0.0);
    CHECK(c[0][0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c[0][1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("hard assignments give per-cluster means") {
    NetworkState state;
    state.nodes = {{0.0, 0.0}, {2.0, 0.0}, {10.0, 0.0}, {12.0, 0.0}};
    state.controllers = {{1.0, 0.0}, {11.0, 0.0}};
    AssociationMatrix assoc{4, 2, std::vector<double>(8, 0.0)};
    assoc(0, 0) = assoc(1, 0) = 1.0;
    assoc(2, 1) = assoc(3, 1) = 1.0;
    const auto c = rcp::optimal_centroids(state, assoc, 0.0);
    CHECK(c[0][0] == doctest::Approx(1.0));
    CHECK(c[1][0] == doctest::Approx(11.0));
  }
}

TEST_CASE("free energy") {
  SUBCASE("hand evaluation with hard weights") {
    NetworkState state;
    state.nodes = {{0.0, 0.0}, {2.0, 0.0}};
    state.controllers = {{1.0, 0.0}};
    AssociationMatrix assoc{2, 1, {1.0, 1.0}};
    const auto cost = rcp::free_energy(state, assoc, 0.5, 0.3);
    CHECK(cost.delay == doctest::Approx(2.0));
    CHECK(cost.sync == doctest::Approx(0.0));
    CHECK(cost.entropy == doctest::Approx(0.0));
    CHECK(cost.free_energy == doctest::Approx(2.0));
  }
  SUBCASE("uniform single-row weights reach maximum entropy") {
    NetworkState state;
    state.nodes = {{0.0, 0.0}};
    state.controllers = {{1.0, 0.0}, {-1.0, 0.0}};
    AssociationMatrix assoc{1, 2, {0.5, 0.5}};
    const auto cost = rcp::free_energy(state, assoc, 1.0, 0.0);
    CHECK(cost.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("free energy identity and entropy bounds on random inputs") {
    rcp::SplitMix64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 2 + rng.next_u64() % 20;
      const std::size_t m = 1 + rng.next_u64() % 6;
      const NetworkState state = oracles::random_state(n, m, 2, rng);
      const AssociationMatrix assoc = oracles::random_stochastic(n, m, rng);
      const double temperature = rng.next_uniform(0.05, 4.0);
      const double gamma = rng.next_uniform(0.0, 1.0);
      const auto cost = rcp::free_energy(state, assoc, temperature, gamma);
      CHECK(cost.entropy >= 0.0);
      CHECK(cost.entropy <= static_cast<double>(n) * std::log(static_cast<double>(m)) + 1e-12);
      CHECK(std::fabs(cost.free_energy -
                      (cost.delay + gamma * cost.sync - temperature * cost.entropy)) < 1e-9);
    }
  }
  SUBCASE("gibbs weights minimize the free energy over stochastic matrices") {
    rcp::SplitMix64 rng(55);
    const NetworkState state = oracles::random_state(10, 3, 2, rng);
    const double temperature = 0.7, gamma = 0.4;
    const AssociationMatrix gibbs = rcp::gibbs_associations(state, temperature, gamma);
    const double best = rcp::free_energy(state, gibbs, temperature, gamma).free_energy;
    for (int rep = 0; rep < 1000; ++rep) {
      const AssociationMatrix sample = oracles::random_stochastic(10, 3, rng);
      const double f = rcp::free_energy(state, sample, temperature, gamma).free_energy;
      CHECK(f >= best - 1e-9);
    }
  }
  SUBCASE("centroids are first-order stationary at gamma zero") {
    rcp::SplitMix64 rng(66);
    NetworkState state = oracles::random_state(12, 3, 2, rng);
    const double temperature = 0.9;
    const AssociationMatrix assoc = rcp::gibbs_associations(state, temperature, 0.0);
    state.controllers = rcp::optimal_centroids(state, assoc, 0.0);
    const double base = rcp::free_energy(state, assoc, temperature, 0.0).free_energy;
    const double delta = 1e-5;
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (double sign : {-1.0, 1.0}) {
          NetworkState perturbed = state;
          perturbed.controllers[j][k] += sign * delta;
          const double f = rcp::free_energy(perturbed, assoc, temperature, 0.0).free_energy;
          CHECK(f >= base - 1e-8);
        }
      }
    }
  }
}
