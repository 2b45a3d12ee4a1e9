#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "glassdescent/descent.hpp"
#include "test_support.hpp"

using namespace glassdescent;
using glassdescent::testing::brute_energy;
using glassdescent::testing::negated;
using glassdescent::testing::three_spin;

namespace {

struct Trajectory {
  std::vector<std::size_t> indices;
  std::vector<double> energies; // energies[0] is the start
  double final_energy = 0.0;
  bool stable = false;
};

Trajectory trace(const Instance &inst, const Spins &start, const DescentParams &params) {
  SpinState st(inst, start);
  Rng rng(params.run_seed);
  Trajectory t;
  t.energies.push_back(st.energy());
  descend_in_place(st, params, rng, [&](std::uint64_t, std::size_t i, double e) {
    t.indices.push_back(i);
    t.energies.push_back(e);
  });
  t.final_energy = st.energy();
  t.stable = is_stable(st);
  return t;
}

DescentParams with_p(double p, std::uint64_t seed = 0) {
  DescentParams params;
  params.p_greedy = p;
  params.run_seed = seed;
  return params;
}

} // namespace

TEST_CASE("select_move on the three-spin instance", "[descent]") {
  const auto inst = three_spin();
  Rng rng(0);
  const auto st = init_state(inst, Spins{1, -1, 1});
  CHECK(select_move(st, with_p(1.0), rng) == std::optional<std::size_t>(1));
  CHECK(select_move(st, with_p(0.0), rng) == std::optional<std::size_t>(0));

  // dE = (0, 6, 2): a zero change is not an improvement.
  const auto stable = init_state(inst, Spins{1, 1, 1});
  CHECK_FALSE(select_move(stable, with_p(1.0), rng).has_value());
  CHECK_FALSE(select_move(stable, with_p(0.0), rng).has_value());
  CHECK_FALSE(select_move(stable, with_p(0.5), rng).has_value());
}

TEST_CASE("random tie-break picks uniformly among tied greedy moves", "[descent]") {
  const auto inst = three_spin();
  const auto st = init_state(inst, Spins{1, -1, 1}); // spins 1 and 2 tie at -6
  DescentParams params = with_p(1.0);
  params.tie_break = TieBreak::Random;
  Rng rng(9);
  std::array<int, 3> hits{};
  for (int k = 0; k < 2000; ++k)
    ++hits[*select_move(st, params, rng)];
  CHECK(hits[0] == 0);
  CHECK(hits[1] > 900);
  CHECK(hits[2] > 900);
}

TEST_CASE("descend on the three-spin instance", "[descent]") {
  const auto inst = three_spin();
  const auto greedy = descend(inst, Spins{1, -1, 1}, with_p(1.0));
  CHECK(greedy.flips == 1);
  CHECK(*greedy.final_spins == Spins{1, 1, 1});
  CHECK(greedy.final_energy_per_spin == Catch::Approx(-2.0 / 3.0).epsilon(1e-15));

  const auto reluctant = descend(inst, Spins{1, -1, 1}, with_p(0.0));
  CHECK(reluctant.flips == 2);
  CHECK(*reluctant.final_spins == Spins{-1, 1, 1});
  CHECK(reluctant.final_energy_per_spin == Catch::Approx(-2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("descend with zero couplings makes no flips", "[descent]") {
  const auto zero = Instance::zero(6);
  for (double p : {0.0, 0.3, 1.0}) {
    const auto rec = descend(zero, Spins{1, -1, 1, -1, -1, 1}, with_p(p, 4));
    CHECK(rec.flips == 0);
    CHECK(rec.final_energy_per_spin == 0.0);
  }
}

TEST_CASE("descend validates inputs", "[descent]") {
  CHECK_THROWS_AS(descend(three_spin(), Spins{1, 1}, with_p(1.0)), DimensionError);
  CHECK_THROWS_AS(descend(three_spin(), Spins{1, 1, 1}, with_p(1.5)), ValidationError);
}

TEST_CASE("descend is deterministic in its inputs", "[descent]") {
  const auto inst = generate_instance(60, 3);
  Rng rng(8);
  const auto s0 = random_initial(60, rng);
  const auto a = descend(inst, s0, with_p(0.3, 42));
  const auto b = descend(inst, s0, with_p(0.3, 42));
  CHECK(a.flips == b.flips);
  CHECK(a.final_spins == b.final_spins);
  CHECK(a.final_energy_per_spin == b.final_energy_per_spin);
}

TEST_CASE("random_initial statistics", "[descent][statistics]") {
  Rng rng(123);
  constexpr int draws = 100000;
  long long sum = 0;
  for (int k = 0; k < draws; ++k)
    for (auto s : random_initial(100, rng))
      sum += s;
  const double total = 100.0 * draws;
  CHECK(std::abs(sum / total) < 5.0 / std::sqrt(total));

  std::array<int, 4> freq{};
  for (int k = 0; k < draws; ++k) {
    const auto s = random_initial(2, rng);
    ++freq[(s[0] < 0 ? 1 : 0) + (s[1] < 0 ? 2 : 0)];
  }
  const double se = std::sqrt(0.25 * 0.75 / draws);
  for (int c : freq)
    CHECK(std::abs(c / double(draws) - 0.25) < 5.0 * se);

  Rng a(77), b(77);
  CHECK(random_initial(130, a) == random_initial(130, b));
  CHECK_THROWS_AS(random_initial(1, a), InvalidSizeError);
}

TEST_CASE("trajectories descend strictly and end stable", "[descent][property]") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + gen() % 80;
    const double p = std::array{0.0, 0.1, 0.5, 0.9, 1.0}[trial % 5];
    const auto inst = generate_instance(n, gen());
    Rng rng(gen());
    const auto t = trace(inst, random_initial(n, rng), with_p(p, gen()));
    for (std::size_t k = 1; k < t.energies.size(); ++k)
      REQUIRE(t.energies[k] < t.energies[k - 1]);
    REQUIRE(t.stable);
  }
}

TEST_CASE("terminal states are stable by fresh recomputation", "[descent][property]") {
  std::mt19937_64 gen(71);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + gen() % 18;
    const auto inst = generate_instance(n, gen());
    Rng rng(gen());
    const auto rec = descend(inst, random_initial(n, rng), with_p(0.5, gen()));
    const double e = brute_energy(inst, *rec.final_spins);
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(brute_energy(inst, flipped(*rec.final_spins, i)) - e >= -1e-12);
  }
}

TEST_CASE("greedy and reluctant agree when one improving move exists", "[descent][property]") {
  std::mt19937_64 gen(17);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 50; ++trial) {
    const std::size_t n = 8 + gen() % 20;
    const auto inst = generate_instance(n, gen());
    Rng rng(gen());
    const auto rec = descend(inst, random_initial(n, rng), with_p(1.0));
    auto st = init_state(inst, *rec.final_spins);
    st.apply_flip(gen() % n);
    std::size_t improving = 0;
    for (std::size_t i = 0; i < n; ++i)
      improving += st.delta_energy(i) < 0.0;
    if (improving != 1)
      continue;
    ++checked;
    Rng r1(1), r2(2), r3(3);
    const auto g = select_move(st, with_p(1.0), r1);
    REQUIRE(g.has_value());
    REQUIRE(select_move(st, with_p(0.0), r2) == g);
    REQUIRE(select_move(st, with_p(0.5), r3) == g);
  }
  CHECK(checked >= 20);
}

TEST_CASE("trajectories are invariant under positive coupling scaling", "[descent][property]") {
  std::mt19937_64 gen(45);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + gen() % 60;
    const auto inst = generate_instance(n, gen());
    const double lambda = std::array{0.25, 2.0, 7.5, 1e3}[trial % 4];
    const auto scaled = inst.scaled(lambda);
    Rng rng(gen());
    const auto s0 = random_initial(n, rng);
    const auto params = with_p(std::array{0.0, 0.1, 1.0}[trial % 3], gen());
    REQUIRE(trace(inst, s0, params).indices == trace(scaled, s0, params).indices);
  }
}

TEST_CASE("trajectories are covariant under a global spin flip", "[descent][property]") {
  std::mt19937_64 gen(46);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + gen() % 60;
    const auto inst = generate_instance(n, gen());
    Rng rng(gen());
    const auto s0 = random_initial(n, rng);
    const auto params = with_p(std::array{0.0, 0.5, 1.0}[trial % 3], gen());
    const auto a = trace(inst, s0, params);
    const auto b = trace(inst, negated(s0), params);
    REQUIRE(a.indices == b.indices);
    REQUIRE(std::abs(a.final_energy - b.final_energy) <= 1e-12 * std::abs(a.final_energy));
  }
}

TEST_CASE("greedy step drops at least as far as the reluctant step", "[descent][property]") {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + gen() % 50;
    const auto inst = generate_instance(n, gen());
    Rng rng(gen());
    const auto st = init_state(inst, random_initial(n, rng));
    Rng r(0);
    const auto g = select_move(st, with_p(1.0), r);
    const auto l = select_move(st, with_p(0.0), r);
    REQUIRE(g.has_value() == l.has_value());
    if (g)
      REQUIRE(st.delta_energy(*g) <= st.delta_energy(*l));
  }
}
