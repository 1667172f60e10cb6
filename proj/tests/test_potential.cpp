#include <doctest.h>

#include <cmath>

#include "qglt/potential.hpp"
#include "qglt/sampling.hpp"

using namespace qglt;

TEST_CASE("segments canonicalize: merge equal neighbors, drop zero tail") {
  EdgePotential p({{1.0, -1.0}, {1.0, -1.0}, {0.5, 0.0}, {0.5, 0.0}});
  REQUIRE(p.segments().size() == 1);
  CHECK(p.segments()[0].length == doctest::Approx(2.0));
  CHECK(p.segments()[0].value == doctest::Approx(-1.0));
  CHECK(p.support_length() == doctest::Approx(2.0));

  EdgePotential zero({{3.0, 0.0}});
  CHECK(zero.is_zero());
  CHECK(zero.support_length() == 0.0);
  CHECK(zero.value_at_origin() == 0.0);

  CHECK(EdgePotential({{1.0, -1.0}, {1.0, -1.0}}) == EdgePotential({{2.0, -1.0}}));
}

TEST_CASE("segment validation") {
  CHECK_THROWS_AS(EdgePotential({{0.0, -1.0}}), Error);
  CHECK_THROWS_AS(EdgePotential({{-1.0, -1.0}}), Error);
  CHECK_THROWS_AS(EdgePotential({{1.0, std::nan("")}}), Error);
  try {
    EdgePotential p({{0.0, -1.0}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }
}

TEST_CASE("value_at reads half-open cells with the left value at boundaries") {
  EdgePotential p({{1.0, -2.0}, {1.0, -3.0}});
  CHECK(p.value_at_origin() == -2.0);
  CHECK(p.value_at(0.5) == -2.0);
  CHECK(p.value_at(1.0) == -2.0);  // boundary belongs to the left segment
  CHECK(p.value_at(1.5) == -3.0);
  CHECK(p.value_at(2.0) == -3.0);
  CHECK(p.value_at(2.5) == 0.0);
}

TEST_CASE("integral and mean are exact piecewise sums") {
  EdgePotential p({{1.0, -2.0}, {2.0, 1.0}});
  CHECK(p.integral(0.0, 3.0) == doctest::Approx(-2.0 + 2.0).epsilon(1e-15));
  CHECK(p.integral(0.5, 1.5) == doctest::Approx(-1.0 + 0.5).epsilon(1e-15));
  CHECK(p.integral(2.0, 10.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.mean_over(0.0, 1.0) == doctest::Approx(-2.0));
  CHECK(p.mean_over(4.0, 5.0) == 0.0);
}

TEST_CASE("potential_norm: only negative parts count") {
  // integral of V_-^(gamma+1/2) with gamma = 3/2: len * depth^2
  EdgePotential p({{1.0, -2.0}, {1.0, 5.0}});
  CHECK(potential_norm(p, 1.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(potential_norm(p, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  LinePotential line{p, p};
  CHECK(potential_norm(line, 0.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(potential_norm(p, 0.4), Error);
}

TEST_CASE("scaling x -> lambda^2 V(lambda x) transforms norms by lambda^(2 gamma)") {
  // (1, -1) at lambda = 2 -> (0.5, -4); (2, -3) at 0.5 -> (4, -0.75)
  EdgePotential a = scale_potential(EdgePotential({{1.0, -1.0}}), 2.0);
  REQUIRE(a.segments().size() == 1);
  CHECK(a.segments()[0].length == doctest::Approx(0.5));
  CHECK(a.segments()[0].value == doctest::Approx(-4.0));

  EdgePotential b = scale_potential(EdgePotential({{2.0, -3.0}}), 0.5);
  CHECK(b.segments()[0].length == doctest::Approx(4.0));
  CHECK(b.segments()[0].value == doctest::Approx(-0.75));

  CHECK(scale_potential(b, 1.0) == b);

  auto rng = std::mt19937_64(42);
  for (int i = 0; i < 20; ++i) {
    EdgePotential p = random_profile(rng);
    std::uniform_real_distribution<double> lam(0.25, 4.0);
    std::uniform_real_distribution<double> gam(0.5, 2.5);
    const double l = lam(rng), g = gam(rng);
    const double lhs = potential_norm(scale_potential(p, l), g);
    const double rhs = std::pow(l, 2.0 * g) * potential_norm(p, g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("symmetric extension restricts back to the same profile") {
  EdgePotential p({{0.7, -1.3}, {0.4, 0.2}, {1.1, -0.5}});
  LinePotential line = symmetric_extension(p);
  CHECK(line.neg == p);
  CHECK(line.pos == p);
}

TEST_CASE("star fields: radial detection and accessors") {
  StarGraph g3{3};
  EdgePotential p({{1.0, -1.0}});
  PotentialField radial = radial_field(g3, p);
  CHECK(radial.is_radial());
  CHECK(radial.per_edge.size() == 3);
  CHECK(radial.edge(2) == p);
  CHECK(radial.min_value() == -1.0);
  CHECK(radial.max_depth() == 1.0);

  PotentialField mixed(g3, {p, p, EdgePotential({{1.0, -2.0}})});
  CHECK_FALSE(mixed.is_radial());
  CHECK(mixed.min_value() == -2.0);

  CHECK(zero_field(g3).is_radial());
  CHECK_THROWS_AS(StarGraph{0}, Error);
  CHECK_THROWS_AS(PotentialField(g3, {p, p}), Error);  // edge count mismatch
}

TEST_CASE("transplant places a translated line potential on edges") {
  // line: -1 on [-1, 0), -2 on [0, 1]
  LinePotential line{EdgePotential({{1.0, -1.0}}), EdgePotential({{1.0, -2.0}})};
  StarGraph g3{3};

  PotentialField f = transplant(line, g3, 2, 1.5);
  CHECK_FALSE(f.is_radial());
  CHECK(f.edge(0).is_zero());
  CHECK(f.edge(2).is_zero());
  const EdgePotential& e = f.edge(1);
  // expected: zero on [0, 0.5), -1 on [0.5, 1.5), -2 on [1.5, 2.5]
  CHECK(e.value_at(0.25) == 0.0);
  CHECK(e.value_at(1.0) == -1.0);
  CHECK(e.value_at(2.0) == -2.0);
  CHECK(e.support_length() == doctest::Approx(2.5));
  CHECK(e.integral(0.0, 3.0) == doctest::Approx(-3.0));

  PotentialField fr = transplant(line, g3, 1, 1.0, /*radial=*/true);
  CHECK(fr.is_radial());
  CHECK(fr.edge(0).value_at(0.5) == -1.0);

  // offset must cover the negative-side support
  CHECK_THROWS_AS(transplant(line, g3, 1, 0.5), Error);
  try {
    transplant(line, g3, 1, 0.5);
  } catch (const Error& e2) {
    CHECK(e2.code() == Errc::offset_too_small);
  }
  // single-edge transplant is radial iff N = 1
  CHECK(transplant(line, StarGraph{1}, 1, 1.0).is_radial());
}

TEST_CASE("random sampling produces well-formed profiles") {
  auto rng = std::mt19937_64(7);
  for (int i = 0; i < 50; ++i) {
    EdgePotential p = random_profile(rng);
    CHECK(p.min_value() < 0.0);  // never identically zero
    CHECK(p.min_value() >= -4.0);
    CHECK(p.support_length() <= 3 * 1.5 + 1e-12);
    for (const auto& s : p.segments()) CHECK(s.length > 0.0);
  }
  PotentialField f = random_field(rng, 4);
  CHECK(f.per_edge.size() == 4);
  PotentialField r = random_radial_field(rng, 5);
  CHECK(r.is_radial());
}
