#include <doctest.h>

#include <cmath>

#include "qglt/operators.hpp"
#include "qglt/sampling.hpp"
#include "qglt/spectrum.hpp"
#include "test_util.hpp"

using namespace qglt;

namespace {

// Sum of every potential contribution in the stiffness matrix (diagonal
// entries minus their kinetic parts).  With the trapezoid element scheme this
// equals the integral of V over the covered elements exactly.
double potential_entry_sum(const DiscreteOperator& op) {
  const double h = op.grid().step;
  double sum = 0.0;
  if (op.has_vertex())
    sum += op.vertex().diag - static_cast<double>(op.n_chains()) / h;
  for (const auto& chain : op.chains()) {
    for (std::size_t j = 0; j < chain.diag.size(); ++j) {
      const bool far_neumann = op.grid().far_bc == FarBc::neumann && j + 1 == chain.diag.size();
      const double kin = far_neumann ? 1.0 / h : 2.0 / h;
      sum += chain.diag[j] - kin;
    }
  }
  return sum;
}

double field_integral(const PotentialField& f, double upto) {
  double s = 0.0;
  for (const auto& e : f.per_edge) s += e.integral(0.0, upto);
  return s;
}

}  // namespace

TEST_CASE("free star: unknown counts and positive semidefinite kinetic part") {
  StarGraph g2{2};
  GridSpec neu(0.5, 4, FarBc::neumann);
  DiscreteOperator op = assemble_star(zero_field(g2), neu);
  CHECK(op.n_unknowns() == 9);  // vertex + 2 chains of 4
  CHECK(inertia(op, -0.1) == 0);
  CHECK(inertia(op, -1e-9) == 0);

  GridSpec dir(0.5, 4, FarBc::dirichlet);
  DiscreteOperator opd = assemble_star(zero_field(g2), dir);
  CHECK(opd.n_unknowns() == 7);  // far node eliminated
  CHECK(inertia(opd, -1e-9) == 0);

  // dense cross-check: every eigenvalue of the free pencil is >= 0
  for (double e : testutil::dense_eigenvalues(op)) CHECK(e >= -1e-12);
}

TEST_CASE("star blocks carry the advertised entries") {
  const double h = 0.25;
  StarGraph g3{3};
  EdgePotential well({{1.0, -2.0}});
  DiscreteOperator op = assemble_star(radial_field(g3, well), GridSpec(h, 8, FarBc::neumann));

  REQUIRE(op.has_vertex());
  CHECK(op.vertex().mass == doctest::Approx(3.0 * h / 2.0).epsilon(1e-15));
  // vertex stiffness = N/h + sum over edges of (h/2) * mean(V on first element)
  CHECK(op.vertex().diag == doctest::Approx(3.0 / h + 3.0 * (h / 2.0) * (-2.0)).epsilon(1e-14));
  REQUIRE(op.n_chains() == 3);
  for (const auto& chain : op.chains()) {
    CHECK(chain.coupling == doctest::Approx(-1.0 / h));
    CHECK(chain.off == doctest::Approx(-1.0 / h));
    REQUIRE(chain.mass.size() == 8);
    CHECK(chain.mass.front() == doctest::Approx(h));
    CHECK(chain.mass.back() == doctest::Approx(h / 2.0));  // Neumann far end
  }
}

TEST_CASE("stiffness potential entries sum to the integral of V") {
  auto rng = testutil::rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    PotentialField f = random_field(rng, 3);
    GridSpec grid = GridSpec::from_length(0.01, 8.0, FarBc::neumann);
    DiscreteOperator op = assemble_star(f, grid);
    CHECK(potential_entry_sum(op) ==
          doctest::Approx(field_integral(f, 8.0)).epsilon(1e-10));

    // Dirichlet far end only discards half of the last element's weight;
    // supports end well before it, so the identity still holds.
    GridSpec gridd = GridSpec::from_length(0.01, 8.0, FarBc::dirichlet);
    DiscreteOperator opd = assemble_star(f, gridd);
    CHECK(potential_entry_sum(opd) ==
          doctest::Approx(field_integral(f, 8.0)).epsilon(1e-10));
  }
}

TEST_CASE("N=1 star equals the Neumann half-line assembly") {
  EdgePotential p({{0.8, -1.7}, {0.3, 0.4}});
  GridSpec grid = GridSpec::from_length(0.05, 6.0);
  DiscreteOperator star = assemble_star(PotentialField(StarGraph{1}, {p}), grid);
  DiscreteOperator half = assemble_half_line(p, grid, VertexBc::neumann);

  CHECK(star.structure() == OpStructure::half_line);
  REQUIRE(star.has_vertex());
  REQUIRE(half.has_vertex());
  CHECK(star.vertex().diag == doctest::Approx(half.vertex().diag).epsilon(1e-15));
  CHECK(star.vertex().mass == doctest::Approx(half.vertex().mass).epsilon(1e-15));
  REQUIRE(star.n_chains() == 1);
  REQUIRE(half.n_chains() == 1);
  CHECK(testutil::max_abs_diff(star.chains()[0].diag, half.chains()[0].diag) == 0.0);
  CHECK(testutil::max_abs_diff(star.chains()[0].mass, half.chains()[0].mass) == 0.0);
}

TEST_CASE("half-line boundary conditions") {
  EdgePotential p({{1.0, -1.0}});
  GridSpec grid = GridSpec::from_length(0.01, 12.0);

  DiscreteOperator neu = assemble_half_line(p, grid, VertexBc::neumann);
  REQUIRE(neu.has_vertex());
  CHECK(neu.vertex().mass == doctest::Approx(grid.step / 2.0));
  CHECK(negative_spectrum(neu).count() == 1);

  DiscreteOperator dir = assemble_half_line(p, grid, VertexBc::dirichlet);
  CHECK_FALSE(dir.has_vertex());
  CHECK(dir.n_unknowns() == neu.n_unknowns() - 1);
  CHECK(negative_spectrum(dir).count() == 0);  // sqrt(1)*1 < pi/2: no bound state

  DiscreteOperator dir6 =
      assemble_half_line(EdgePotential({{1.0, -6.0}}), grid, VertexBc::dirichlet);
  CHECK(negative_spectrum(dir6).count() == 1);  // sqrt(6) in (pi/2, 3pi/2)
}

TEST_CASE("N=2 star is the line with the glued potential") {
  EdgePotential a({{0.9, -1.2}, {0.6, -0.3}});
  EdgePotential b({{1.4, -2.1}});
  GridSpec grid = GridSpec::from_length(0.01, 14.0);

  DiscreteOperator star = assemble_star(PotentialField(StarGraph{2}, {a, b}), grid);
  DiscreteOperator line = assemble_line(LinePotential{a, b}, grid);
  CHECK(star.n_unknowns() == line.n_unknowns());

  const SolverOptions opts{1e-11, 1e-11, 3};
  Spectrum ss = negative_spectrum(star, opts);
  Spectrum sl = negative_spectrum(line, opts);
  REQUIRE(ss.count() == sl.count());
  CHECK(testutil::max_abs_diff(ss.eigenvalues, sl.eigenvalues) <= 1e-12);
}

TEST_CASE("radial N=3 well of depth 1 binds exactly one state") {
  GridSpec grid = GridSpec::from_length(0.01, 30.0);
  DiscreteOperator op =
      assemble_star(radial_field(StarGraph{3}, EdgePotential({{1.0, -1.0}})), grid);
  CHECK(negative_spectrum(op).count() == 1);
}

TEST_CASE("cut-even pairs opposite edges into lines") {
  GridSpec grid = GridSpec::from_length(0.02, 10.0);
  EdgePotential p({{1.0, -3.0}});
  StarGraph g4{4};

  SUBCASE("N=2 reduces to the glued line") {
    PotentialField f(StarGraph{2}, {p, EdgePotential({{0.5, -1.0}})});
    auto cuts = assemble_cut_even(f, grid);
    REQUIRE(cuts.size() == 1);
    Spectrum a = negative_spectrum(cuts[0]);
    Spectrum b = negative_spectrum(assemble_star(f, grid));
    REQUIRE(a.count() == b.count());
    CHECK(testutil::max_abs_diff(a.eigenvalues, b.eigenvalues) <= 1e-12);
  }

  SUBCASE("zero field gives free lines") {
    auto cuts = assemble_cut_even(zero_field(g4), grid);
    REQUIRE(cuts.size() == 2);
    for (const auto& c : cuts) {
      CHECK(c.structure() == OpStructure::line);
      CHECK(negative_spectrum(c).empty());
    }
  }

  SUBCASE("single loaded edge lands on exactly one line") {
    PotentialField f(g4, {p, EdgePotential(), EdgePotential(), EdgePotential()});
    auto cuts = assemble_cut_even(f, grid);
    REQUIRE(cuts.size() == 2);
    Spectrum s0 = negative_spectrum(cuts[0]);
    Spectrum s1 = negative_spectrum(cuts[1]);
    CHECK(s0.count() + s1.count() == 1);  // one well in total
    Spectrum line = negative_spectrum(assemble_line(LinePotential{EdgePotential(), p}, grid));
    Spectrum loaded = s0.empty() ? s1 : s0;
    CHECK(testutil::max_abs_diff(loaded.eigenvalues, line.eigenvalues) <= 1e-12);
  }

  SUBCASE("odd N is rejected") {
    CHECK_THROWS_AS(assemble_cut_even(zero_field(StarGraph{3}), grid), Error);
  }
}

TEST_CASE("cut-split decouples the vertex into two stars") {
  GridSpec grid = GridSpec::from_length(0.02, 10.0);
  auto rng = testutil::rng(23);

  SUBCASE("N=3, S={1,2}: line plus Neumann half-line") {
    PotentialField f = random_field(rng, 3);
    auto parts = assemble_cut_split(f, grid, {1, 2});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].n_chains() == 2);
    CHECK(parts[1].n_chains() == 1);
    CHECK(parts[0].vertex().mass == doctest::Approx(2.0 * grid.step / 2.0));
    CHECK(parts[1].vertex().mass == doctest::Approx(grid.step / 2.0));
    // the half-line part is the Neumann assembly of edge 3
    DiscreteOperator neu = assemble_half_line(f.edge(2), grid, VertexBc::neumann);
    Spectrum a = negative_spectrum(parts[1]);
    Spectrum b = negative_spectrum(neu);
    REQUIRE(a.count() == b.count());
    CHECK(testutil::max_abs_diff(a.eigenvalues, b.eigenvalues) <= 1e-12);
  }

  SUBCASE("N=5, S={1,2,3}: Star(3) + Star(2)") {
    PotentialField f = random_field(rng, 5);
    auto parts = assemble_cut_split(f, grid, {1, 2, 3});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].structure() == OpStructure::star);
    CHECK(parts[0].n_chains() == 3);
    CHECK(parts[1].n_chains() == 2);
  }

  SUBCASE("N=2, S={1}: two Neumann half-lines, masses total 2*(h/2)") {
    PotentialField f = random_field(rng, 2);
    auto parts = assemble_cut_split(f, grid, {1});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].vertex().mass + parts[1].vertex().mass ==
          doctest::Approx(2.0 * grid.step / 2.0));
  }

  SUBCASE("trivial subsets are rejected") {
    PotentialField f = zero_field(StarGraph{3});
    CHECK_THROWS_AS(assemble_cut_split(f, grid, {}), Error);
    CHECK_THROWS_AS(assemble_cut_split(f, grid, {1, 2, 3}), Error);
    CHECK_THROWS_AS(assemble_cut_split(f, grid, {4}), Error);
  }
}

TEST_CASE("cut spectra dominate the star spectrum entrywise") {
  auto rng = testutil::rng(37);
  GridSpec grid = GridSpec::from_length(0.02, 9.0);
  for (int trial = 0; trial < 5; ++trial) {
    PotentialField f = random_field(rng, 4);
    Spectrum star = negative_spectrum(assemble_star(f, grid));
    std::vector<Spectrum> parts;
    for (const auto& op : assemble_cut_even(f, grid)) parts.push_back(negative_spectrum(op));
    Spectrum cut = merge_spectra(parts);
    REQUIRE(cut.count() >= star.count());
    for (int k = 0; k < star.count(); ++k)
      CHECK(star.eigenvalues[k] >= cut.eigenvalues[k] - 1e-9);
  }
}

TEST_CASE("support past the grid is rejected") {
  GridSpec grid = GridSpec::from_length(0.1, 2.0);
  EdgePotential big({{3.0, -1.0}});
  CHECK_THROWS_AS(assemble_half_line(big, grid, VertexBc::neumann), Error);
  CHECK_THROWS_AS(assemble_star(radial_field(StarGraph{3}, big), grid), Error);
  CHECK_THROWS_AS(assemble_line(LinePotential{big, EdgePotential()}, grid), Error);
  try {
    assemble_half_line(big, grid, VertexBc::dirichlet);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::support_exceeds_grid);
  }
}

TEST_CASE("direct sums flatten unknown counts") {
  GridSpec grid = GridSpec::from_length(0.1, 3.0);
  DiscreteOperator a = assemble_half_line(EdgePotential({{1.0, -1.0}}), grid, VertexBc::neumann);
  DiscreteOperator b = assemble_half_line(EdgePotential({{1.0, -2.0}}), grid, VertexBc::dirichlet);
  const int na = a.n_unknowns(), nb = b.n_unknowns();
  DiscreteOperator sum = DiscreteOperator::direct_sum({a, b});
  CHECK(sum.structure() == OpStructure::direct_sum);
  CHECK(sum.n_unknowns() == na + nb);
  CHECK(inertia(sum, -0.05) == inertia(a, -0.05) + inertia(b, -0.05));
}
