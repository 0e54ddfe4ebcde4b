#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "metldpc/growth.hpp"
#include "metldpc/smallweight.hpp"
#include "support/corpus.hpp"

using namespace metldpc;

TEST_CASE("second-derivative matrices of the five-type ensemble", "[smallweight]") {
  EnsembleSpec spec = parse_spec(corpus::kFig1);
  SmallWeightMatrices m = build_matrices(spec, {1, 1});
  // only 0.5 r1 x1^2 has total degree 2
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      REQUIRE(m.lambda_mat.at(i, j) == ((i == 0 && j == 0) ? Rat(1) : Rat(0)));
  REQUIRE(m.p_mat.at(0, 0) == 1);
  REQUIRE(m.p_mat.at(0, 1) == Rat(9, 5));
  REQUIRE(m.p_mat.at(1, 0) == 2);
  REQUIRE(m.p_mat.at(3, 4) == 1);

  // channel weight scales only the transmitted degree-2 row
  SmallWeightMatrices scaled = build_matrices(spec, {1, Rat(1, 3)});
  REQUIRE(scaled.lambda_mat.at(0, 0) == Rat(1, 3));
}

TEST_CASE("degree-3 variables contribute nothing at x = 0", "[smallweight]") {
  SmallWeightMatrices m = build_matrices(from_standard({{3, Rat(1)}}, {{6, Rat(1)}}));
  REQUIRE(m.lambda_mat.at(0, 0) == 0);
}

TEST_CASE("spectral radius basics", "[smallweight]") {
  REQUIRE(spectral_radius({{1, 0}, {0, 1}}) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(spectral_radius({{0, 0}, {0, 0}}) == 0.0);
  // periodic irreducible matrix converges through the shift
  REQUIRE(spectral_radius({{0, 1}, {1, 0}}) == Catch::Approx(1.0).margin(1e-10));
  // reducible upper-triangular: max over the diagonal blocks
  REQUIRE(spectral_radius({{0.5, 1}, {0, 0.8}}) == Catch::Approx(0.8).margin(1e-12));
  REQUIRE_THROWS_AS(spectral_radius({{-1.0}}), std::invalid_argument);

  // eigen residual of the winning block
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> m(3, std::vector<double>(3));
    for (auto& row : m)
      for (auto& v : row) v = u(rng);
    SpectralRadiusResult r = spectral_radius_full(m);
    REQUIRE(r.vec_residual <= 1e-10);
  }
}

TEST_CASE("five-type ensemble product radius is 1", "[smallweight]") {
  EnsembleSpec spec = parse_spec(corpus::kFig1);
  SmallWeightMatrices m = build_matrices(spec, {1, 1});
  REQUIRE(spectral_radius(m.product().to_double()) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("report: irregular radius 3/2, exact before the eigen step", "[smallweight]") {
  EnsembleSpec spec = from_standard({{2, Rat(1, 2)}, {3, Rat(1, 2)}}, {{4, Rat(1)}});
  SmallWeightMatrices m = build_matrices(spec);
  REQUIRE(m.lambda_mat.at(0, 0) == Rat(1, 2));  // lambda'(0)
  REQUIRE(m.p_mat.at(0, 0) == 3);               // rho'(1)
  REQUIRE(m.product().at(0, 0) == Rat(3, 2));   // exact 1x1 product

  SmallWeightReport rep = small_weight_report(spec);
  REQUIRE(rep.spectral_radius == Catch::Approx(1.5).margin(1e-12));
  REQUIRE(rep.slope == Catch::Approx(std::log(1.5)).margin(1e-12));
  REQUIRE_FALSE(rep.exponentially_few);
}

TEST_CASE("report: (3,6) has radius zero and minus-infinity slope", "[smallweight]") {
  SmallWeightReport rep = small_weight_report(parse_spec(corpus::kReg36));
  REQUIRE(rep.spectral_radius == 0.0);
  REQUIRE(std::isinf(rep.slope));
  REQUIRE(rep.slope < 0);
  REQUIRE(rep.exponentially_few);
}

TEST_CASE("report rejects punctured ensembles", "[smallweight]") {
  REQUIRE_THROWS_WITH(small_weight_report(parse_spec(corpus::kFig1)),
                      Catch::Matchers::ContainsSubstring("punctured"));
}

TEST_CASE("report rejects edge-types without a degree-2 check", "[smallweight]") {
  EnsembleSpec spec = parse_spec("edge_types 2\nvar 1 b 0 1 d 1 1\nchk 1/2 d 2 0\nchk 1 d 0 1\n");
  REQUIRE_THROWS_WITH(small_weight_report(spec),
                      Catch::Matchers::ContainsSubstring("at least 2 edges"));
}

TEST_CASE("radius grows monotonically with the channel weight", "[smallweight]") {
  std::vector<EnsembleSpec> specs = {
      parse_spec(corpus::kIrregularR15), parse_spec(corpus::kRadiusOne),
      parse_spec(corpus::kFig1),
      from_standard({{2, Rat(1, 3)}, {4, Rat(2, 3)}}, {{5, Rat(1, 2)}, {6, Rat(1, 2)}})};
  for (const auto& spec : specs) {
    double prev = -1.0;
    for (int step = 0; step <= 10; ++step) {
      SmallWeightMatrices m = build_matrices(spec, {1, Rat(step, 10)});
      const double r = spectral_radius(m.product().to_double());
      REQUIRE(r >= prev - 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("radius-one tuning", "[smallweight]") {
  SmallWeightReport rep = small_weight_report(parse_spec(corpus::kRadiusOne));
  REQUIRE(rep.matrices.product().at(0, 0) == Rat(1));
  REQUIRE(rep.spectral_radius == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("slope crosscheck tracks the growth rate at small weight", "[smallweight]") {
  // radius 3/2: gamma/omega approaches ln 1.5 with monotonically shrinking gap
  auto rows = slope_crosscheck(parse_spec(corpus::kIrregularR15), {1e-2, 1e-3, 1e-4});
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    REQUIRE(r.log_radius == Catch::Approx(std::log(1.5)).margin(1e-12));
    const double gap = std::abs(r.gamma_over_omega - r.log_radius);
    REQUIRE(gap < prev_gap);
    prev_gap = gap;
  }

  // radius exactly 1: the ratio heads to zero
  auto one = slope_crosscheck(parse_spec(corpus::kRadiusOne), {1e-2, 1e-3, 1e-4});
  REQUIRE(one.back().log_radius == 0.0);
  REQUIRE(std::abs(one.back().gamma_over_omega) < 1e-3);
  REQUIRE(std::abs(one.back().gamma_over_omega) < std::abs(one.front().gamma_over_omega));

  // radius 0: ratio decreases without bound as omega halves
  auto zero = slope_crosscheck(parse_spec(corpus::kReg36), {4e-3, 2e-3, 1e-3});
  REQUIRE(std::isinf(zero[0].log_radius));
  REQUIRE(zero[1].gamma_over_omega < zero[0].gamma_over_omega);
  REQUIRE(zero[2].gamma_over_omega < zero[1].gamma_over_omega);

  // assumption violations propagate
  REQUIRE_THROWS_AS(slope_crosscheck(parse_spec(corpus::kFig1), {1e-2}), std::invalid_argument);
}
