#include <catch2/catch_amalgamated.hpp>

#include "pkt/fixtures.hpp"
#include "pkt/liealg.hpp"
#include "pkt/runner.hpp"
#include "pkt/specio.hpp"
#include "support/oracles.hpp"

using namespace pkt;

namespace {

LieAlgebraModel heisenberg3() {
  auto L = LieAlgebraModel::make(3);
  L.set_bracket(0, 1, 2, 1.0);  // [e1,e2] = e3
  return L;
}

LieAlgebraModel so3() {
  auto L = LieAlgebraModel::make(3);
  L.set_bracket(0, 1, 2, 1.0);  // [e1,e2] = e3
  L.set_bracket(1, 2, 0, 1.0);  // [e2,e3] = e1
  L.set_bracket(2, 0, 1, 1.0);  // [e3,e1] = e2
  return L;
}

LieAlgebraModel aff1() {
  auto L = LieAlgebraModel::make(2);
  L.set_bracket(0, 1, 1, 1.0);  // [e1,e2] = e2
  return L;
}

/// Brute-force triple sum a([r(b),r(c)]) + cyclic over the whole basis,
/// with r applied column-wise. Written independently of cybe_bracket.
double cybe_brute_force(const LieAlgebraModel& L, int i, int j, int k) {
  const int n = L.dim;
  const auto& r = *L.r;
  auto rmap = [&](int dual) {  // r(e_dual^*) as a vector
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) v[static_cast<std::size_t>(a)] = r[static_cast<std::size_t>(a) * n + dual];
    return v;
  };
  auto term = [&](int dual, int b, int c) {
    const auto br = L.bracket(rmap(b), rmap(c));
    return br[static_cast<std::size_t>(dual)];
  };
  return term(i, j, k) + term(j, k, i) + term(k, i, j);
}

}  // namespace

TEST_CASE("structure constant validation") {
  REQUIRE(heisenberg3().jacobi_residual() == 0.0);
  REQUIRE(so3().jacobi_residual() == 0.0);
  REQUIRE_NOTHROW(so3().validate());
  SECTION("a wrong bracket is refused") {
    // [e1,e2] = e3 together with [e1,e3] = e1 has Jacobiator -e3
    auto L = LieAlgebraModel::make(3);
    L.set_bracket(0, 1, 2, 1.0);
    L.set_bracket(0, 2, 0, 1.0);
    REQUIRE(L.jacobi_residual() > 0.5);
    REQUIRE_THROWS_AS(L.validate(), ModelError);
  }
}

TEST_CASE("classical yang-baxter residuals") {
  SECTION("abelian image solves the equation exactly") {
    auto L = heisenberg3();
    L.set_r(0, 2, 1.0);  // r = e1 ^ e3, [e1,e3] = 0
    REQUIRE(sup_norm(cybe_bracket(L)) == 0.0);
  }
  SECTION("two-dimensional algebras are trivially solutions") {
    auto L = aff1();
    L.set_r(0, 1, 1.0);
    REQUIRE(cybe_bracket(L).size() == 0);  // no 3-forms in dimension 2
    REQUIRE(sup_norm(cybe_bracket(L)) == 0.0);
  }
  SECTION("so3 with r = e1 ^ e2 is not a solution") {
    auto L = so3();
    L.set_r(0, 1, 1.0);
    const Alt<double> b = cybe_bracket(L);
    REQUIRE(sup_norm(b) > 0.5);
    REQUIRE(b.get({0, 1, 2}) == Catch::Approx(cybe_brute_force(L, 0, 1, 2)));
  }
  SECTION("matches the brute-force sum on random r over so3") {
    oracles::Rng rng(61);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      auto L = so3();
      L.set_r(0, 1, d(rng));
      L.set_r(0, 2, d(rng));
      L.set_r(1, 2, d(rng));
      const Alt<double> b = cybe_bracket(L);
      REQUIRE(b.get({0, 1, 2}) == Catch::Approx(cybe_brute_force(L, 0, 1, 2)).margin(1e-12));
    }
  }
}

TEST_CASE("unimodularity of the image subalgebra") {
  SECTION("abelian image is unimodular with exact zero traces") {
    auto L = heisenberg3();
    L.set_r(0, 2, 1.0);
    const auto rep = unimodularity_check(L, 1e-10);
    REQUIRE(rep.unimodular);
    REQUIRE(rep.basis.size() == 2);
    for (double t : rep.traces) REQUIRE(t == 0.0);
  }
  SECTION("the affine algebra is not, with trace exactly one") {
    auto L = aff1();
    L.set_r(0, 1, 1.0);
    const auto rep = unimodularity_check(L, 1e-10);
    REQUIRE_FALSE(rep.unimodular);
    REQUIRE(rep.closed);
    double worst = 0.0;
    for (double t : rep.traces) worst = std::max(worst, std::abs(t));
    REQUIRE(worst == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("zero r is vacuously unimodular") {
    auto L = so3();
    L.r.emplace(9, 0.0);
    REQUIRE(unimodularity_check(L, 1e-10).unimodular);
  }
}

TEST_CASE("action homomorphism residual") {
  auto chart = ChartModel::euclidean({"x", "y", "z"});
  const SampleGrid grid = SampleGrid::cube(3, -1.0, 1.0, 3);
  SECTION("translations represent the abelian plane") {
    auto L = LieAlgebraModel::make(2);
    L.action.push_back({parse_expression("1", chart.coords), parse_expression("0", chart.coords),
                        parse_expression("0", chart.coords)});
    L.action.push_back({parse_expression("0", chart.coords), parse_expression("1", chart.coords),
                        parse_expression("0", chart.coords)});
    REQUIRE(action_homomorphism_check(L, chart, grid, 1e-12).pass);
  }
  SECTION("the heisenberg action closes") {
    auto L = heisenberg3();
    for (auto comps : {std::vector<std::string>{"1", "0", "0"}, {"0", "1", "x"}, {"0", "0", "1"}}) {
      std::vector<ScalarExpr> f;
      for (auto& s : comps) f.push_back(parse_expression(s, chart.coords));
      L.action.push_back(std::move(f));
    }
    REQUIRE(action_homomorphism_check(L, chart, grid, 1e-12).pass);
    SECTION("a sign flip is caught") {
      L.action[1][2] = parse_expression("-x", chart.coords);
      const CheckReport r = action_homomorphism_check(L, chart, grid, 1e-8);
      REQUIRE_FALSE(r.pass);
      REQUIRE(r.max_residual == Catch::Approx(2.0));
    }
  }
}

TEST_CASE("induced bivector from an action") {
  SECTION("translations and the standard area element") {
    auto chart = ChartModel::euclidean({"x", "y"});
    auto L = LieAlgebraModel::make(2);
    L.set_r(0, 1, 1.0);
    L.action.push_back({parse_expression("1", chart.coords), parse_expression("0", chart.coords)});
    L.action.push_back({parse_expression("0", chart.coords), parse_expression("1", chart.coords)});
    const ChartModel out = induced_bivector(L, chart);
    PointFrame fr(out, {0.3, 0.4});
    REQUIRE(fr.bivector_values()[1] == 1.0);
  }
  SECTION("the heisenberg pipeline gives the constant tensor in x and z") {
    auto spec = parse_lie_spec(nlohmann::json::parse(lie_fixtures().at("heisenberg-lie")));
    const ChartModel out = induced_bivector(spec.algebra, spec.chart_spec.model);
    PointFrame fr(out, {0.7, -0.2, 1.1});
    const auto& pi = fr.bivector_values();
    REQUIRE(pi[0 * 3 + 2] == 1.0);   // pi^{13} = 1
    REQUIRE(pi[0 * 3 + 1] == 0.0);
    REQUIRE(pi[1 * 3 + 2] == 0.0);
  }
  SECTION("zero r induces the zero tensor") {
    auto chart = ChartModel::euclidean({"x", "y"});
    auto L = LieAlgebraModel::make(2);
    L.r.emplace(4, 0.0);
    L.action.push_back({parse_expression("1", chart.coords), parse_expression("0", chart.coords)});
    L.action.push_back({parse_expression("0", chart.coords), parse_expression("1", chart.coords)});
    const ChartModel out = induced_bivector(L, chart);
    PointFrame fr(out, {0.3, 0.4});
    REQUIRE(norm_sup(fr.bivector_values()) == 0.0);
  }
}

TEST_CASE("linear tensors on the dual") {
  SECTION("so3 yields the cross-product tensor") {
    const ChartModel m = lie_poisson(so3());
    PointFrame fr(m, {0.5, -0.7, 1.3});
    const auto& pi = fr.bivector_values();
    REQUIRE(pi[0 * 3 + 1] == Catch::Approx(1.3));    // pi^{12} = z
    REQUIRE(pi[0 * 3 + 2] == Catch::Approx(0.7));    // pi^{13} = -y
    REQUIRE(pi[1 * 3 + 2] == Catch::Approx(0.5));    // pi^{23} = x
  }
  SECTION("abelian algebras give the zero tensor") {
    const ChartModel m = lie_poisson(LieAlgebraModel::make(3));
    PointFrame fr(m, {1.0, 2.0, 3.0});
    REQUIRE(norm_sup(fr.bivector_values()) == 0.0);
  }
  SECTION("the heisenberg dual and the jacobi property of linear tensors") {
    const ChartModel m = lie_poisson(heisenberg3());
    PointFrame fr(m, {0.4, 0.8, -1.6});
    REQUIRE(fr.bivector_values()[0 * 3 + 1] == Catch::Approx(-1.6));  // pi^{12} = z
    REQUIRE(fr.bivector_values()[0 * 3 + 2] == 0.0);
    for (const auto& L : {so3(), heisenberg3()}) {
      const ChartModel lp = lie_poisson(L);
      const CheckReport r = check_jacobi(lp, SampleGrid::cube(3, -2.0, 2.0, 3), 1e-10);
      REQUIRE(r.pass);
    }
  }
}

TEST_CASE("end-to-end action pipeline on the heisenberg fixture") {
  auto spec = parse_lie_spec(nlohmann::json::parse(lie_fixtures().at("heisenberg-lie")));
  const auto& L = spec.algebra;
  REQUIRE(L.jacobi_residual() == 0.0);
  REQUIRE(sup_norm(cybe_bracket(L)) == 0.0);
  const auto uni = unimodularity_check(L, 1e-12);
  REQUIRE(uni.unimodular);
  REQUIRE(action_homomorphism_check(L, spec.chart_spec.model, spec.chart_spec.grid, 1e-12).pass);
  // every generator is a Killing field of the right-invariant metric
  ChartModel with_fields = spec.chart_spec.model;
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> comps;
    for (const auto& e : L.action[static_cast<std::size_t>(i)]) comps.push_back(e.to_string());
    with_fields.add_vector("G" + std::to_string(i), comps);
    REQUIRE(check_killing_vector(with_fields, spec.chart_spec.grid, 1e-10, "G" + std::to_string(i)).pass);
  }
  // the induced tensor is a left-invariant tensor paired with the
  // right-invariant metric; it passes the full composite verdict
  const ChartModel induced = induced_bivector(L, spec.chart_spec.model);
  REQUIRE(check_killing_poisson(induced, spec.chart_spec.grid, 1e-8).pass);
}
