#include <catch2/catch_amalgamated.hpp>

#include "pkt/contraconn.hpp"
#include "support/oracles.hpp"

using namespace pkt;

namespace {

ChartModel so3_chart(bool with_sqrt) {
  auto m = ChartModel::euclidean({"x", "y", "z"});
  const std::string s = with_sqrt ? "*sqrt(x^2+y^2+z^2)" : "";
  m.set_pi(0, 1, "z" + s);
  m.set_pi(0, 2, "-y" + s);
  m.set_pi(1, 2, "x" + s);
  return m;
}

std::vector<Jet2> oneform_jets(const ChartModel& m, const PointFrame& fr, const std::vector<std::string>& comps) {
  std::vector<Jet2> out;
  for (const auto& s : comps) out.push_back(parse_expression(s, m.coords).eval_jet2(fr.point()));
  return out;
}

}  // namespace

TEST_CASE("koszul bracket on hand examples") {
  SECTION("constant tensor, coordinate forms commute") {
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "1");
    PointFrame fr(m, {0.4, 0.9});
    const auto k = koszul_bracket<Jet1>(fr, coordinate_covector<Jet1>(0, 2), coordinate_covector<Jet1>(1, 2));
    REQUIRE(norm_sup(k) == 0.0);
  }
  SECTION("linear tensor pairs dx with dy into dx") {
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "x");
    PointFrame fr(m, {1.7, -0.6});
    const auto k = koszul_bracket<Jet1>(fr, coordinate_covector<Jet1>(0, 2), coordinate_covector<Jet1>(1, 2));
    REQUIRE(k[0] == Catch::Approx(1.0));
    REQUIRE(k[1] == Catch::Approx(0.0));
  }
  SECTION("exact forms bracket into the differential of the bracket") {
    // [df, dh]_pi = d{f,h} with f = x, h = x*y on the symplectic plane
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "1");
    PointFrame fr(m, {0.8, -1.2});
    const Jet2 f = parse_expression("x", *m.coords).eval_jet2(fr.point());
    const Jet2 h = parse_expression("x*y", *m.coords).eval_jet2(fr.point());
    const auto k = koszul_bracket<Jet1>(fr, differential(f), differential(h));
    // {x, xy} = x, so d{f,h} = dx
    REQUIRE(k[0] == Catch::Approx(1.0));
    REQUIRE(k[1] == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("metric connection on the constant case vanishes") {
  auto m = ChartModel::euclidean({"x", "y"});
  m.set_pi(0, 1, "1");
  PointFrame fr(m, {0.0, 0.0});
  const auto d = metric_D<Jet1>(fr, coordinate_covector<Jet1>(0, 2), coordinate_covector<Jet1>(1, 2));
  REQUIRE(norm_sup(d) == 0.0);
}

TEST_CASE("torsion and metric compatibility define the connection") {
  oracles::Rng rng(41);
  const std::vector<ChartModel> fixtures = {
      so3_chart(false), so3_chart(true), oracles::random_chart(rng, 2), oracles::random_chart(rng, 3),
      oracles::random_poisson_chart3(rng, true)};
  for (const auto& m : fixtures) {
    for (int trial = 0; trial < 20; ++trial) {
      auto p = oracles::random_point(rng, m.dim);
      if (m.dim == 3 && norm_sup(p) < 0.3) p[0] += 0.5;
      PointFrame fr(m, p);
      REQUIRE(torsion_residual(fr) <= 1e-9);
      REQUIRE(metric_compat_residual(fr) <= 1e-9);
    }
  }
}

TEST_CASE("curvature") {
  SECTION("flat for the constant symplectic plane") {
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "1");
    PointFrame fr(m, {0.5, 0.5});
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const auto K = curvature(fr, coordinate_covector<Jet2>(a, 2), coordinate_covector<Jet2>(b, 2),
                                   coordinate_covector<Jet2>(c, 2));
          REQUIRE(norm_sup(K) <= 1e-14);
        }
  }
  SECTION("zero bivector gives the zero connection") {
    auto m = ChartModel::euclidean({"x", "y", "z"});
    m.set_metric(0, 0, "1+0.3*y^2");  // curvature of g is irrelevant, D ignores it
    PointFrame fr(m, {0.2, 0.4, 0.6});
    const auto K = curvature(fr, coordinate_covector<Jet2>(0, 3), coordinate_covector<Jet2>(1, 3),
                             coordinate_covector<Jet2>(2, 3));
    REQUIRE(norm_sup(K) == 0.0);
  }
  SECTION("antisymmetric in the first two slots") {
    oracles::Rng rng(42);
    auto m = oracles::random_chart(rng, 3);
    PointFrame fr(m, oracles::random_point(rng, 3));
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = oneform_jets(m, fr, {oracles::random_poly(rng, *m.coords, 1.0), "1", "y"});
      const auto b = oneform_jets(m, fr, {"0", oracles::random_poly(rng, *m.coords, 1.0), "x*z"});
      const auto c = oneform_jets(m, fr, {"x", "0", oracles::random_poly(rng, *m.coords, 1.0)});
      const auto Kab = curvature(fr, a, b, c);
      const auto Kba = curvature(fr, b, a, c);
      for (int i = 0; i < 3; ++i)
        REQUIRE(Kab[static_cast<std::size_t>(i)] == Catch::Approx(-Kba[static_cast<std::size_t>(i)]).margin(1e-12));
    }
  }
}

TEST_CASE("parallelism of pi under D") {
  SECTION("constant symplectic structure is parallel") {
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "1");
    PointFrame fr(m, {1.0, 1.0});
    REQUIRE(D_pi_residual(fr) == 0.0);
  }
  SECTION("the radial multiple of the cross-product tensor is parallel") {
    auto m = so3_chart(true);
    PointFrame fr(m, {1.0, 1.0, 1.0});
    REQUIRE(D_pi_residual(fr) <= 1e-9);
  }
  SECTION("the bare cross-product tensor is not") {
    auto m = so3_chart(false);
    PointFrame fr(m, {1.0, 0.0, 0.0});
    REQUIRE(D_pi_residual(fr) > 0.1);
  }
}

TEST_CASE("kernel covectors and the foliated-connection residual") {
  SECTION("symplectic tensors have trivial kernel") {
    auto m = ChartModel::euclidean({"x", "y"});
    m.set_pi(0, 1, "x");
    PointFrame fr(m, {1.0, 0.3});
    const RankInfo info = pi_rank(fr, 1e-8);
    REQUIRE(info.rank == 2);
    REQUIRE(info.kernel.empty());
    REQUIRE(f_connection_residual(fr) == 0.0);
  }
  SECTION("the radial direction spans the kernel for the cross-product tensor") {
    auto m = so3_chart(true);
    PointFrame fr(m, {1.0, 1.0, 1.0});
    const RankInfo info = pi_rank(fr, 1e-8);
    REQUIRE(info.rank == 2);
    REQUIRE(info.kernel.size() == 1);
    const auto& k = info.kernel[0];
    const double along = std::abs(k[0] + k[1] + k[2]) / std::sqrt(3.0);
    REQUIRE(along == Catch::Approx(1.0).margin(1e-12));  // unit radial direction
    REQUIRE(f_connection_residual(fr) <= 1e-8);
  }
  SECTION("the bare cross-product tensor fails") {
    auto m = so3_chart(false);
    PointFrame fr(m, {1.0, 1.0, 1.0});
    REQUIRE(f_connection_residual(fr) > 0.1);
  }
  SECTION("kernel images stay in the kernel along casimir differentials") {
    // D_b(df) vanishes for a casimir f wherever the connection is
    // foliated, hence pi_#(D_b df) = 0 as well
    auto m = so3_chart(true);
    m.add_scalar("f", "x^2+y^2+z^2");
    oracles::Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
      auto p = oracles::random_point(rng, 3);
      if (norm_sup(p) < 0.4) p[2] += 1.0;
      PointFrame fr(m, p);
      const Jet2 f = fr.scalar_jet("f");
      const auto df2 = [&] {
        std::vector<Jet2> out;
        for (int k = 0; k < 3; ++k) {
          // df as a 1-form field: components are the partials of f, with
          // their own first derivatives taken from the hessian
          Jet2 comp(3);
          comp.v = f.g[static_cast<std::size_t>(k)];
          for (int i = 0; i < 3; ++i) comp.g[static_cast<std::size_t>(i)] = f.hess(k, i);
          out.push_back(comp);
        }
        return out;
      }();
      for (int b = 0; b < 3; ++b) {
        const auto Dbdf = metric_D<Jet2>(fr, coordinate_covector<Jet2>(b, 3), df2);
        std::vector<double> vals;
        for (const auto& c : Dbdf) vals.push_back(c.v);
        REQUIRE(norm_cov(fr, vals) <= 1e-7);
        const auto img = anchor<double>(3, fr.bivector_values(), vals);
        REQUIRE(norm_sup(img) <= 1e-7);
      }
    }
  }
  SECTION("kernel-orthogonal fields stay orthogonal") {
    // a = flat(pi_#(dx^m)) is orthogonal to the kernel everywhere; D_b a
    // must stay orthogonal at foliated points
    auto m = so3_chart(true);
    oracles::Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
      auto p = oracles::random_point(rng, 3);
      if (norm_sup(p) < 0.4) p[0] -= 1.0;
      PointFrame fr(m, p);
      const RankInfo info = pi_rank(fr, 1e-8);
      REQUIRE(info.kernel.size() == 1);
      for (int mm = 0; mm < 3; ++mm) {
        const auto a2 = [&] {
          // assemble flat(anchor(dx^m)) with order-2 jets
          const auto X = anchor<Jet2>(3, fr.bivector<Jet2>(), coordinate_covector<Jet2>(mm, 3));
          return lower<Jet2>(3, fr.metric<Jet2>(), X);
        }();
        for (int b = 0; b < 3; ++b) {
          const auto Dba = metric_D<Jet2>(fr, coordinate_covector<Jet2>(b, 3), a2);
          std::vector<double> vals;
          for (const auto& c : Dba) vals.push_back(c.v);
          const double ortho = std::abs(copair<double>(3, fr.metric_inv_values(), vals, info.kernel[0]));
          REQUIRE(ortho <= 1e-7);
        }
      }
    }
  }
}

TEST_CASE("rank ambiguity is reported, not guessed") {
  auto m2 = ChartModel::euclidean({"x", "y", "z", "w"});
  m2.set_pi(0, 1, "1");
  m2.set_pi(2, 3, "x");
  // sigma = {1, 1, 5e-8, 5e-8}: the small pair sits inside the ambiguity
  // band (1e-8, 1e-7) relative to sigma_max = 1
  PointFrame fr2(m2, {5e-8, 0.2, 0.3, 0.4});
  REQUIRE_THROWS_AS(f_connection_residual(fr2, 1e-8), NumericError);
  // a clean split is fine
  PointFrame fr3(m2, {0.5, 0.2, 0.3, 0.4});
  REQUIRE_NOTHROW(f_connection_residual(fr3, 1e-8));
}

TEST_CASE("the pairing formula collapses for the zero bivector") {
  auto m = ChartModel::euclidean({"x", "y"});
  PointFrame fr(m, {0.7, -0.2});
  std::vector<Jet2> a = {parse_expression("x*y", m.coords).eval_jet2(fr.point()),
                         parse_expression("sin(x)", m.coords).eval_jet2(fr.point())};
  REQUIRE(formula1_residual(fr, a, {1.0, 0.0}, {0.0, 1.0}) == 0.0);
}

TEST_CASE("the lie derivative along raised forms matches the connection pairing") {
  oracles::Rng rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    const bool planar = trial % 2 == 0;
    auto m = planar ? oracles::random_chart(rng, 2) : oracles::random_poisson_chart3(rng, true);
    PointFrame fr(m, oracles::random_point(rng, m.dim));
    std::vector<std::string> comps;
    for (int i = 0; i < m.dim; ++i) comps.push_back(oracles::random_poly(rng, *m.coords, 1.0));
    std::vector<Jet2> a;
    for (const auto& s : comps) a.push_back(parse_expression(s, m.coords).eval_jet2(fr.point()));
    for (int b = 0; b < m.dim; ++b)
      for (int c = 0; c < m.dim; ++c) {
        std::vector<double> eb(static_cast<std::size_t>(m.dim), 0.0), ec(static_cast<std::size_t>(m.dim), 0.0);
        eb[static_cast<std::size_t>(b)] = 1.0;
        ec[static_cast<std::size_t>(c)] = 1.0;
        REQUIRE(formula1_residual(fr, a, eb, ec) <= 1e-8);
      }
  }
}

TEST_CASE("casimir differentials are flat directions of D") {
  // for a casimir f: pi_#(df) = 0, D(df) = 0 and L_{grad f} pi = 0; the
  // last equality is also recovered through the connection pairing
  auto m = so3_chart(true);
  m.add_scalar("f", "x^2+y^2+z^2");
  PointFrame fr(m, {0.9, -0.7, 1.4});
  const Jet2 f = fr.scalar_jet("f");
  REQUIRE(norm_sup(values_of(hamiltonian_field<Jet2>(fr, f))) <= 1e-13);
  const Vecc<Jet1> grad = raise<Jet1>(3, fr.metric_inv<Jet1>(), differential(f));
  REQUIRE(norm_sup(lie_derivative_bivector<Jet1>(fr, grad)) <= 1e-12);
}
