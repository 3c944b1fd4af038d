#include <doctest.h>

#include "entropic/space.hpp"
#include "helpers.hpp"

using namespace entropic;

TEST_CASE("torus grid basics") {
    Space s = build_torus_grid(1, 8, {1.0});
    CHECK(s.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(s.measure()[i] == 0.125);
    // wraparound: nodes at x = 0.0 and x = 0.75 sit 0.25 apart
    CHECK(s.distance()(0, 6) == 0.25);
    CHECK(s.diameter() == doctest::Approx(0.5));
}

TEST_CASE("torus Laplacian row sums vanish exactly") {
    Space s = build_torus_grid(1, 64, {1.0});
    ScalarField lap_one = s.apply_laplacian(ScalarField::Ones(64));
    CHECK(lap_one.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted graph shortest paths") {
    std::vector<Edge> edges{{0, 1, 1.0, 1.0}, {1, 2, 1.0, 2.0}};
    Space s = build_weighted_graph(3, edges, Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3));
    CHECK(s.distance()(0, 2) == 3.0);
    CHECK(s.diameter() == doctest::Approx(3.0));
}

TEST_CASE("two-node Laplacian by hand") {
    Space s = testhelp::two_node_space();
    ScalarField f(2);
    f << 0.0, 1.0;
    ScalarField lap = s.apply_laplacian(f);
    CHECK(lap[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lap[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("self-adjointness on random fields") {
    Space g = build_weighted_graph(
        5,
        {{0, 1, 0.3, 1.0}, {1, 2, 1.1, 0.5}, {2, 3, 0.7, 2.0}, {3, 4, 0.2, 1.5}, {4, 0, 0.9, 0.8}},
        Eigen::VectorXd::Constant(5, 0.2));
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        ScalarField f = testhelp::random_field(5, seed);
        ScalarField h = testhelp::random_field(5, seed + 100);
        double lhs = g.inner(h, g.apply_laplacian(f));
        double rhs = g.inner(f, g.apply_laplacian(h));
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_WITH_AS(build_torus_grid(1, 3, {1.0}), doctest::Contains("invalid-resolution"),
                         Error);
    CHECK_THROWS_WITH_AS(
        build_weighted_graph(4, {{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}},
                             Eigen::VectorXd::Constant(4, 0.25)),
        doctest::Contains("disconnected-space"), Error);
    CHECK_THROWS_WITH_AS(
        build_weighted_graph(2, {{0, 1, -1.0, 1.0}}, Eigen::Vector2d(0.5, 0.5)),
        doctest::Contains("invalid-weight"), Error);
    // measure off by more than 1% is rejected, within 1% renormalized
    CHECK_THROWS_AS(build_weighted_graph(2, {{0, 1, 1.0, 1.0}}, Eigen::Vector2d(0.6, 0.6)), Error);
    Space ok = build_weighted_graph(2, {{0, 1, 1.0, 1.0}}, Eigen::Vector2d(0.502, 0.502));
    CHECK(ok.measure().sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("validate_space flags broken parts") {
    Space good = build_torus_grid(1, 16, {1.0});
    CHECK(validate_space(good).all_pass());

    SUBCASE("negative measure entry") {
        Eigen::VectorXd m = good.measure();
        m[3] = -m[3];
        Space bad = Space::from_parts(m, good.edges(), good.distance(), Backend::torus_grid,
                                      good.grid(), good.curvature());
        SpaceDiagnostics diag = validate_space(bad);
        bool flagged = false;
        for (const auto& c : diag.checks)
            if (c.name == "measure-positivity" && !c.pass) flagged = true;
        CHECK(flagged);
    }
    SUBCASE("asymmetric distance") {
        Eigen::MatrixXd d = good.distance();
        d(0, 1) += 0.125;
        Space bad = Space::from_parts(good.measure(), good.edges(), d, Backend::torus_grid,
                                      good.grid(), good.curvature());
        SpaceDiagnostics diag = validate_space(bad);
        bool flagged = false;
        for (const auto& c : diag.checks)
            if (c.name == "distance-symmetry" && !c.pass) flagged = true;
        CHECK(flagged);
    }
}

TEST_CASE("density factory") {
    Space s = build_torus_grid(1, 8, {1.0});
    ScalarField v = ScalarField::Constant(8, 2.0);
    Density d = make_density(s, v);
    CHECK(s.integrate(d.values) == doctest::Approx(1.0).epsilon(1e-14));
    v[2] = -0.1;
    CHECK_THROWS_AS(make_density(s, v), Error);
}

TEST_CASE("node cap honored") {
    CHECK_THROWS_WITH_AS(build_torus_grid(2, 128, {1.0, 1.0}, 4096),
                         doctest::Contains("problem-too-large"), Error);
}
