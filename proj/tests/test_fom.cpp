#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "eqrom/fom.hpp"

using namespace eqrom;

namespace {

// Smooth synthetic setup for convergence studies: wide interface on a coarse
// grid so the spatial error is negligible against the temporal one.
EqModel smooth_ac_model(const Grid2D& g) {
    ModelSpec spec = make_default_spec(ModelKind::AllenCahn);
    spec.epsilon = 0.15;
    return build_model(spec, g);
}

Field smooth_start(const Grid2D& g) {
    Field phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            phi(i, j) = 0.2 + 0.4 * std::sin(2.0 * M_PI * g.x(i)) * std::cos(2.0 * M_PI * g.y(j));
    return phi;
}

FomState integrate(const EqModel& m, Field phi0, double dt, int steps) {
    FomState cur{phi0, m.h_of(phi0), 0.0};
    FomState prev = cur;
    for (int s = 0; s < steps; ++s) {
        FomState next = fom_step_cn(cur, prev, m, dt);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

TEST_CASE("fom_init: q = h(phi), t = 0, profile bounded") {
    const Grid2D g(128, 128, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    const FomState s = fom_init(m);
    CHECK(s.t == 0.0);
    CHECK(s.phi.values.minCoeff() >= -1.0 - 1e-6);
    CHECK(s.phi.values.maxCoeff() <= 1.0 + 1e-6);
    for (int i = 0; i < g.size(); i += 997)
        CHECK(s.q.values[i] == doctest::Approx(m.h(s.phi.values[i])).epsilon(1e-14));
}

TEST_CASE("constant field stays constant under the AC step") {
    const Grid2D g(32, 32, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    Field phi(g);
    phi.values.setConstant(0.3);
    FomState cur{phi, m.h_of(phi), 0.0};
    const FomState next = fom_step_cn(cur, cur, m, 1e-3);
    const double spread = next.phi.values.maxCoeff() - next.phi.values.minCoeff();
    CHECK(spread < 1e-12);
    CHECK(next.t == doctest::Approx(1e-3));
}

TEST_CASE("uniform equilibrium of the quadratized AC flow is a fixed point") {
    // The EQ right-hand side vanishes where gamma0*phi + q*g(phi) = 0 with
    // q = h(phi), i.e. at phi = 0 and phi^2 = 1.
    const Grid2D g(32, 32, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    for (double c : {0.0, 1.0, -1.0}) {
        Field phi(g);
        phi.values.setConstant(c);
        FomState cur{phi, m.h_of(phi), 0.0};
        const FomState next = fom_step_cn(cur, cur, m, 1e-3);
        CHECK((next.phi.values.array() - c).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("energy decreases across a step on the AC benchmark") {
    const Grid2D g(64, 64, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    FomState cur = fom_init(m);
    const double e0 = eq_energy(m, cur.phi, cur.q);
    const FomState next = fom_step_cn(cur, cur, m, 1e-3);
    const double e1 = eq_energy(m, next.phi, next.q);
    CHECK(e1 <= e0 + 1e-12 * std::abs(e0));
}

TEST_CASE("CH step conserves the mean exactly") {
    const Grid2D g(64, 64, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::CahnHilliard), g);
    FomState cur = fom_init(m);
    const double mean0 = cur.phi.values.mean();
    FomState prev = cur;
    for (int s = 0; s < 5; ++s) {
        FomState next = fom_step_cn(cur, prev, m, 1e-3);
        prev = cur;
        cur = next;
    }
    CHECK(std::abs(cur.phi.values.mean() - mean0) <= 1e-12 * (1.0 + std::abs(mean0)));
}

TEST_CASE("run_fom sampling protocol") {
    const Grid2D g(32, 32, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);

    SUBCASE("column count is T / sample_interval") {
        const FomRunResult r = run_fom(m, 1e-3, 0.02, 5e-3);
        CHECK(r.snapshots.columns() == 4);
        CHECK(r.snapshots.times[0] == doctest::Approx(5e-3));
        CHECK(r.snapshots.times[3] == doctest::Approx(0.02));
        CHECK(r.log.size() == 21);  // one row per time level
    }
    SUBCASE("T = 0 records the initial column only") {
        const FomRunResult r = run_fom(m, 1e-3, 0.0, 0.1);
        CHECK(r.snapshots.columns() == 1);
        CHECK(r.snapshots.times[0] == 0.0);
        CHECK(r.log.size() == 1);
        const FomState s0 = fom_init(m);
        CHECK((r.snapshots.phi.col(0) - s0.phi.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("sample interval must divide into steps") {
        CHECK_THROWS_AS(run_fom(m, 1e-3, 1.0, 2.5e-3), ConfigError);
        CHECK_THROWS_AS(run_fom(m, 1e-3, 1.0, 0.0), ConfigError);
    }
}

TEST_CASE("energy log is monotone along an AC run") {
    const Grid2D g(64, 64, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    const FomRunResult r = run_fom(m, 1e-3, 0.05, 1e-2);
    REQUIRE(r.log.size() == 51);
    for (size_t i = 1; i < r.log.size(); ++i)
        CHECK(r.log[i].energy <= r.log[i - 1].energy + 1e-12 * std::abs(r.log[i - 1].energy));
}

TEST_CASE("CH and PFC runs conserve mass to 1e-10 relative") {
    for (ModelKind kind : {ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
        const bool pfc = kind == ModelKind::PhaseFieldCrystal;
        const Grid2D g(32, 32, pfc ? 100.0 : 1.0, pfc ? 100.0 : 1.0);
        EqModel m = build_model(make_default_spec(kind), g);
        const FomRunResult r = run_fom(m, 1e-3, 0.05, 1e-2);
        const double area = g.lx * g.ly;
        const double mean0 = r.log.front().mass / area;
        const double meanT = r.log.back().mass / area;
        CHECK(std::abs(meanT - mean0) <= 1e-10 * (1.0 + std::abs(mean0)));
    }
}

TEST_CASE("temporal order sits near two on a smooth run") {
    const Grid2D g(32, 32, 1.0, 1.0);
    EqModel m = smooth_ac_model(g);
    const Field phi0 = smooth_start(g);
    const double T = 0.064;
    const Eigen::VectorXd f1 = integrate(m, phi0, 4e-3, static_cast<int>(T / 4e-3)).phi.values;
    const Eigen::VectorXd f2 = integrate(m, phi0, 2e-3, static_cast<int>(T / 2e-3)).phi.values;
    const Eigen::VectorXd f3 = integrate(m, phi0, 1e-3, static_cast<int>(T / 1e-3)).phi.values;
    const double order = std::log2((f1 - f2).norm() / (f2 - f3).norm());
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
}

TEST_CASE("EQ drift shrinks at second order in dt") {
    const Grid2D g(32, 32, 1.0, 1.0);
    EqModel m = smooth_ac_model(g);
    const Field phi0 = smooth_start(g);
    const double T = 0.064;
    auto drift = [&](double dt) {
        const FomState s = integrate(m, phi0, dt, static_cast<int>(T / dt));
        Field diff(g, s.q.values - m.h_of(s.phi).values);
        return norm2(diff);
    };
    const double d1 = drift(4e-3);
    const double d2 = drift(2e-3);
    const double d3 = drift(1e-3);
    // Bounded by 10x the dt^2 extrapolation from the coarser level.
    CHECK(d2 <= 10.0 * (d1 / 4.0));
    CHECK(d3 <= 10.0 * (d2 / 4.0));
}

TEST_CASE("invalid steps are rejected") {
    const Grid2D g(16, 16, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    const FomState s = fom_init(m);
    CHECK_THROWS_AS(fom_step_cn(s, s, m, 0.0), ConfigError);
    EqModel skew = m;
    skew.has_skew = true;
    skew.ga_coeff = dx_coefficients(g);
    CHECK_THROWS_AS(fom_step_cn(s, s, skew, 1e-3), SolverError);
}
