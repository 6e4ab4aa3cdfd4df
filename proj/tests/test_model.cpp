#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "eqrom/model.hpp"

using namespace eqrom;

namespace {

Field random_field(const Grid2D& g, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Field f(g);
    for (int i = 0; i < g.size(); ++i) f.values[i] = dist(rng);
    return f;
}

// Original (unquadratized) discrete free energy, used as the independent
// oracle for the EQ consistency check.
double original_energy(const EqModel& m, const Field& phi) {
    const Field lap = apply_multiplier(laplacian_symbol(m.grid), phi);
    const double w = m.grid.cell_weight();
    switch (m.spec.kind) {
        case ModelKind::AllenCahn:
        case ModelKind::CahnHilliard: {
            const double grad2 = -inner_product(phi, lap);
            const double bulk = w * (phi.values.array().square() - 1.0).square().sum() / 4.0;
            return 0.5 * m.spec.epsilon * m.spec.epsilon * grad2 + bulk;
        }
        case ModelKind::PhaseFieldCrystal: {
            // 1/2 phi (-b0 + (a0 + Delta)^2) phi + 1/4 phi^4
            const Eigen::VectorXd lam = laplacian_eigenvalues(m.grid);
            FourierMultiplier op(m.grid, (m.spec.a0 - lam.array()).square().matrix());
            const Field opphi = apply_multiplier(op, phi);
            const double quad =
                0.5 * (inner_product(phi, opphi) - m.spec.b0 * inner_product(phi, phi));
            const double quart = w * phi.values.array().pow(4).sum() / 4.0;
            return quad + quart;
        }
    }
    return 0.0;
}

double eq_constant(const EqModel& m) {
    const double area = m.grid.lx * m.grid.ly;
    const double g0 = m.spec.gamma0;
    if (m.spec.kind == ModelKind::PhaseFieldCrystal) {
        const double c = m.spec.b0 + g0;
        // expansion of 1/4 (phi^2 - b0 - gamma0)^2 against 1/4 phi^4 - (b0/2) phi^2
        return area * c * c / 4.0;
    }
    return area * (g0 / 2.0 + g0 * g0 / 4.0);
}

}  // namespace

TEST_CASE("spec validation") {
    ModelSpec s = make_default_spec(ModelKind::AllenCahn);
    CHECK_NOTHROW(s.validate());
    s.mobility = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = make_default_spec(ModelKind::CahnHilliard);
    s.gamma0 = -1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = make_default_spec(ModelKind::AllenCahn);
    s.epsilon = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("auxiliary maps h and g") {
    const Grid2D g(16, 16, 1.0, 1.0);
    SUBCASE("AC with gamma0 = 1: h(1) = -sqrt(2)/2") {
        EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
        CHECK(m.h(1.0) == doctest::Approx(-M_SQRT2 / 2.0).epsilon(1e-14));
        CHECK(m.g(0.0) == 0.0);
    }
    SUBCASE("PFC with b0 = 0.325, gamma0 = 1: h(0) = -sqrt(2)/2 * 1.325") {
        EqModel m = build_model(make_default_spec(ModelKind::PhaseFieldCrystal), g);
        CHECK(m.h(0.0) == doctest::Approx(M_SQRT1_2 * (-1.325)).epsilon(1e-14));
        CHECK(m.g(0.0) == 0.0);
    }
    SUBCASE("CH g vanishes at zero") {
        EqModel m = build_model(make_default_spec(ModelKind::CahnHilliard), g);
        CHECK(m.g(0.0) == 0.0);
    }
}

TEST_CASE("g is the derivative of h (centered differences, second order)") {
    const Grid2D grid(16, 16, 1.0, 1.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (ModelKind kind :
         {ModelKind::AllenCahn, ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
        EqModel m = build_model(make_default_spec(kind), grid);
        for (int trial = 0; trial < 100; ++trial) {
            const double phi0 = dist(rng);
            for (double delta : {1e-3, 1e-4}) {
                const double fd = (m.h(phi0 + delta) - m.h(phi0 - delta)) / (2 * delta);
                // O(delta^2) bound plus the differencing roundoff floor.
                CHECK(std::abs(fd - m.g(phi0)) < 10.0 * delta * delta + 1e-10);
            }
        }
    }
}

TEST_CASE("stabilized operator symbols") {
    SUBCASE("AC zero mode: forward = gamma0, inverse = 1/gamma0") {
        const Grid2D g(16, 16, 1.0, 1.0);
        EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
        CHECK(m.l0.symbol[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.l0_inv.symbol[0] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("CH mode (1,0) on the unit box") {
        const Grid2D g(16, 16, 1.0, 1.0);
        EqModel m = build_model(make_default_spec(ModelKind::CahnHilliard), g);
        CHECK(m.l0.symbol[1] == doctest::Approx(0.0004 * 4.0 * M_PI * M_PI + 2.0).epsilon(1e-13));
    }
    SUBCASE("PFC symbol at lambda = a0 collapses to gamma0") {
        // Lx = 2*pi puts mode (1,0) exactly at lambda = 1 = a0.
        const Grid2D g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
        EqModel m = build_model(make_default_spec(ModelKind::PhaseFieldCrystal), g);
        CHECK(m.l0.symbol[1] == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("forward times inverse is one everywhere, symbol positive") {
        const Grid2D g(32, 32, 1.0, 1.0);
        for (ModelKind kind :
             {ModelKind::AllenCahn, ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
            EqModel m = build_model(make_default_spec(kind), g);
            CHECK(m.l0.symbol.minCoeff() > 0.0);
            CHECK((m.l0.symbol.cwiseProduct(m.l0_inv.symbol) - Eigen::VectorXd::Ones(g.size()))
                      .cwiseAbs()
                      .maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("L0 positive definiteness: (f, L0 f) >= gamma0 (f, f)") {
    const Grid2D g(32, 32, 1.0, 1.0);
    std::mt19937 rng(29);
    for (ModelKind kind :
         {ModelKind::AllenCahn, ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
        EqModel m = build_model(make_default_spec(kind), g);
        for (int trial = 0; trial < 10; ++trial) {
            const Field f = random_field(g, rng);
            const double quad = inner_product(f, apply_multiplier(m.l0, f));
            CHECK(quad >= m.spec.gamma0 * inner_product(f, f) - 1e-9);
        }
    }
}

TEST_CASE("mobility admissibility") {
    const Grid2D g(32, 32, 1.0, 1.0);
    for (ModelKind kind :
         {ModelKind::AllenCahn, ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
        EqModel m = build_model(make_default_spec(kind), g);
        CHECK(m.gs.symbol.minCoeff() >= 0.0);
        CHECK(m.ga_coeff.cwiseAbs().maxCoeff() == 0.0);
        CHECK_FALSE(m.has_skew);
    }
}

TEST_CASE("quadratized energy values") {
    const Grid2D g(16, 16, 1.0, 1.0);
    EqModel m = build_model(make_default_spec(ModelKind::AllenCahn), g);
    Field zero(g);
    CHECK(eq_energy(m, zero, zero) == 0.0);

    Field ones(g);
    ones.values.setOnes();
    CHECK(eq_energy(m, zero, ones) == doctest::Approx(0.5).epsilon(1e-13));

    // phi = 1 with q = h(phi): 0.5*gamma0 + 0.5*(sqrt(2)/2 * gamma0)^2 = 0.75
    const Field q = m.h_of(ones);
    CHECK(eq_energy(m, ones, q) == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("EQ energy equals the original free energy up to a constant") {
    const Grid2D g(32, 32, 1.0, 1.0);
    std::mt19937 rng(31);
    for (ModelKind kind :
         {ModelKind::AllenCahn, ModelKind::CahnHilliard, ModelKind::PhaseFieldCrystal}) {
        EqModel m = build_model(make_default_spec(kind), g);
        const double expected = eq_constant(m);
        double first_diff = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            const Field phi = random_field(g, rng, 0.8);
            const Field q = m.h_of(phi);
            const double diff = eq_energy(m, phi, q) - original_energy(m, phi);
            if (trial == 0) first_diff = diff;
            CHECK(diff == doctest::Approx(expected).epsilon(1e-8));
            CHECK(diff == doctest::Approx(first_diff).epsilon(1e-8));  // field independent
        }
    }
}

TEST_CASE("seven-disk initial profile") {
    const Grid2D g(128, 128, 1.0, 1.0);
    const ModelSpec spec = make_default_spec(ModelKind::AllenCahn);
    const Field phi = initial_condition(spec, g);

    SUBCASE("far from all disks the profile sits at -1") {
        // (0.95, 0.95) is at least 0.15 from every disk boundary.
        const int i = static_cast<int>(0.95 * g.nx);
        const int j = static_cast<int>(0.95 * g.ny);
        CHECK(phi(i, j) == doctest::Approx(-1.0).epsilon(1e-6));
    }
    SUBCASE("disk centers approach +1 up to the tanh(R/eps) deficit") {
        const int i = g.nx / 4, j = g.ny / 4;  // center of the R = 1/20 disk
        CHECK(phi(i, j) == doctest::Approx(std::tanh((1.0 / 20) / spec.epsilon)).epsilon(1e-4));
        CHECK(phi(i, j) > 0.98);
    }
    SUBCASE("bounds: disks do not overlap") {
        CHECK(phi.values.minCoeff() >= -1.0 - 1e-6);
        CHECK(phi.values.maxCoeff() <= 1.0 + 1e-6);
    }
}

TEST_CASE("PFC initial profile: three dots on the mean background") {
    const Grid2D g(128, 128, 100.0, 100.0);
    const ModelSpec spec = make_default_spec(ModelKind::PhaseFieldCrystal);
    const Field phi = initial_condition(spec, g);
    // Background value away from the seeds.
    CHECK(phi(0, 0) == doctest::Approx(spec.pfc_mean).epsilon(1e-12));
    // Seeds carry the lattice modulation.
    double dev = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) dev = std::max(dev, std::abs(phi(i, j) - spec.pfc_mean));
    CHECK(dev > 0.1);
    CHECK(dev <= 1.5 * spec.pfc_amp + 1e-12);
    CHECK(phi.values.allFinite());
}
