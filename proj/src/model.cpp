#include "eqrom/model.hpp"

#include <cmath>

namespace eqrom {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::AllenCahn: return "ac";
        case ModelKind::CahnHilliard: return "ch";
        case ModelKind::PhaseFieldCrystal: return "pfc";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "ac" || s == "allen-cahn") return ModelKind::AllenCahn;
    if (s == "ch" || s == "cahn-hilliard") return ModelKind::CahnHilliard;
    if (s == "pfc" || s == "phase-field-crystal") return ModelKind::PhaseFieldCrystal;
    throw ConfigError("unknown model kind '" + s + "' (expected ac, ch, or pfc)");
}

void ModelSpec::validate() const {
    if (!(mobility > 0.0)) throw ConfigError("model parameter M must be > 0");
    if (!(gamma0 > 0.0)) throw ConfigError("model parameter gamma0 must be > 0");
    if (kind != ModelKind::PhaseFieldCrystal && !(epsilon > 0.0))
        throw ConfigError("model parameter epsilon must be > 0");
    if (!(energy_shift >= 0.0)) throw ConfigError("model parameter A0 must be >= 0");
}

ModelSpec make_default_spec(ModelKind kind) {
    ModelSpec s;
    s.kind = kind;
    switch (kind) {
        case ModelKind::AllenCahn:
            s.mobility = 1.0;
            s.epsilon = 0.02;
            s.gamma0 = 1.0;
            break;
        case ModelKind::CahnHilliard:
            s.mobility = 0.01;
            s.epsilon = 0.02;
            s.gamma0 = 2.0;
            break;
        case ModelKind::PhaseFieldCrystal:
            s.mobility = 1.0;
            s.a0 = 1.0;
            s.b0 = 0.325;
            s.gamma0 = 1.0;
            break;
    }
    return s;
}

Field EqModel::h_of(const Field& phi) const {
    require_same_grid(grid, phi.grid, "EqModel::h_of");
    Field out(grid);
    for (int i = 0; i < phi.size(); ++i) out.values[i] = h(phi.values[i]);
    return out;
}

Field EqModel::g_of(const Field& phi) const {
    require_same_grid(grid, phi.grid, "EqModel::g_of");
    Field out(grid);
    for (int i = 0; i < phi.size(); ++i) out.values[i] = g(phi.values[i]);
    return out;
}

Field EqModel::apply_mobility(const Field& f) const {
    Field out = apply_multiplier(gs, f);
    if (has_skew) out.values += apply_imag_multiplier(grid, ga_coeff, f).values;
    return out;
}

EqModel build_model(const ModelSpec& spec, const Grid2D& grid) {
    spec.validate();
    EqModel m;
    m.grid = grid;
    m.spec = spec;

    const Eigen::VectorXd lam = laplacian_eigenvalues(grid);
    Eigen::VectorXd l0_sym(grid.size());
    Eigen::VectorXd gs_sym(grid.size());

    switch (spec.kind) {
        case ModelKind::AllenCahn:
            l0_sym = (spec.epsilon * spec.epsilon) * lam;
            l0_sym.array() += spec.gamma0;
            gs_sym.setConstant(spec.mobility);
            break;
        case ModelKind::CahnHilliard:
            l0_sym = (spec.epsilon * spec.epsilon) * lam;
            l0_sym.array() += spec.gamma0;
            gs_sym = spec.mobility * lam;  // symbol of -M*Laplacian
            break;
        case ModelKind::PhaseFieldCrystal:
            l0_sym = (spec.a0 - lam.array()).square();  // (a0 + Delta)^2
            l0_sym.array() += spec.gamma0;
            gs_sym = spec.mobility * lam;
            break;
    }

    if (l0_sym.minCoeff() <= 0.0)
        throw ConfigError("stabilized operator symbol is not positive; check gamma0");

    m.l0 = FourierMultiplier(grid, l0_sym);
    m.l0_inv = FourierMultiplier(grid, l0_sym.cwiseInverse());
    m.gs = FourierMultiplier(grid, gs_sym);
    m.ga_coeff = Eigen::VectorXd::Zero(grid.size());
    m.has_skew = false;

    // q = (sqrt(2)/2)(phi^2 - c) with c = 1 + gamma0 (AC/CH) or b0 + gamma0 (PFC).
    const double c = (spec.kind == ModelKind::PhaseFieldCrystal) ? spec.b0 + spec.gamma0
                                                                 : 1.0 + spec.gamma0;
    m.h = [c](double phi) { return M_SQRT1_2 * (phi * phi - c); };
    m.g = [](double phi) { return M_SQRT2 * phi; };
    return m;
}

double eq_energy(const EqModel& model, const Field& phi, const Field& q) {
    require_same_grid(model.grid, phi.grid, "eq_energy");
    require_same_grid(model.grid, q.grid, "eq_energy");
    const Field l0phi = apply_multiplier(model.l0, phi);
    return 0.5 * inner_product(phi, l0phi) + 0.5 * inner_product(q, q);
}

namespace {

// Seven disks of the AC/CH benchmark initial condition.
constexpr double kDiskX[7] = {1.0 / 4, 1.0 / 8, 1.0 / 4, 1.0 / 2, 3.0 / 4, 1.0 / 2, 3.0 / 4};
constexpr double kDiskY[7] = {1.0 / 4, 3.0 / 8, 5.0 / 8, 1.0 / 8, 1.0 / 8, 1.0 / 2, 3.0 / 4};
constexpr double kDiskR[7] = {1.0 / 20, 1.0 / 16, 1.0 / 12, 1.0 / 12, 1.0 / 10, 1.0 / 8, 1.0 / 8};

Field seven_disk_profile(const ModelSpec& spec, const Grid2D& grid) {
    Field phi(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double y = grid.y(j);
            double s = 0.0;
            for (int d = 0; d < 7; ++d) {
                const double dist = std::hypot(x - kDiskX[d], y - kDiskY[d]);
                s += 0.5 * (1.0 - std::tanh((dist - kDiskR[d]) / spec.epsilon));
            }
            phi(i, j) = 2.0 * s - 1.0;
        }
    }
    return phi;
}

Field pfc_dots_profile(const ModelSpec& spec, const Grid2D& grid) {
    const double cx[3] = {0.25 * grid.lx, 0.75 * grid.lx, 0.50 * grid.lx};
    const double cy[3] = {0.25 * grid.ly, 0.25 * grid.ly, 0.75 * grid.ly};
    const double qt = 0.5 * std::sqrt(3.0) * std::sqrt(spec.a0);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    Field phi(grid);
    phi.values.setConstant(spec.pfc_mean);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double y = grid.y(j);
            for (int d = 0; d < 3; ++d) {
                const double dx = x - cx[d];
                const double dy = y - cy[d];
                if (dx * dx + dy * dy > spec.pfc_seed_radius * spec.pfc_seed_radius) continue;
                const double lattice = std::cos(qt * dx) * std::cos(qt * dy * inv_sqrt3) -
                                       0.5 * std::cos(2.0 * qt * dy * inv_sqrt3);
                phi(i, j) = spec.pfc_mean + spec.pfc_amp * lattice;
                break;
            }
        }
    }
    return phi;
}

}  // namespace

Field initial_condition(const ModelSpec& spec, const Grid2D& grid) {
    spec.validate();
    if (spec.kind == ModelKind::PhaseFieldCrystal) return pfc_dots_profile(spec, grid);
    return seven_disk_profile(spec, grid);
}

double field_mass(const Field& phi) {
    return phi.grid.cell_weight() * phi.values.sum();
}

}  // namespace eqrom
