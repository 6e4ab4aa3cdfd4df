#include "eqrom/rom.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace eqrom {

std::string to_string(RomVariant v) {
    switch (v) {
        case RomVariant::Vanilla: return "vanilla";
        case RomVariant::I: return "i";
        case RomVariant::II: return "ii";
    }
    return "?";
}

RomVariant rom_variant_from_string(const std::string& s) {
    if (s == "vanilla") return RomVariant::Vanilla;
    if (s == "i" || s == "I") return RomVariant::I;
    if (s == "ii" || s == "II") return RomVariant::II;
    throw ConfigError("unknown ROM variant '" + s + "' (expected vanilla, i, or ii)");
}

Eigen::VectorXd ReducedState::stacked() const {
    Eigen::VectorXd a(a_phi.size() + a_q.size());
    a << a_phi, a_q;
    return a;
}

ReducedState ReducedState::from_stacked(const Eigen::VectorXd& a, double t) {
    const Eigen::Index r = a.size() / 2;
    ReducedState s;
    s.a_phi = a.head(r);
    s.a_q = a.tail(r);
    s.t = t;
    return s;
}

Eigen::MatrixXd RomSystem::mass_matrix() const {
    const int r = rank();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * r, 2 * r);
    m.topLeftCorner(r, r) = a0;
    m.bottomRightCorner(r, r).setIdentity();
    return m;
}

namespace {

// G f columnwise: symmetric multiplier plus optional skew part.
Eigen::MatrixXd apply_g_columns(const EqModel& model, const Eigen::MatrixXd& cols) {
    Eigen::MatrixXd out = apply_multiplier_columns(model.gs, cols);
    if (model.has_skew) out += apply_imag_multiplier_columns(model.grid, model.ga_coeff, cols);
    return out;
}

Eigen::VectorXd apply_g_vector(const EqModel& model, const Eigen::VectorXd& v) {
    Field f(model.grid, v);
    Eigen::VectorXd out = apply_multiplier(model.gs, f).values;
    if (model.has_skew) out += apply_imag_multiplier(model.grid, model.ga_coeff, f).values;
    return out;
}

}  // namespace

RomSystem assemble_static(const PodBasis& basis, const EqModel& model) {
    require_same_grid(basis.grid, model.grid, "assemble_static");
    RomSystem sys;
    sys.model = model;
    sys.basis = basis;

    const double w = basis.weight;
    sys.l0_u = apply_multiplier_columns(model.l0, basis.u_phi);
    sys.g_l0_u = apply_g_columns(model, sys.l0_u);
    sys.g_u = apply_g_columns(model, basis.u_phi);
    sys.a0 = w * (basis.u_phi.transpose() * sys.l0_u);
    sys.a1 = w * (sys.l0_u.transpose() * sys.g_l0_u);
    sys.mass_row = w * basis.u_phi.colwise().sum().transpose();

    // A0 must be SPD (L0 positive definite, basis full column rank).
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (sys.a0 + sys.a0.transpose()));
    if (llt.info() != Eigen::Success)
        throw NumericError("assemble_static: A0 failed the SPD check; basis or symbol is broken");
    return sys;
}

void attach_deim(RomSystem& sys, DeimOperator op) {
    const int k = op.rank();
    op.sampler.resize(k, sys.rank());
    for (int i = 0; i < k; ++i) op.sampler.row(i) = sys.basis.u_phi.row(op.indices[i]);
    sys.deim = std::move(op);
    sys.use_deim = true;
}

Eigen::VectorXd coefficient_field(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar) {
    if (a_phi_bar.size() != sys.rank())
        throw DimensionError("coefficient_field: reduced vector has wrong length");
    if (sys.use_deim) return deim_eval(*sys.deim, sys.model.g, a_phi_bar);
    const Eigen::VectorXd phibar = sys.basis.u_phi * a_phi_bar;
    Eigen::VectorXd gamma(phibar.size());
    for (Eigen::Index i = 0; i < phibar.size(); ++i) gamma[i] = sys.model.g(phibar[i]);
    if (!gamma.allFinite()) throw NumericError("coefficient_field: non-finite coefficient");
    return gamma;
}

DynamicOps assemble_dynamic(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar) {
    const Eigen::VectorXd gamma = coefficient_field(sys, a_phi_bar);
    const double w = sys.weight();
    const Eigen::MatrixXd z = gamma.asDiagonal() * sys.basis.u_q;
    const Eigen::MatrixXd gz = apply_g_columns(sys.model, z);
    DynamicOps ops;
    ops.a2 = w * (sys.l0_u.transpose() * gz);
    ops.a3 = w * (z.transpose() * sys.g_l0_u);
    ops.a4 = w * (z.transpose() * gz);
    return ops;
}

StepOperators assemble_step_operators(const RomSystem& sys, const Eigen::VectorXd& a_phi_bar) {
    const int r = sys.rank();
    const double w = sys.weight();
    StepOperators ops;
    ops.gamma = coefficient_field(sys, a_phi_bar);
    if (!ops.gamma.allFinite()) throw NumericError("assemble_step_operators: non-finite coefficient");

    const Eigen::MatrixXd z = ops.gamma.asDiagonal() * sys.basis.u_q;
    const Eigen::MatrixXd gz = apply_g_columns(sys.model, z);

    ops.k_ii.resize(2 * r, 2 * r);
    ops.k_ii.topLeftCorner(r, r) = sys.a1;
    ops.k_ii.topRightCorner(r, r) = w * (sys.l0_u.transpose() * gz);
    ops.k_ii.bottomLeftCorner(r, r) = w * (z.transpose() * sys.g_l0_u);
    ops.k_ii.bottomRightCorner(r, r) = w * (z.transpose() * gz);

    ops.n_hat.resize(2 * r, 2 * r);
    ops.n_hat.topLeftCorner(r, r) = w * (sys.basis.u_phi.transpose() * sys.g_u);
    ops.n_hat.topRightCorner(r, r) = w * (sys.basis.u_phi.transpose() * gz);
    ops.n_hat.bottomLeftCorner(r, r) = w * (z.transpose() * sys.g_u);
    ops.n_hat.bottomRightCorner(r, r) = ops.k_ii.bottomRightCorner(r, r);

    ops.k_van.resize(2 * r, 2 * r);
    ops.k_van.topLeftCorner(r, r) = w * (sys.basis.u_phi.transpose() * sys.g_l0_u);
    ops.k_van.topRightCorner(r, r) = ops.n_hat.topRightCorner(r, r);
    ops.k_van.bottomLeftCorner(r, r) = ops.k_ii.bottomLeftCorner(r, r);
    ops.k_van.bottomRightCorner(r, r) = ops.k_ii.bottomRightCorner(r, r);
    return ops;
}

namespace {

// Flux s = N0 L_h[Ua] = L0 U_phi a_phi + gamma .* (U_q a_q).
Eigen::VectorXd flux_ii(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma) {
    return sys.l0_u * a.a_phi + gamma.cwiseProduct(sys.basis.u_q * a.a_q);
}

// Flux of the I-variant: N0 applied to U U^T L_h[Ua] = [U_phi (A0 a_phi); U_q a_q].
Eigen::VectorXd flux_i(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma) {
    const Eigen::VectorXd b_phi = sys.a0 * a.a_phi;
    return sys.basis.u_phi * b_phi + gamma.cwiseProduct(sys.basis.u_q * a.a_q);
}

double flux_dissipation(const RomSystem& sys, const Eigen::VectorXd& s) {
    Field sf(sys.model.grid, s);
    const Eigen::VectorXd gss = apply_multiplier(sys.model.gs, sf).values;
    return sys.weight() * s.dot(gss);
}

}  // namespace

Eigen::VectorXd rhs_vanilla(const RomSystem& sys, const ReducedState& a) {
    const Eigen::VectorXd gamma = coefficient_field(sys, a.a_phi);
    const Eigen::VectorXd s = flux_ii(sys, a, gamma);
    const Eigen::VectorXd gs_s = apply_g_vector(sys.model, s);
    const double w = sys.weight();
    Eigen::VectorXd rhs(2 * sys.rank());
    rhs.head(sys.rank()) = -w * (sys.basis.u_phi.transpose() * gs_s);
    rhs.tail(sys.rank()) = -w * (sys.basis.u_q.transpose() * gamma.cwiseProduct(gs_s));
    return rhs;
}

Eigen::VectorXd rhs_rom_i(const RomSystem& sys, const ReducedState& a) {
    const Eigen::VectorXd gamma = coefficient_field(sys, a.a_phi);
    const Eigen::VectorXd s = flux_i(sys, a, gamma);
    const Eigen::VectorXd gs_s = apply_g_vector(sys.model, s);
    const double w = sys.weight();
    Eigen::VectorXd rhs(2 * sys.rank());
    rhs.head(sys.rank()) = -w * (sys.basis.u_phi.transpose() * gs_s);
    rhs.tail(sys.rank()) = -w * (sys.basis.u_q.transpose() * gamma.cwiseProduct(gs_s));
    return rhs;
}

RomRhsII rhs_rom_ii(const RomSystem& sys, const ReducedState& a) {
    const Eigen::VectorXd gamma = coefficient_field(sys, a.a_phi);
    const Eigen::VectorXd s = flux_ii(sys, a, gamma);
    const Eigen::VectorXd gs_s = apply_g_vector(sys.model, s);
    const double w = sys.weight();
    RomRhsII out;
    out.mass = sys.mass_matrix();
    out.rhs.resize(2 * sys.rank());
    // U^T L* N0^T applied to Gs s: the phi row carries the extra L0*.
    Field gf(sys.model.grid, gs_s);
    const Eigen::VectorXd l0_gs_s = apply_multiplier(sys.model.l0, gf).values;
    out.rhs.head(sys.rank()) = -w * (sys.basis.u_phi.transpose() * l0_gs_s);
    out.rhs.tail(sys.rank()) = -w * (sys.basis.u_q.transpose() * gamma.cwiseProduct(gs_s));
    return out;
}

double reduced_energy(const RomSystem& sys, const ReducedState& a) {
    return 0.5 * a.a_phi.dot(sys.a0 * a.a_phi) + 0.5 * a.a_q.squaredNorm();
}

double modified_bdf2_energy(const RomSystem& sys, const ReducedState& a_now,
                            const ReducedState& a_prev) {
    ReducedState extrap;
    extrap.a_phi = 2.0 * a_now.a_phi - a_prev.a_phi;
    extrap.a_q = 2.0 * a_now.a_q - a_prev.a_q;
    return 0.5 * reduced_energy(sys, a_now) + 0.5 * reduced_energy(sys, extrap);
}

double dissipation_ii(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma) {
    return flux_dissipation(sys, flux_ii(sys, a, gamma));
}

double dissipation_i(const RomSystem& sys, const ReducedState& a, const Eigen::VectorXd& gamma) {
    return flux_dissipation(sys, flux_i(sys, a, gamma));
}

double eq_drift(const RomSystem& sys, const ReducedState& a) {
    const Field phi = lift_phi(sys, a);
    const Eigen::VectorXd diff = sys.basis.u_q * a.a_q - sys.model.h_of(phi).values;
    return std::sqrt(sys.weight()) * diff.norm();
}

double reduced_mass(const RomSystem& sys, const ReducedState& a) {
    return sys.mass_row.dot(a.a_phi);
}

Field lift_phi(const RomSystem& sys, const ReducedState& a) {
    return Field(sys.model.grid, sys.basis.u_phi * a.a_phi);
}

Field lift_q(const RomSystem& sys, const ReducedState& a) {
    return Field(sys.model.grid, sys.basis.u_q * a.a_q);
}

}  // namespace eqrom
