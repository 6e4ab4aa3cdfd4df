#include "eqrom/fom.hpp"

#include <cmath>

namespace eqrom {

namespace {

constexpr double kCgTol = 1e-10;
constexpr int kCgMaxIter = 500;

// Workspace for the CN phi-update. Eliminating q leaves
//   (I/dt + (1/2) Gs L0 + (1/2) Gs diag(gbar^2)) dphi = -Gs[L0 phi + gbar.*q],
// which is symmetrized by applying the pseudo-inverse of Gs:
//   (Gs^+/dt + (1/2) L0 + (1/2) diag(gbar^2)) dphi = -P[L0 phi + gbar.*q],
// restricted to the range of Gs (P removes the zero mode when Gs annihilates
// it, i.e. the conserved mean for CH/PFC).
struct CnSystem {
    const EqModel& model;
    double dt;
    Eigen::VectorXd gbar2;       // gbar.^2 pointwise
    FourierMultiplier constant;  // Gs^+/dt + (1/2) L0
    FourierMultiplier prec;      // reciprocal of the constant part
    bool project_mean;           // Gs vanishes at the zero mode

    CnSystem(const EqModel& m, const Field& gbar, double dt_) : model(m), dt(dt_) {
        gbar2 = gbar.values.array().square();
        const Eigen::VectorXd& gs = m.gs.symbol;
        const double gs_max = gs.maxCoeff();
        if (!(gs_max > 0.0)) throw SolverError("fom_step_cn: mobility symbol is identically zero");

        const int n = m.grid.size();
        Eigen::VectorXd c(n);
        int null_count = 0;
        for (int i = 0; i < n; ++i) {
            if (gs[i] <= 1e-14 * gs_max) {
                c[i] = 0.0;  // projected out
                ++null_count;
            } else {
                c[i] = 1.0 / (gs[i] * dt) + 0.5 * m.l0.symbol[i];
            }
        }
        // Only the zero-mode null space is supported (the CH/PFC mobilities).
        project_mean = null_count > 0;
        if (null_count > 1) throw SolverError("fom_step_cn: mobility null space larger than the zero mode");
        if (project_mean && gs[0] > 1e-14 * gs_max)
            throw SolverError("fom_step_cn: unexpected mobility null mode");

        constant = FourierMultiplier(m.grid, std::move(c));
        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) p[i] = (constant.symbol[i] > 0.0) ? 1.0 / constant.symbol[i] : 0.0;
        prec = FourierMultiplier(m.grid, std::move(p));
    }

    void project(Eigen::VectorXd& v) const {
        if (project_mean) v.array() -= v.mean();
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        Field vf(model.grid, v);
        Eigen::VectorXd out = apply_multiplier(constant, vf).values;
        Eigen::VectorXd diag_part = 0.5 * gbar2.cwiseProduct(v);
        project(diag_part);
        out += diag_part;
        return out;
    }

    Eigen::VectorXd precondition(const Eigen::VectorXd& v) const {
        Field vf(model.grid, v);
        return apply_multiplier(prec, vf).values;
    }
};

Eigen::VectorXd pcg_solve(const CnSystem& sys, const Eigen::VectorXd& b) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    const double bnorm = b.norm();
    if (bnorm == 0.0) return x;
    Eigen::VectorXd z = sys.precondition(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 0; it < kCgMaxIter; ++it) {
        const Eigen::VectorXd ap = sys.apply(p);
        const double alpha = rz / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        if (r.norm() <= kCgTol * bnorm) return x;
        z = sys.precondition(r);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw SolverError("fom_step_cn: PCG did not converge within 500 iterations");
}

}  // namespace

FomState fom_init(const EqModel& model) {
    FomState s;
    s.phi = initial_condition(model.spec, model.grid);
    s.q = model.h_of(s.phi);
    s.t = 0.0;
    return s;
}

FomState fom_step_cn(const FomState& cur, const FomState& prev, const EqModel& model, double dt) {
    if (!(dt > 0.0)) throw ConfigError("fom_step_cn: dt must be positive");
    if (model.has_skew) throw SolverError("fom_step_cn: skew mobility is not supported at full order");
    require_same_grid(cur.phi.grid, model.grid, "fom_step_cn");

    Field phibar(model.grid, 1.5 * cur.phi.values - 0.5 * prev.phi.values);
    const Field gbar = model.g_of(phibar);

    CnSystem sys(model, gbar, dt);

    Eigen::VectorXd mu = apply_multiplier(model.l0, cur.phi).values;
    mu += gbar.values.cwiseProduct(cur.q.values);
    Eigen::VectorXd b = -mu;
    sys.project(b);

    const Eigen::VectorXd dphi = pcg_solve(sys, b);

    FomState next;
    next.phi = Field(model.grid, cur.phi.values + dphi);
    next.q = Field(model.grid, cur.q.values + gbar.values.cwiseProduct(dphi));
    next.t = cur.t + dt;
    return next;
}

FomRunResult run_fom(const EqModel& model, double dt, double T, double sample_interval) {
    if (!(dt > 0.0)) throw ConfigError("run_fom: dt must be positive");
    if (T < 0.0) throw ConfigError("run_fom: T must be non-negative");
    if (!(sample_interval > 0.0)) throw ConfigError("run_fom: sample_interval must be positive");
    const double stride_real = sample_interval / dt;
    const long stride = std::lround(stride_real);
    if (stride < 1 || std::abs(stride_real - stride) > 1e-8 * stride)
        throw ConfigError("run_fom: sample_interval must be a positive multiple of dt");
    const long nsteps = std::lround(T / dt);
    if (std::abs(nsteps * dt - T) > 1e-8 * std::max(T, dt))
        throw ConfigError("run_fom: T must be a whole number of steps of dt");

    FomRunResult out;
    out.snapshots.grid = model.grid;
    out.snapshots.sample_interval = sample_interval;

    const long nsamples = nsteps / stride;
    const int ncols = nsamples > 0 ? static_cast<int>(nsamples) : 1;
    out.snapshots.phi.resize(model.grid.size(), ncols);
    out.snapshots.q.resize(model.grid.size(), ncols);
    out.snapshots.times.resize(ncols);

    FomState cur = fom_init(model);
    FomState prev = cur;

    auto record_log = [&](const FomState& s) {
        EnergyRow row;
        row.t = s.t;
        row.energy = eq_energy(model, s.phi, s.q);
        row.modified_energy = std::nan("");
        row.dissipation = std::nan("");
        row.xi0 = std::nan("");
        row.mass = field_mass(s.phi);
        Field drift(model.grid, s.q.values - model.h_of(s.phi).values);
        row.eq_drift = norm2(drift);
        out.log.push_back(row);
    };
    record_log(cur);

    if (nsamples == 0) {
        out.snapshots.phi.col(0) = cur.phi.values;
        out.snapshots.q.col(0) = model.h_of(cur.phi).values;
        out.snapshots.times[0] = cur.t;
    }

    int col = 0;
    for (long step = 1; step <= nsteps; ++step) {
        FomState next = fom_step_cn(cur, prev, model, dt);
        prev = cur;
        cur = next;
        record_log(cur);
        if (step % stride == 0 && col < ncols && nsamples > 0) {
            out.snapshots.phi.col(col) = cur.phi.values;
            // Q samples the auxiliary-variable definition h(phi), not the
            // integrated q.
            out.snapshots.q.col(col) = model.h_of(cur.phi).values;
            out.snapshots.times[col] = cur.t;
            ++col;
        }
    }
    return out;
}

}  // namespace eqrom
