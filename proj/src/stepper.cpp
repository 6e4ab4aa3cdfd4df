#include "eqrom/stepper.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace eqrom {

std::string to_string(TimeScheme s) { return s == TimeScheme::CN ? "cn" : "bdf2"; }

TimeScheme time_scheme_from_string(const std::string& s) {
    if (s == "cn") return TimeScheme::CN;
    if (s == "bdf2") return TimeScheme::BDF2;
    throw ConfigError("unknown scheme '" + s + "' (expected cn or bdf2)");
}

void SchemeConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("scheme parameter dt must be > 0");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("scheme parameter eta must lie in [0,1]");
    if (relaxed && variant == RomVariant::Vanilla)
        throw ConfigError("relaxed stepping is not defined for the vanilla variant");
}

ReducedState init_reduced(const RomSystem& sys, const Field& phi0) {
    require_same_grid(sys.model.grid, phi0.grid, "init_reduced");
    const double w = sys.weight();
    ReducedState a;
    a.a_phi = w * (sys.basis.u_phi.transpose() * phi0.values);
    a.a_q = w * (sys.basis.u_q.transpose() * sys.model.h_of(phi0).values);
    a.t = 0.0;
    return a;
}

Eigen::MatrixXd step_matrix_cn_ii(const RomSystem& sys, const StepOperators& ops, double dt) {
    return sys.mass_matrix() / dt + 0.5 * ops.k_ii;
}

Eigen::MatrixXd step_matrix_bdf2_ii(const RomSystem& sys, const StepOperators& ops, double dt) {
    return (1.5 / dt) * sys.mass_matrix() + ops.k_ii;
}

namespace {

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* where) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd x = lu.solve(b);
    if (!x.allFinite())
        throw SolverError(std::string(where) + ": step system factorization failed");
    return x;
}

struct LinearStep {
    ReducedState next;
    StepOperators ops;    // carries the gamma used by the step
    ReducedState a_half;  // CN midpoint (unused by BDF2)
};

ReducedState midpoint(const ReducedState& a, const ReducedState& b, double t) {
    ReducedState m;
    m.a_phi = 0.5 * (a.a_phi + b.a_phi);
    m.a_q = 0.5 * (a.a_q + b.a_q);
    m.t = t;
    return m;
}

// CN step of the selected variant. The I/vanilla systems are solved in the
// L_r-premultiplied form (L_r = U^T L U), which is symmetric and equivalent.
LinearStep linear_step_cn(const RomSystem& sys, const ReducedState& cur, const ReducedState& prev,
                          double dt, RomVariant variant) {
    LinearStep out;
    Eigen::VectorXd abar_phi = 1.5 * cur.a_phi - 0.5 * prev.a_phi;
    out.ops = assemble_step_operators(sys, abar_phi);
    const Eigen::VectorXd an = cur.stacked();

    Eigen::MatrixXd s;
    Eigen::VectorXd b;
    const int r2 = 2 * sys.rank();
    switch (variant) {
        case RomVariant::II: {
            s = step_matrix_cn_ii(sys, out.ops, dt);
            b = sys.mass_matrix() * an / dt - 0.5 * (out.ops.k_ii * an);
            break;
        }
        case RomVariant::I: {
            const Eigen::MatrixXd lr = sys.mass_matrix();
            const Eigen::MatrixXd w = lr * out.ops.n_hat * lr;
            s = lr / dt + 0.5 * w;
            b = lr * an / dt - 0.5 * (w * an);
            break;
        }
        case RomVariant::Vanilla: {
            s = Eigen::MatrixXd::Identity(r2, r2) / dt + 0.5 * out.ops.k_van;
            b = an / dt - 0.5 * (out.ops.k_van * an);
            break;
        }
    }
    const Eigen::VectorXd anext = solve_dense(s, b, "rom_step(cn)");
    out.next = ReducedState::from_stacked(anext, cur.t + dt);
    out.a_half = midpoint(cur, out.next, cur.t + 0.5 * dt);
    return out;
}

LinearStep linear_step_bdf2(const RomSystem& sys, const ReducedState& cur, const ReducedState& prev,
                            double dt, RomVariant variant) {
    LinearStep out;
    Eigen::VectorXd abar_phi = 2.0 * cur.a_phi - prev.a_phi;
    out.ops = assemble_step_operators(sys, abar_phi);
    const Eigen::VectorXd hist = (4.0 * cur.stacked() - prev.stacked()) / (2.0 * dt);

    Eigen::MatrixXd s;
    Eigen::VectorXd b;
    const int r2 = 2 * sys.rank();
    switch (variant) {
        case RomVariant::II: {
            s = step_matrix_bdf2_ii(sys, out.ops, dt);
            b = sys.mass_matrix() * hist;
            break;
        }
        case RomVariant::I: {
            const Eigen::MatrixXd lr = sys.mass_matrix();
            s = (1.5 / dt) * lr + lr * out.ops.n_hat * lr;
            b = lr * hist;
            break;
        }
        case RomVariant::Vanilla: {
            s = (1.5 / dt) * Eigen::MatrixXd::Identity(r2, r2) + out.ops.k_van;
            b = hist;
            break;
        }
    }
    const Eigen::VectorXd anext = solve_dense(s, b, "rom_step(bdf2)");
    out.next = ReducedState::from_stacked(anext, cur.t + dt);
    return out;
}

double scheme_dissipation(const RomSystem& sys, const ReducedState& eval_state,
                          const Eigen::VectorXd& gamma, RomVariant variant) {
    return variant == RomVariant::I ? dissipation_i(sys, eval_state, gamma)
                                    : dissipation_ii(sys, eval_state, gamma);
}

RelaxCoeffs relax_coefficients_common(const RomSystem& sys, const ReducedState& ahat,
                                      const ReducedState& a_n, double eta, double dt,
                                      double dissipation, bool bdf2) {
    const double w = sys.weight();
    const Eigen::VectorXd h = sys.model.h_of(lift_phi(sys, ahat)).values;
    const Eigen::VectorXd u = sys.basis.u_q * ahat.a_q;
    const Eigen::VectorXd d = u - h;

    RelaxCoeffs c;
    if (!bdf2) {
        c.a = 0.5 * w * d.squaredNorm();
        c.b = w * h.dot(d);
        c.c = 0.5 * w * h.squaredNorm() - 0.5 * w * u.squaredNorm() - dt * eta * dissipation;
    } else {
        const Eigen::VectorXd un = sys.basis.u_q * a_n.a_q;
        c.a = 1.25 * w * d.squaredNorm();
        c.b = 0.5 * w * d.dot(5.0 * h - 2.0 * un);
        c.c = 0.25 * w *
                  (h.squaredNorm() + (2.0 * h - un).squaredNorm() - u.squaredNorm() -
                   (2.0 * u - un).squaredNorm()) -
              dt * eta * dissipation;
    }
    return c;
}

}  // namespace

Xi0Result xi0_closed_form(double A, double B, double C) {
    Xi0Result out;
    const double scale = std::abs(A) + std::abs(B) + std::abs(C);
    const double slack = 1e-12 * scale;
    if (!(A > 0.0)) {
        // A = 0 means the auxiliary variable already matches its definition;
        // the constraint degenerates and either end satisfies it.
        out.xi0 = (C <= slack) ? 0.0 : 1.0;
        return out;
    }
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
        // No real root: the interior is infeasible. The schemes guarantee
        // feasibility at xi = 1 (A + B + C = -dt*eta*dissipation <= 0), so a
        // negative discriminant can only be roundoff; fall back to 1.
        if (A + B + C > 1e-9 * scale + 1e-12)
            throw NumericError("xi0_closed_form: constraint infeasible on [0,1] (A+B+C = " +
                               std::to_string(A + B + C) + " > 0, no real roots)");
        out.xi0 = 1.0;
        out.interior_infeasible = true;
        return out;
    }
    const double sq = std::sqrt(disc);
    const double r_lo = (-B - sq) / (2.0 * A);
    const double r_hi = (-B + sq) / (2.0 * A);
    out.xi0 = std::clamp(std::max(0.0, r_lo), 0.0, 1.0);
    // The feasible window [r_lo, r_hi] must meet [0,1] for the clamp to be a
    // solution; the schemes guarantee it through feasibility at xi = 1.
    const double q_at = A * out.xi0 * out.xi0 + B * out.xi0 + C;
    if (q_at > 1e-9 * scale + 1e-12) {
        if (A + B + C <= 1e-9 * scale + 1e-12) {
            out.xi0 = 1.0;
            out.interior_infeasible = true;
            return out;
        }
        throw NumericError("xi0_closed_form: constraint infeasible on [0,1] (window [" +
                           std::to_string(r_lo) + ", " + std::to_string(r_hi) + "])");
    }
    return out;
}

RelaxCoeffs relax_coefficients_cn(const RomSystem& sys, const ReducedState& ahat,
                                  const ReducedState& a_n, const ReducedState& abar_half,
                                  double eta, double dt) {
    const Eigen::VectorXd gamma = coefficient_field(sys, abar_half.a_phi);
    const ReducedState ahalf = midpoint(a_n, ahat, a_n.t + 0.5 * dt);
    const double diss = dissipation_ii(sys, ahalf, gamma);
    return relax_coefficients_common(sys, ahat, a_n, eta, dt, diss, false);
}

RelaxCoeffs relax_coefficients_bdf2(const RomSystem& sys, const ReducedState& ahat,
                                    const ReducedState& a_n, const ReducedState& abar,
                                    double eta, double dt) {
    const Eigen::VectorXd gamma = coefficient_field(sys, abar.a_phi);
    const double diss = dissipation_ii(sys, ahat, gamma);
    return relax_coefficients_common(sys, ahat, a_n, eta, dt, diss, true);
}

StepResult rom_step(const RomSystem& sys, const ReducedState& cur, const ReducedState& prev,
                    const SchemeConfig& cfg) {
    cfg.validate();
    StepResult out;

    const bool bdf2 = cfg.scheme == TimeScheme::BDF2;
    LinearStep lin = bdf2 ? linear_step_bdf2(sys, cur, prev, cfg.dt, cfg.variant)
                          : linear_step_cn(sys, cur, prev, cfg.dt, cfg.variant);

    const ReducedState& diss_state = bdf2 ? lin.next : lin.a_half;
    out.dissipation = scheme_dissipation(sys, diss_state, lin.ops.gamma, cfg.variant);

    if (!cfg.relaxed) {
        out.next = lin.next;
        return out;
    }

    // Relaxation: spend at most eta of the step's dissipation budget pulling
    // U_q a_q back toward h(U_phi a_phi).
    const double w = sys.weight();
    const Eigen::VectorXd h = sys.model.h_of(lift_phi(sys, lin.next)).values;
    const Eigen::VectorXd u = sys.basis.u_q * lin.next.a_q;
    const double mismatch2 = w * (u - h).squaredNorm();
    const double scale2 = w * (u.squaredNorm() + h.squaredNorm());
    if (mismatch2 <= 1e-22 * scale2) {
        // Mismatch at the roundoff floor: resynchronizing is free.
        out.xi0 = 0.0;
    } else {
        const RelaxCoeffs rc =
            relax_coefficients_common(sys, lin.next, cur, cfg.eta, cfg.dt, out.dissipation, bdf2);
        out.xi0 = xi0_closed_form(rc.a, rc.b, rc.c).xi0;
    }
    out.next = lin.next;
    out.next.a_q =
        out.xi0 * lin.next.a_q + (1.0 - out.xi0) * (w * (sys.basis.u_q.transpose() * h));
    return out;
}

RomRunResult run_rom(const RomSystem& sys, const ReducedState& a0, const SchemeConfig& cfg,
                     double T, double sample_interval) {
    cfg.validate();
    if (T < 0.0) throw ConfigError("run_rom: T must be non-negative");
    if (!(sample_interval > 0.0)) throw ConfigError("run_rom: sample_interval must be positive");
    const double stride_real = sample_interval / cfg.dt;
    const long stride = std::lround(stride_real);
    if (stride < 1 || std::abs(stride_real - stride) > 1e-8 * stride)
        throw ConfigError("run_rom: sample_interval must be a positive multiple of dt");
    const long nsteps = std::lround(T / cfg.dt);
    if (std::abs(nsteps * cfg.dt - T) > 1e-8 * std::max(T, cfg.dt))
        throw ConfigError("run_rom: T must be a whole number of steps of dt");
    const long nsamples = nsteps / stride;
    const int ncols = nsamples > 0 ? static_cast<int>(nsamples) : 1;

    RomRunResult out;
    out.sample_interval = sample_interval;
    out.traj_phi.resize(sys.model.grid.size(), ncols);
    out.traj_q.resize(sys.model.grid.size(), ncols);
    out.times.resize(ncols);

    const bool bdf2 = cfg.scheme == TimeScheme::BDF2;
    ReducedState cur = a0;
    ReducedState prev = a0;

    auto log_row = [&](const ReducedState& s, const ReducedState& before, double diss, double xi) {
        EnergyRow row;
        row.t = s.t;
        row.energy = reduced_energy(sys, s);
        row.modified_energy = bdf2 ? modified_bdf2_energy(sys, s, before) : std::nan("");
        row.dissipation = diss;
        row.xi0 = xi;
        row.mass = reduced_mass(sys, s);
        row.eq_drift = eq_drift(sys, s);
        out.log.push_back(row);
    };
    log_row(cur, cur, std::nan(""), std::nan(""));

    if (nsamples == 0) {
        out.traj_phi.col(0) = sys.basis.u_phi * cur.a_phi;
        out.traj_q.col(0) = sys.basis.u_q * cur.a_q;
        out.times[0] = cur.t;
    }

    int col = 0;
    for (long step = 1; step <= nsteps; ++step) {
        SchemeConfig step_cfg = cfg;
        if (bdf2 && step == 1) step_cfg.scheme = TimeScheme::CN;  // second-order starter
        const StepResult res = rom_step(sys, cur, prev, step_cfg);
        prev = cur;
        cur = res.next;
        log_row(cur, prev, res.dissipation, res.xi0);
        if (nsamples > 0 && step % stride == 0 && col < ncols) {
            out.traj_phi.col(col) = sys.basis.u_phi * cur.a_phi;
            out.traj_q.col(col) = sys.basis.u_q * cur.a_q;
            out.times[col] = cur.t;
            ++col;
        }
    }
    return out;
}

}  // namespace eqrom
