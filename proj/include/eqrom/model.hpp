#ifndef EQROM_MODEL_HPP
#define EQROM_MODEL_HPP

#include <functional>
#include <string>

#include "eqrom/spectral.hpp"

namespace eqrom {

enum class ModelKind { AllenCahn, CahnHilliard, PhaseFieldCrystal };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Model parameters. Defaults per kind reproduce the built-in benchmark
/// setups; see make_default_spec.
struct ModelSpec {
    ModelKind kind = ModelKind::AllenCahn;
    double mobility = 1.0;      // M > 0
    double epsilon = 0.02;      // interface width (AC/CH)
    double a0 = 1.0;            // PFC linear constant
    double b0 = 0.325;          // PFC quadratic constant
    double gamma0 = 1.0;        // stabilization constant > 0
    double energy_shift = 0.0;  // additive constant A0, reporting only

    // PFC seeding knobs (crystalline dots in the initial profile).
    double pfc_mean = 0.06;
    double pfc_amp = 0.2;
    double pfc_seed_radius = 10.0;

    void validate() const;
};

/// Benchmark defaults: AC (M=1, eps=0.02, gamma0=1), CH (M=0.01, eps=0.02,
/// gamma0=2), PFC (M=1, a0=1, b0=0.325, gamma0=1).
ModelSpec make_default_spec(ModelKind kind);

/// The EQ reformulation of a model on a concrete grid: stabilized linear
/// operator L0 (with inverse), mobility split G = Gs + Ga, and the pointwise
/// auxiliary-variable maps h (phi -> q) and g = dh/dphi.
struct EqModel {
    Grid2D grid;
    ModelSpec spec;

    FourierMultiplier l0;        // symmetric positive definite
    FourierMultiplier l0_inv;    // elementwise reciprocal of l0
    FourierMultiplier gs;        // symmetric mobility symbol, >= 0
    Eigen::VectorXd ga_coeff;    // skew mobility: f -> Re IFFT(i*ga_coeff.*FFT(f))
    bool has_skew = false;

    std::function<double(double)> h;  // auxiliary variable q = h(phi)
    std::function<double(double)> g;  // dq/dphi

    Field h_of(const Field& phi) const;
    Field g_of(const Field& phi) const;
    /// Gs f (+ Ga f when a skew part is present).
    Field apply_mobility(const Field& f) const;
};

EqModel build_model(const ModelSpec& spec, const Grid2D& grid);

/// Quadratized energy 1/2 (phi, L0 phi) + 1/2 (q, q). The additive constant
/// A0 is omitted, matching the discrete-energy definitions used by the
/// schemes; spec.energy_shift is available to callers that want it.
double eq_energy(const EqModel& model, const Field& phi, const Field& q);

/// Built-in initial profiles: the seven-disk tanh profile for AC/CH, three
/// crystalline dots for PFC.
Field initial_condition(const ModelSpec& spec, const Grid2D& grid);

/// (phi, 1) = hx*hy*sum(phi), the discrete total mass.
double field_mass(const Field& phi);

}  // namespace eqrom

#endif
