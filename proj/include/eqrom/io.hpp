#ifndef EQROM_IO_HPP
#define EQROM_IO_HPP

#include <optional>
#include <string>

#include "eqrom/stepper.hpp"

namespace eqrom {

/// Run configuration: sectioned key = value text with per-model defaults.
/// Sections/keys:
///   [model] kind M epsilon a0 b0 gamma0 A0 pfc_mean pfc_amp pfc_seed_radius
///   [grid]  Nx Ny Lx Ly
///   [time]  dt T sample_interval
///   [rom]   variant scheme relaxed eta rank threshold deim deim_rank
///   [paths] snapshots basis energy_out traj_out report_out
struct RunConfig {
    ModelSpec model;
    Grid2D grid;
    double dt = 1e-3;
    double T = 0.0;
    double sample_interval = 0.1;

    SchemeConfig scheme;
    int rank = 0;                  // exactly one of rank/threshold is active
    std::optional<double> threshold;
    bool deim = false;
    int deim_rank = 0;

    std::string snapshots_path;
    std::string basis_path;
    std::string energy_out;
    std::string traj_out;
    std::string report_out;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Snapshot container format "PODSNAP1" (all little-endian):
//   magic[8], u32 Nx, u32 Ny, u32 m, f64 Lx, f64 Ly, f64 sample_interval,
//   m columns of n f64 (Phi, x-fastest), m columns of n f64 (Q),
//   m f64 sample times.
void write_snapshots(const std::string& path, const SnapshotSet& snaps);
SnapshotSet read_snapshots(const std::string& path);

// Basis container format "PODBASE1":
//   magic[8], u32 n, u32 r, u32 k_deim (0 if none), u32 nsv,
//   u32 Nx, u32 Ny, f64 Lx, f64 Ly,
//   U_phi (n*r f64, column-major), U_q, sigma_phi (nsv), sigma_q (nsv),
//   then if k_deim > 0: W (n*k), indices (k u32), lift matrix (n*k).
// Basis orthonormality is re-verified on read (weighted, tolerance 1e-10).
void write_basis(const std::string& path, const PodBasis& basis,
                 const std::optional<DeimOperator>& deim = std::nullopt);
struct BasisFile {
    PodBasis basis;
    std::optional<DeimOperator> deim;
};
BasisFile read_basis(const std::string& path);

/// Header `t,energy,modified_energy,dissipation,xi0,mass,eq_drift`; one row
/// per log entry; NaN columns are left empty.
void write_energy_csv(const std::string& path, const EnergyLog& log);
EnergyLog read_energy_csv(const std::string& path);

void write_singular_values_csv(const std::string& path, const Eigen::VectorXd& sv_phi,
                               const Eigen::VectorXd& sv_q);

struct CompareReport {
    Eigen::VectorXd times;
    Eigen::VectorXd state_rel_err;    // ||phi_rom - phi_fom|| / ||phi_fom||
    Eigen::VectorXd energy_abs_err;   // |E_rom - E_fom| at matched times
    Eigen::VectorXd energy_rel0_err;  // |E_rom - E_fom| / |E_fom(0)|
    double max_state_err = 0.0;
    double mean_state_err = 0.0;
    double max_energy_rel0 = 0.0;
    double mean_energy_abs = 0.0;
};

CompareReport compare_runs(const SnapshotSet& fom, const SnapshotSet& rom_traj,
                           const EnergyLog& fom_energy, const EnergyLog& rom_energy);

void write_compare_csv(const std::string& path, const CompareReport& report);

}  // namespace eqrom

#endif
