// Command-line driver for the reduced-order-model pipeline:
//   fom      run the full-order solver, write snapshots + energy log
//   svd      singular-value spectra of a snapshot file
//   pod      build a POD basis (optionally with a DEIM section)
//   rom      integrate a reduced model from a basis file
//   compare  per-sample-time state/energy errors between FOM and ROM runs
//
// Exit codes: 0 success, 2 config error, 3 numeric/solver error, 4 I/O error.

#include "CLI11.hpp"

#include <iostream>

#include "eqrom/io.hpp"

namespace {

using namespace eqrom;

std::string resolve_path(const std::string& cli_value, const std::string& config_value,
                         const char* key) {
    if (!cli_value.empty()) return cli_value;
    if (!config_value.empty()) return config_value;
    throw ConfigError(std::string("missing required path '") + key +
                      "' (pass the flag or set it in [paths])");
}

int cmd_fom(const std::string& config_path, const std::string& snapshots_out,
            const std::string& energy_out) {
    const RunConfig rc = parse_config_file(config_path);
    const std::string snap_path = resolve_path(snapshots_out, rc.snapshots_path, "snapshots");
    const std::string energy_path = resolve_path(energy_out, rc.energy_out, "energy_out");

    const EqModel model = build_model(rc.model, rc.grid);
    std::cerr << "fom: " << to_string(rc.model.kind) << " " << rc.grid.nx << "x" << rc.grid.ny
              << ", dt = " << rc.dt << ", T = " << rc.T << ", sampling every " << rc.sample_interval
              << "\n";
    const FomRunResult run = run_fom(model, rc.dt, rc.T, rc.sample_interval);
    write_snapshots(snap_path, run.snapshots);
    write_energy_csv(energy_path, run.log);
    std::cerr << "fom: wrote " << run.snapshots.columns() << " snapshot columns to " << snap_path
              << " and " << run.log.size() << " energy rows to " << energy_path << "\n";
    return 0;
}

int cmd_svd(const std::string& snapshots_path, const std::string& out_csv) {
    const SnapshotSet snaps = read_snapshots(snapshots_path);
    const double w = snaps.grid.cell_weight();
    const WeightedPod pod_phi = pod_method_of_snapshots(snaps.phi, w, 1);
    const WeightedPod pod_q = pod_method_of_snapshots(snaps.q, w, 1);
    write_singular_values_csv(out_csv, pod_phi.sv, pod_q.sv);
    std::cerr << "svd: wrote " << pod_phi.sv.size() << " singular values to " << out_csv << "\n";
    return 0;
}

int cmd_pod(const std::string& snapshots_path, int rank, double threshold,
            const std::string& basis_out, int deim_rank, const std::string& config_path) {
    const SnapshotSet snaps = read_snapshots(snapshots_path);
    int r = rank;
    if (r == 0) {
        const WeightedPod probe = pod_method_of_snapshots(snaps.phi, snaps.grid.cell_weight(), 1);
        r = truncation_rank(probe.sv, threshold);
        std::cerr << "pod: threshold " << threshold << " selects rank " << r << "\n";
    }
    const PodBasis basis = compute_basis(snaps, r);
    if (basis.any_padding())
        std::cerr << "pod: warning: requested rank exceeds the numerical rank; "
                     "trailing columns are random orthonormal padding\n";

    std::optional<DeimOperator> deim;
    if (deim_rank > 0) {
        if (config_path.empty())
            throw ConfigError("--deim requires --config (the model defines the nonlinearity)");
        const RunConfig rc = parse_config_file(config_path);
        const EqModel model = build_model(rc.model, snaps.grid);
        Eigen::MatrixXd nsnaps(snaps.grid.size(), snaps.columns());
        for (int j = 0; j < snaps.columns(); ++j)
            nsnaps.col(j) = model.g_of(Field(snaps.grid, snaps.phi.col(j))).values;
        deim = deim_build(nsnaps, snaps.grid.cell_weight(), deim_rank);
        std::cerr << "pod: DEIM rank " << deim_rank << ", cond(P^T W) = " << deim->ptw_condition
                  << "\n";
    }
    write_basis(basis_out, basis, deim);
    std::cerr << "pod: wrote rank-" << r << " basis to " << basis_out << "\n";
    return 0;
}

int cmd_rom(const std::string& config_path, const std::string& basis_path,
            const std::string& variant, const std::string& scheme, int relaxed_flag,
            double eta_flag, const std::string& traj_out, const std::string& energy_out) {
    RunConfig rc = parse_config_file(config_path);
    const std::string basis_file = resolve_path(basis_path, rc.basis_path, "basis");
    const std::string traj_path = resolve_path(traj_out, rc.traj_out, "traj_out");
    const std::string energy_path = resolve_path(energy_out, rc.energy_out, "energy_out");

    if (!variant.empty()) rc.scheme.variant = rom_variant_from_string(variant);
    if (!scheme.empty()) rc.scheme.scheme = time_scheme_from_string(scheme);
    if (relaxed_flag != 0) rc.scheme.relaxed = relaxed_flag > 0;
    if (eta_flag >= 0.0) rc.scheme.eta = eta_flag;
    rc.scheme.dt = rc.dt;
    rc.scheme.validate();

    BasisFile bf = read_basis(basis_file);
    if (!(bf.basis.grid == rc.grid))
        throw ConfigError("basis grid does not match the [grid] block of the config");

    const EqModel model = build_model(rc.model, rc.grid);
    RomSystem sys = assemble_static(bf.basis, model);
    if (rc.deim) {
        if (!bf.deim) throw ConfigError("config enables deim but the basis file has no DEIM section");
        attach_deim(sys, *bf.deim);
    }

    const Field phi0 = initial_condition(rc.model, rc.grid);
    const ReducedState a0 = init_reduced(sys, phi0);

    std::cerr << "rom: variant " << to_string(rc.scheme.variant) << ", scheme "
              << to_string(rc.scheme.scheme) << (rc.scheme.relaxed ? " relaxed" : "")
              << ", r = " << sys.rank() << ", dt = " << rc.dt << ", T = " << rc.T << "\n";
    if (rc.scheme.relaxed && rc.scheme.scheme == TimeScheme::BDF2 &&
        rc.scheme.variant == RomVariant::I)
        std::cerr << "rom: note: relaxed BDF2 for variant I is an extension beyond the printed "
                     "scheme family\n";

    const RomRunResult run = run_rom(sys, a0, rc.scheme, rc.T, rc.sample_interval);

    SnapshotSet traj;
    traj.grid = rc.grid;
    traj.phi = run.traj_phi;
    traj.q = run.traj_q;
    traj.times = run.times;
    traj.sample_interval = run.sample_interval;
    write_snapshots(traj_path, traj);
    write_energy_csv(energy_path, run.log);
    std::cerr << "rom: wrote trajectory to " << traj_path << " and energy log to " << energy_path
              << "\n";
    return 0;
}

int cmd_compare(const std::string& fom_energy, const std::string& rom_energy,
                const std::string& fom_snapshots, const std::string& rom_traj,
                const std::string& report) {
    const SnapshotSet fom = read_snapshots(fom_snapshots);
    const SnapshotSet rom = read_snapshots(rom_traj);
    const EnergyLog fe = read_energy_csv(fom_energy);
    const EnergyLog re = read_energy_csv(rom_energy);
    const CompareReport rep = compare_runs(fom, rom, fe, re);
    write_compare_csv(report, rep);
    std::cerr << "compare: max state error " << rep.max_state_err << ", mean "
              << rep.mean_state_err << "; max |dE|/E0 " << rep.max_energy_rel0 << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving reduced-order models for gradient-flow PDEs"};
    app.require_subcommand(1);

    std::string config, snapshots_out, energy_out;
    auto* fom = app.add_subcommand("fom", "Run the full-order model");
    fom->add_option("--config", config)->required();
    fom->add_option("--snapshots-out", snapshots_out);
    fom->add_option("--energy-out", energy_out);

    std::string svd_snapshots, svd_out;
    auto* svd = app.add_subcommand("svd", "Singular-value spectra of a snapshot file");
    svd->add_option("--snapshots", svd_snapshots)->required();
    svd->add_option("--out", svd_out)->required();

    std::string pod_snapshots, pod_basis_out, pod_config;
    int pod_rank = 0, pod_deim = 0;
    double pod_threshold = 0.0;
    auto* pod = app.add_subcommand("pod", "Build a POD basis from snapshots");
    pod->add_option("--snapshots", pod_snapshots)->required();
    auto* rank_opt = pod->add_option("--rank", pod_rank);
    auto* thr_opt = pod->add_option("--threshold", pod_threshold);
    rank_opt->excludes(thr_opt);
    thr_opt->excludes(rank_opt);
    pod->add_option("--basis-out", pod_basis_out)->required();
    pod->add_option("--deim", pod_deim);
    pod->add_option("--config", pod_config);

    std::string rom_config, rom_basis, rom_variant, rom_scheme, rom_traj, rom_energy;
    int rom_relaxed = 0;  // tri-state: -1 off, 0 from config, +1 on
    double rom_eta = -1.0;
    auto* rom = app.add_subcommand("rom", "Integrate a reduced-order model");
    rom->add_option("--config", rom_config)->required();
    rom->add_option("--basis", rom_basis);
    rom->add_option("--variant", rom_variant)->check(CLI::IsMember({"vanilla", "i", "ii"}));
    rom->add_option("--scheme", rom_scheme)->check(CLI::IsMember({"cn", "bdf2"}));
    rom->add_flag("--relaxed{1},--no-relaxed{-1}", rom_relaxed,
                  "Force the relaxation step on/off (default: from config)");
    rom->add_option("--eta", rom_eta);
    rom->add_option("--traj-out", rom_traj);
    rom->add_option("--energy-out", rom_energy);

    std::string cmp_fe, cmp_re, cmp_fs, cmp_rt, cmp_report;
    auto* cmp = app.add_subcommand("compare", "Compare a ROM run against its FOM reference");
    cmp->add_option("--fom-energy", cmp_fe)->required();
    cmp->add_option("--rom-energy", cmp_re)->required();
    cmp->add_option("--fom-snapshots", cmp_fs)->required();
    cmp->add_option("--rom-traj", cmp_rt)->required();
    cmp->add_option("--report", cmp_report)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(fom)) return cmd_fom(config, snapshots_out, energy_out);
        if (app.got_subcommand(svd)) return cmd_svd(svd_snapshots, svd_out);
        if (app.got_subcommand(pod)) {
            if (pod_rank == 0 && pod_threshold <= 0.0)
                throw eqrom::ConfigError("pod: exactly one of --rank or --threshold is required");
            return cmd_pod(pod_snapshots, pod_rank, pod_threshold, pod_basis_out, pod_deim,
                           pod_config);
        }
        if (app.got_subcommand(rom))
            return cmd_rom(rom_config, rom_basis, rom_variant, rom_scheme, rom_relaxed, rom_eta,
                           rom_traj, rom_energy);
        if (app.got_subcommand(cmp)) return cmd_compare(cmp_fe, cmp_re, cmp_fs, cmp_rt, cmp_report);
    } catch (const eqrom::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const eqrom::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const eqrom::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
