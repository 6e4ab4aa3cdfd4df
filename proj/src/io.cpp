#include "eqrom/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eqrom {

namespace {

// ---------------------------------------------------------------- raw bytes

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    const uint64_t bits = std::bit_cast<uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct ByteReader {
    const std::string& data;
    size_t pos = 0;
    const std::string& path;

    void need(size_t count) const {
        if (pos + count > data.size()) throw IoError(path + ": truncated file");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(data[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(data[pos + i])) << (8 * i);
        pos += 8;
        return std::bit_cast<double>(v);
    }
    void f64_block(double* dst, size_t count) {
        need(8 * count);
        for (size_t i = 0; i < count; ++i) {
            uint64_t v = 0;
            for (int b = 0; b < 8; ++b)
                v |= static_cast<uint64_t>(static_cast<uint8_t>(data[pos + 8 * i + b])) << (8 * b);
            dst[i] = std::bit_cast<double>(v);
        }
        pos += 8 * count;
    }
    void expect_magic(const char* magic) {
        need(8);
        if (data.compare(pos, 8, magic) != 0)
            throw IoError(path + ": bad magic (expected " + magic + ")");
        pos += 8;
    }
};

void put_f64_block(std::string& out, const double* src, size_t count) {
    out.reserve(out.size() + 8 * count);
    for (size_t i = 0; i < count; ++i) put_f64(out, src[i]);
}

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

uint32_t checked_u32(Eigen::Index v, const char* what) {
    if (v < 0 || v > static_cast<Eigen::Index>(UINT32_MAX))
        throw IoError(std::string(what) + " does not fit the file format");
    return static_cast<uint32_t>(v);
}

// ---------------------------------------------------------------- csv bits

// Shortest representation that round-trips exactly.
std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double csv_parse(const std::string& s) {
    if (s.empty()) return std::nan("");
    return std::stod(s);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

// ------------------------------------------------------------------ config

namespace {

struct ConfigEntry {
    std::string value;
    bool consumed = false;
};

using ConfigMap = std::map<std::string, ConfigEntry>;  // "section.key" -> value

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

ConfigMap lex_config(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config key '" + key + "' appears before any [section]");
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        const std::string full = section + "." + key;
        if (map.count(full)) throw ConfigError("duplicate config key '" + full + "'");
        map[full] = {value, false};
    }
    return map;
}

class ConfigReader {
public:
    explicit ConfigReader(ConfigMap map) : map_(std::move(map)) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string take(const std::string& key, const std::string& fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        return it->second.value;
    }

    double take_double(const std::string& key, double fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        try {
            size_t used = 0;
            const double v = std::stod(it->second.value, &used);
            if (used != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': not a number: '" + it->second.value + "'");
        }
    }

    int take_int(const std::string& key, int fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        try {
            size_t used = 0;
            const int v = std::stoi(it->second.value, &used);
            if (used != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': not an integer: '" + it->second.value + "'");
        }
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        std::string v = it->second.value;
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config key '" + key + "': not a boolean: '" + it->second.value + "'");
    }

    void reject_unconsumed() const {
        for (const auto& [key, entry] : map_)
            if (!entry.consumed) throw ConfigError("unknown config key '" + key + "'");
    }

private:
    ConfigMap map_;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    ConfigReader cfg(lex_config(text));

    RunConfig rc;
    const ModelKind kind = model_kind_from_string(cfg.take("model.kind", "ac"));
    rc.model = make_default_spec(kind);
    rc.model.mobility = cfg.take_double("model.M", rc.model.mobility);
    rc.model.epsilon = cfg.take_double("model.epsilon", rc.model.epsilon);
    rc.model.a0 = cfg.take_double("model.a0", rc.model.a0);
    rc.model.b0 = cfg.take_double("model.b0", rc.model.b0);
    rc.model.gamma0 = cfg.take_double("model.gamma0", rc.model.gamma0);
    rc.model.energy_shift = cfg.take_double("model.A0", rc.model.energy_shift);
    rc.model.pfc_mean = cfg.take_double("model.pfc_mean", rc.model.pfc_mean);
    rc.model.pfc_amp = cfg.take_double("model.pfc_amp", rc.model.pfc_amp);
    rc.model.pfc_seed_radius = cfg.take_double("model.pfc_seed_radius", rc.model.pfc_seed_radius);
    rc.model.validate();

    const bool pfc = kind == ModelKind::PhaseFieldCrystal;
    const int nx = cfg.take_int("grid.Nx", 128);
    const int ny = cfg.take_int("grid.Ny", 128);
    const double lx = cfg.take_double("grid.Lx", pfc ? 100.0 : 1.0);
    const double ly = cfg.take_double("grid.Ly", pfc ? 100.0 : 1.0);
    rc.grid = Grid2D(nx, ny, lx, ly);

    const double default_T = pfc ? 100.0 : (kind == ModelKind::CahnHilliard ? 90.0 : 15.0);
    rc.dt = cfg.take_double("time.dt", 1e-3);
    rc.T = cfg.take_double("time.T", default_T);
    rc.sample_interval = cfg.take_double("time.sample_interval", 0.1);
    if (!(rc.dt > 0.0)) throw ConfigError("config key 'time.dt': must be > 0");
    if (rc.T < 0.0) throw ConfigError("config key 'time.T': must be >= 0");
    if (!(rc.sample_interval > 0.0)) throw ConfigError("config key 'time.sample_interval': must be > 0");

    rc.scheme.variant = rom_variant_from_string(cfg.take("rom.variant", "ii"));
    rc.scheme.scheme = time_scheme_from_string(cfg.take("rom.scheme", "cn"));
    rc.scheme.relaxed = cfg.take_bool("rom.relaxed", true);
    rc.scheme.eta = cfg.take_double("rom.eta", 0.99);
    rc.scheme.dt = rc.dt;
    if (!(rc.scheme.eta >= 0.0 && rc.scheme.eta <= 1.0))
        throw ConfigError("config key 'rom.eta': must lie in [0,1]");

    const bool has_rank = cfg.has("rom.rank");
    const bool has_threshold = cfg.has("rom.threshold");
    if (has_rank && has_threshold)
        throw ConfigError("config keys 'rom.rank' and 'rom.threshold' are mutually exclusive");
    rc.rank = cfg.take_int("rom.rank", 10);
    if (has_threshold) {
        rc.threshold = cfg.take_double("rom.threshold", 0.0);
        if (!(*rc.threshold > 0.0)) throw ConfigError("config key 'rom.threshold': must be > 0");
        rc.rank = 0;
    } else if (rc.rank < 1) {
        throw ConfigError("config key 'rom.rank': must be >= 1");
    }
    rc.deim = cfg.take_bool("rom.deim", false);
    rc.deim_rank = cfg.take_int("rom.deim_rank", 0);
    if (rc.deim && rc.deim_rank < 1)
        throw ConfigError("config key 'rom.deim_rank': must be >= 1 when deim is enabled");

    rc.snapshots_path = cfg.take("paths.snapshots", "");
    rc.basis_path = cfg.take("paths.basis", "");
    rc.energy_out = cfg.take("paths.energy_out", "");
    rc.traj_out = cfg.take("paths.traj_out", "");
    rc.report_out = cfg.take("paths.report_out", "");

    cfg.reject_unconsumed();
    return rc;
}

RunConfig parse_config_file(const std::string& path) { return parse_config(read_file(path)); }

// --------------------------------------------------------------- snapshots

void write_snapshots(const std::string& path, const SnapshotSet& snaps) {
    const Eigen::Index n = snaps.grid.size();
    if (snaps.phi.rows() != n || snaps.q.rows() != n || snaps.phi.cols() != snaps.q.cols() ||
        snaps.times.size() != snaps.phi.cols())
        throw DimensionError("write_snapshots: inconsistent snapshot set");

    std::string out;
    out.reserve(44 + 8 * static_cast<size_t>(snaps.phi.size() + snaps.q.size() + snaps.times.size()));
    out += "PODSNAP1";
    put_u32(out, checked_u32(snaps.grid.nx, "Nx"));
    put_u32(out, checked_u32(snaps.grid.ny, "Ny"));
    put_u32(out, checked_u32(snaps.phi.cols(), "m"));
    put_f64(out, snaps.grid.lx);
    put_f64(out, snaps.grid.ly);
    put_f64(out, snaps.sample_interval);
    put_f64_block(out, snaps.phi.data(), static_cast<size_t>(snaps.phi.size()));
    put_f64_block(out, snaps.q.data(), static_cast<size_t>(snaps.q.size()));
    put_f64_block(out, snaps.times.data(), static_cast<size_t>(snaps.times.size()));
    write_file_atomic(path, out);
}

SnapshotSet read_snapshots(const std::string& path) {
    const std::string bytes = read_file(path);
    ByteReader r{bytes, 0, path};
    r.expect_magic("PODSNAP1");
    const uint32_t nx = r.u32();
    const uint32_t ny = r.u32();
    const uint32_t m = r.u32();
    const double lx = r.f64();
    const double ly = r.f64();
    const double interval = r.f64();
    // Caps keep every size expression far from 64-bit overflow.
    if (nx == 0 || ny == 0 || m == 0 || nx > (1u << 16) || ny > (1u << 16) || m > (1u << 20))
        throw IoError(path + ": implausible snapshot dimensions");
    const uint64_t n = static_cast<uint64_t>(nx) * ny;
    const uint64_t expected = 44 + 8 * (2 * n * m + m);
    if (bytes.size() != expected)
        throw IoError(path + ": size mismatch (expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()) + ")");

    SnapshotSet s;
    s.grid = Grid2D(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
    s.sample_interval = interval;
    s.phi.resize(static_cast<Eigen::Index>(n), m);
    s.q.resize(static_cast<Eigen::Index>(n), m);
    s.times.resize(m);
    r.f64_block(s.phi.data(), n * m);
    r.f64_block(s.q.data(), n * m);
    r.f64_block(s.times.data(), m);
    if (!s.phi.allFinite() || !s.q.allFinite())
        throw IoError(path + ": non-finite snapshot values");
    return s;
}

// ------------------------------------------------------------------- basis

void write_basis(const std::string& path, const PodBasis& basis,
                 const std::optional<DeimOperator>& deim) {
    const Eigen::Index n = basis.grid.size();
    if (basis.u_phi.rows() != n || basis.u_q.rows() != n || basis.u_phi.cols() != basis.rank ||
        basis.u_q.cols() != basis.rank || basis.sv_phi.size() != basis.sv_q.size())
        throw DimensionError("write_basis: inconsistent basis");

    std::string out;
    out += "PODBASE1";
    put_u32(out, checked_u32(n, "n"));
    put_u32(out, checked_u32(basis.rank, "r"));
    put_u32(out, deim ? checked_u32(deim->rank(), "k_deim") : 0);
    put_u32(out, checked_u32(basis.sv_phi.size(), "nsv"));
    put_u32(out, checked_u32(basis.grid.nx, "Nx"));
    put_u32(out, checked_u32(basis.grid.ny, "Ny"));
    put_f64(out, basis.grid.lx);
    put_f64(out, basis.grid.ly);
    put_f64_block(out, basis.u_phi.data(), static_cast<size_t>(basis.u_phi.size()));
    put_f64_block(out, basis.u_q.data(), static_cast<size_t>(basis.u_q.size()));
    put_f64_block(out, basis.sv_phi.data(), static_cast<size_t>(basis.sv_phi.size()));
    put_f64_block(out, basis.sv_q.data(), static_cast<size_t>(basis.sv_q.size()));
    if (deim) {
        put_f64_block(out, deim->w.data(), static_cast<size_t>(deim->w.size()));
        for (uint32_t idx : deim->indices) put_u32(out, idx);
        put_f64_block(out, deim->lift.data(), static_cast<size_t>(deim->lift.size()));
    }
    write_file_atomic(path, out);
}

BasisFile read_basis(const std::string& path) {
    const std::string bytes = read_file(path);
    ByteReader r{bytes, 0, path};
    r.expect_magic("PODBASE1");
    const uint32_t n = r.u32();
    const uint32_t rank = r.u32();
    const uint32_t k = r.u32();
    const uint32_t nsv = r.u32();
    const uint32_t nx = r.u32();
    const uint32_t ny = r.u32();
    const double lx = r.f64();
    const double ly = r.f64();
    if (n == 0 || rank == 0 || static_cast<uint64_t>(nx) * ny != n)
        throw IoError(path + ": inconsistent basis dimensions");
    if (rank > n) throw IoError(path + ": rank exceeds grid size");
    if (nx > (1u << 16) || ny > (1u << 16) || nsv > (1u << 20) || k > n)
        throw IoError(path + ": implausible basis dimensions");

    BasisFile out;
    out.basis.grid = Grid2D(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
    out.basis.rank = static_cast<int>(rank);
    out.basis.weight = out.basis.grid.cell_weight();
    out.basis.u_phi.resize(n, rank);
    out.basis.u_q.resize(n, rank);
    out.basis.sv_phi.resize(nsv);
    out.basis.sv_q.resize(nsv);
    r.f64_block(out.basis.u_phi.data(), static_cast<uint64_t>(n) * rank);
    r.f64_block(out.basis.u_q.data(), static_cast<uint64_t>(n) * rank);
    r.f64_block(out.basis.sv_phi.data(), nsv);
    r.f64_block(out.basis.sv_q.data(), nsv);
    out.basis.padded_phi.assign(rank, 0);
    out.basis.padded_q.assign(rank, 0);
    if (k > 0) {
        DeimOperator op;
        op.w.resize(n, k);
        r.f64_block(op.w.data(), static_cast<uint64_t>(n) * k);
        op.indices.resize(k);
        std::set<uint32_t> seen;
        for (uint32_t i = 0; i < k; ++i) {
            op.indices[i] = r.u32();
            if (op.indices[i] >= n || !seen.insert(op.indices[i]).second)
                throw IoError(path + ": invalid DEIM indices");
        }
        op.lift.resize(n, k);
        r.f64_block(op.lift.data(), static_cast<uint64_t>(n) * k);
        out.deim = std::move(op);
    }
    if (r.pos != bytes.size()) throw IoError(path + ": trailing bytes");

    // Orthonormality check in the weighted inner product.
    const double w = out.basis.weight;
    const Eigen::MatrixXd gram_phi = w * (out.basis.u_phi.transpose() * out.basis.u_phi);
    const Eigen::MatrixXd gram_q = w * (out.basis.u_q.transpose() * out.basis.u_q);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(rank, rank);
    if ((gram_phi - eye).cwiseAbs().maxCoeff() > 1e-10 ||
        (gram_q - eye).cwiseAbs().maxCoeff() > 1e-10)
        throw IoError(path + ": basis failed the orthonormality check");
    return out;
}

// -------------------------------------------------------------------- csvs

void write_energy_csv(const std::string& path, const EnergyLog& log) {
    std::string out = "t,energy,modified_energy,dissipation,xi0,mass,eq_drift\n";
    for (const EnergyRow& row : log) {
        out += csv_num(row.t) + "," + csv_num(row.energy) + "," + csv_num(row.modified_energy) + "," +
               csv_num(row.dissipation) + "," + csv_num(row.xi0) + "," + csv_num(row.mass) + "," +
               csv_num(row.eq_drift) + "\n";
    }
    write_file_atomic(path, out);
}

EnergyLog read_energy_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (split_csv_row(line).size() != 7) throw IoError(path + ": unexpected energy CSV header");
    EnergyLog log;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split_csv_row(line);
        if (cells.size() != 7) throw IoError(path + ": malformed energy CSV row");
        EnergyRow row;
        row.t = csv_parse(cells[0]);
        row.energy = csv_parse(cells[1]);
        row.modified_energy = csv_parse(cells[2]);
        row.dissipation = csv_parse(cells[3]);
        row.xi0 = csv_parse(cells[4]);
        row.mass = csv_parse(cells[5]);
        row.eq_drift = csv_parse(cells[6]);
        log.push_back(row);
    }
    return log;
}

void write_singular_values_csv(const std::string& path, const Eigen::VectorXd& sv_phi,
                               const Eigen::VectorXd& sv_q) {
    if (sv_phi.size() != sv_q.size())
        throw DimensionError("write_singular_values_csv: length mismatch");
    std::string out = "index,sigma_phi,sigma_q\n";
    for (Eigen::Index i = 0; i < sv_phi.size(); ++i)
        out += std::to_string(i + 1) + "," + csv_num(sv_phi[i]) + "," + csv_num(sv_q[i]) + "\n";
    write_file_atomic(path, out);
}

// ----------------------------------------------------------------- compare

namespace {

double energy_at_time(const EnergyLog& log, double t, const char* which) {
    double best = std::nan("");
    double best_gap = 1e300;
    for (const EnergyRow& row : log) {
        const double gap = std::abs(row.t - t);
        if (gap < best_gap) {
            best_gap = gap;
            best = row.energy;
        }
    }
    if (!(best_gap <= 1e-6 + 1e-9 * std::abs(t)))
        throw ConfigError(std::string(which) + " energy log has no row near t = " + std::to_string(t));
    return best;
}

}  // namespace

CompareReport compare_runs(const SnapshotSet& fom, const SnapshotSet& rom_traj,
                           const EnergyLog& fom_energy, const EnergyLog& rom_energy) {
    require_same_grid(fom.grid, rom_traj.grid, "compare_runs");
    if (fom.columns() != rom_traj.columns())
        throw DimensionError("compare_runs: column counts differ");
    if (fom_energy.empty() || rom_energy.empty())
        throw ConfigError("compare_runs: empty energy log");

    const int m = fom.columns();
    CompareReport rep;
    rep.times.resize(m);
    rep.state_rel_err.resize(m);
    rep.energy_abs_err.resize(m);
    rep.energy_rel0_err.resize(m);

    const double e0 = std::abs(fom_energy.front().energy);
    if (!(e0 > 0.0)) throw NumericError("compare_runs: initial energy is zero");

    double sum_state = 0.0, sum_eabs = 0.0;
    for (int j = 0; j < m; ++j) {
        const double t = fom.times[j];
        if (std::abs(t - rom_traj.times[j]) > 1e-9 * (1.0 + std::abs(t)))
            throw ConfigError("compare_runs: sample times differ at column " + std::to_string(j));
        rep.times[j] = t;
        const double denom = fom.phi.col(j).norm();
        rep.state_rel_err[j] =
            denom > 0.0 ? (rom_traj.phi.col(j) - fom.phi.col(j)).norm() / denom : 0.0;
        const double ef = energy_at_time(fom_energy, t, "FOM");
        const double er = energy_at_time(rom_energy, t, "ROM");
        rep.energy_abs_err[j] = std::abs(er - ef);
        rep.energy_rel0_err[j] = rep.energy_abs_err[j] / e0;
        sum_state += rep.state_rel_err[j];
        sum_eabs += rep.energy_abs_err[j];
    }
    rep.max_state_err = rep.state_rel_err.maxCoeff();
    rep.mean_state_err = sum_state / m;
    rep.max_energy_rel0 = rep.energy_rel0_err.maxCoeff();
    rep.mean_energy_abs = sum_eabs / m;
    return rep;
}

void write_compare_csv(const std::string& path, const CompareReport& rep) {
    std::string out = "t,state_rel_err,energy_abs_err,energy_rel0_err\n";
    for (Eigen::Index j = 0; j < rep.times.size(); ++j)
        out += csv_num(rep.times[j]) + "," + csv_num(rep.state_rel_err[j]) + "," +
               csv_num(rep.energy_abs_err[j]) + "," + csv_num(rep.energy_rel0_err[j]) + "\n";
    out += "max," + csv_num(rep.max_state_err) + "," + csv_num(rep.energy_abs_err.maxCoeff()) +
           "," + csv_num(rep.max_energy_rel0) + "\n";
    out += "mean," + csv_num(rep.mean_state_err) + "," + csv_num(rep.mean_energy_abs) + ",\n";
    write_file_atomic(path, out);
}

}  // namespace eqrom
