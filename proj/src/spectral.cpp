#include "eqrom/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace eqrom {

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One c2c transform pair per grid, with per-instance buffers. Instances are
// cached thread_local so concurrent callers never share workspace.
class Dft2D {
public:
    explicit Dft2D(const Grid2D& g) : n_(g.size()) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_2d(g.ny, g.nx, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(g.ny, g.nx, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Dft2D() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Dft2D(const Dft2D&) = delete;
    Dft2D& operator=(const Dft2D&) = delete;

    std::complex<double>* buffer() { return reinterpret_cast<std::complex<double>*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }
    int size() const { return n_; }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

Dft2D& dft_for(const Grid2D& g) {
    thread_local std::unordered_map<uint64_t, std::unique_ptr<Dft2D>> cache;
    const uint64_t key = (static_cast<uint64_t>(g.nx) << 32) | static_cast<uint64_t>(g.ny);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Dft2D>(g)).first;
    return *it->second;
}

void check_finite(const Field& f, const char* where) {
    if (!f.values.allFinite()) throw NumericError(std::string(where) + ": non-finite input field");
}

// Shared core: load f, transform, scale spectrum by (re + i*im) tables,
// inverse-transform, enforce the imaginary-residue bound, return real part.
Eigen::VectorXd transform_scaled(const Grid2D& g, const Eigen::VectorXd& f,
                                 const Eigen::VectorXd* re, const Eigen::VectorXd* im,
                                 const char* where) {
    const int n = g.size();
    Dft2D& dft = dft_for(g);
    std::complex<double>* buf = dft.buffer();
    for (int idx = 0; idx < n; ++idx) buf[idx] = std::complex<double>(f[idx], 0.0);
    dft.forward();
    if (re && im) {
        for (int idx = 0; idx < n; ++idx)
            buf[idx] *= std::complex<double>((*re)[idx], (*im)[idx]);
    } else if (re) {
        for (int idx = 0; idx < n; ++idx) buf[idx] *= (*re)[idx];
    } else {
        for (int idx = 0; idx < n; ++idx) buf[idx] *= std::complex<double>(0.0, (*im)[idx]);
    }
    dft.backward();
    const double scale = 1.0 / n;
    double max_imag = 0.0;
    Eigen::VectorXd out(n);
    for (int idx = 0; idx < n; ++idx) {
        out[idx] = buf[idx].real() * scale;
        max_imag = std::max(max_imag, std::abs(buf[idx].imag()) * scale);
    }
    const double fmax = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    if (max_imag > 1e-10 * fmax)
        throw NumericError(std::string(where) + ": imaginary residue " + std::to_string(max_imag) +
                           " exceeds 1e-10 * max|f|; symbol symmetry is broken");
    return out;
}

}  // namespace

void wavenumber_table(const Grid2D& g, Eigen::VectorXi& k, Eigen::VectorXi& l) {
    const int n = g.size();
    k.resize(n);
    l.resize(n);
    for (int j = 0; j < g.ny; ++j) {
        const int lj = (j <= g.ny / 2) ? j : j - g.ny;
        for (int i = 0; i < g.nx; ++i) {
            const int ki = (i <= g.nx / 2) ? i : i - g.nx;
            const int idx = j * g.nx + i;
            k[idx] = ki;
            l[idx] = lj;
        }
    }
}

Eigen::VectorXd laplacian_eigenvalues(const Grid2D& g) {
    Eigen::VectorXi k, l;
    wavenumber_table(g, k, l);
    const double cx = 2.0 * M_PI / g.lx;
    const double cy = 2.0 * M_PI / g.ly;
    Eigen::VectorXd lam(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        const double a = cx * k[idx];
        const double b = cy * l[idx];
        lam[idx] = a * a + b * b;
    }
    return lam;
}

FourierMultiplier laplacian_symbol(const Grid2D& g) {
    return FourierMultiplier(g, -laplacian_eigenvalues(g));
}

FourierMultiplier identity_symbol(const Grid2D& g) {
    return FourierMultiplier(g, Eigen::VectorXd::Ones(g.size()));
}

Eigen::VectorXd dx_coefficients(const Grid2D& g) {
    Eigen::VectorXi k, l;
    wavenumber_table(g, k, l);
    const double cx = 2.0 * M_PI / g.lx;
    Eigen::VectorXd c(g.size());
    for (int idx = 0; idx < g.size(); ++idx)
        c[idx] = (k[idx] == g.nx / 2) ? 0.0 : cx * k[idx];
    return c;
}

Eigen::VectorXd dy_coefficients(const Grid2D& g) {
    Eigen::VectorXi k, l;
    wavenumber_table(g, k, l);
    const double cy = 2.0 * M_PI / g.ly;
    Eigen::VectorXd c(g.size());
    for (int idx = 0; idx < g.size(); ++idx)
        c[idx] = (l[idx] == g.ny / 2) ? 0.0 : cy * l[idx];
    return c;
}

Field apply_multiplier(const FourierMultiplier& m, const Field& f) {
    require_same_grid(m.grid, f.grid, "apply_multiplier");
    check_finite(f, "apply_multiplier");
    return Field(f.grid, transform_scaled(f.grid, f.values, &m.symbol, nullptr, "apply_multiplier"));
}

Field apply_imag_multiplier(const Grid2D& g, const Eigen::VectorXd& c, const Field& f) {
    require_same_grid(g, f.grid, "apply_imag_multiplier");
    check_finite(f, "apply_imag_multiplier");
    return Field(f.grid, transform_scaled(g, f.values, nullptr, &c, "apply_imag_multiplier"));
}

Eigen::MatrixXd apply_multiplier_columns(const FourierMultiplier& m, const Eigen::MatrixXd& cols) {
    if (cols.rows() != m.grid.size())
        throw DimensionError("apply_multiplier_columns: row count does not match grid");
    Eigen::MatrixXd out(cols.rows(), cols.cols());
    for (Eigen::Index c = 0; c < cols.cols(); ++c)
        out.col(c) = transform_scaled(m.grid, cols.col(c), &m.symbol, nullptr, "apply_multiplier_columns");
    return out;
}

Eigen::MatrixXd apply_imag_multiplier_columns(const Grid2D& g, const Eigen::VectorXd& c,
                                              const Eigen::MatrixXd& cols) {
    if (cols.rows() != g.size())
        throw DimensionError("apply_imag_multiplier_columns: row count does not match grid");
    Eigen::MatrixXd out(cols.rows(), cols.cols());
    for (Eigen::Index col = 0; col < cols.cols(); ++col)
        out.col(col) = transform_scaled(g, cols.col(col), nullptr, &c, "apply_imag_multiplier_columns");
    return out;
}

std::pair<Field, Field> gradient(const Field& f) {
    return {apply_imag_multiplier(f.grid, dx_coefficients(f.grid), f),
            apply_imag_multiplier(f.grid, dy_coefficients(f.grid), f)};
}

Field divergence(const Field& fx, const Field& fy) {
    require_same_grid(fx.grid, fy.grid, "divergence");
    Field out = apply_imag_multiplier(fx.grid, dx_coefficients(fx.grid), fx);
    out.values += apply_imag_multiplier(fy.grid, dy_coefficients(fy.grid), fy).values;
    return out;
}

double inner_product(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid, "inner_product");
    return f.grid.cell_weight() * f.values.dot(g.values);
}

double norm2(const Field& f) { return std::sqrt(inner_product(f, f)); }

}  // namespace eqrom
