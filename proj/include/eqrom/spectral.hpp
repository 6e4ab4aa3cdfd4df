#ifndef EQROM_SPECTRAL_HPP
#define EQROM_SPECTRAL_HPP

#include <Eigen/Core>

#include "eqrom/grid.hpp"

namespace eqrom {

// Pseudo-spectral operators for the periodic grid.
//
// Spectral layout (frozen; all symbol tables use it):
//   Fields are flat arrays with x fastest (flat = j*Nx + i). The 2D DFT is the
//   unnormalized complex transform over (y,x); the coefficient stored at flat
//   index j*Nx + i belongs to the wavenumber pair
//       k = (i <= Nx/2) ? i : i - Nx,   k in {-Kx+1, ..., Kx},  Kx = Nx/2,
//       l = (j <= Ny/2) ? j : j - Ny,   l in {-Ky+1, ..., Ky},  Ky = Ny/2,
//   i.e. the standard DFT ordering 0, 1, ..., Kx, -Kx+1, ..., -1 per axis.
//   The Laplacian eigenvalue of mode (k,l) is
//       lambda_{k,l} = (2*pi*k/Lx)^2 + (2*pi*l/Ly)^2,
//   and the inverse transform divides by Nx*Ny.

/// Diagonal operator in Fourier space with a real symbol. Symbols that are
/// even in (k,l) map real fields to real fields; application asserts the
/// imaginary residue stays below 1e-10 * max|f|.
struct FourierMultiplier {
    Grid2D grid;
    Eigen::VectorXd symbol;  // spectral layout above

    FourierMultiplier() = default;
    FourierMultiplier(const Grid2D& g, Eigen::VectorXd s) : grid(g), symbol(std::move(s)) {
        if (symbol.size() != g.size())
            throw DimensionError("FourierMultiplier: symbol length does not match grid");
    }
};

/// Signed integer wavenumbers (k, l) for every flat index; the single source
/// of truth all symbol constructors are built from.
void wavenumber_table(const Grid2D& g, Eigen::VectorXi& k, Eigen::VectorXi& l);

/// lambda_{k,l} table in spectral layout.
Eigen::VectorXd laplacian_eigenvalues(const Grid2D& g);

/// Symbol of the discrete Laplacian: -lambda_{k,l}.
FourierMultiplier laplacian_symbol(const Grid2D& g);

FourierMultiplier identity_symbol(const Grid2D& g);

/// Coefficient tables c for the first-derivative operators d/dx, d/dy, applied
/// as f -> Re IFFT(i * c .* FFT(f)). Odd in the respective wavenumber; the
/// Nyquist rows are zeroed so the operator is exactly skew-adjoint on real
/// fields. Kept for completeness; unused by the built-in models.
Eigen::VectorXd dx_coefficients(const Grid2D& g);
Eigen::VectorXd dy_coefficients(const Grid2D& g);

/// inverse-FFT(symbol .* FFT(f)). Throws NumericError if the input is not
/// finite or the imaginary residue after the inverse transform exceeds
/// 1e-10 * max|f| (signals a non-even symbol).
Field apply_multiplier(const FourierMultiplier& m, const Field& f);

/// f -> Re IFFT(i * c .* FFT(f)); realizes skew operators from odd tables.
Field apply_imag_multiplier(const Grid2D& g, const Eigen::VectorXd& c, const Field& f);

/// Spectral gradient (d/dx f, d/dy f) and divergence of a vector field,
/// built from the first-derivative tables. Unused by the built-in models;
/// provided for completeness.
std::pair<Field, Field> gradient(const Field& f);
Field divergence(const Field& fx, const Field& fy);

/// Columnwise apply_multiplier on an n-by-m matrix of fields (one FFT pass
/// per column, shared workspace).
Eigen::MatrixXd apply_multiplier_columns(const FourierMultiplier& m, const Eigen::MatrixXd& cols);

Eigen::MatrixXd apply_imag_multiplier_columns(const Grid2D& g, const Eigen::VectorXd& c,
                                              const Eigen::MatrixXd& cols);

/// Weighted discrete inner product hx*hy * sum f_ij g_ij.
double inner_product(const Field& f, const Field& g);
double norm2(const Field& f);

}  // namespace eqrom

#endif
