#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chemostat {

/// Uniform 1-D discretization of the trait interval [z_min, z_max].
///
/// The weights are the lumped P1 mass (trapezoid rule): h/2 at the two
/// endpoints and h everywhere else. Every integral over the trait domain
/// goes through these weights.
struct TraitGrid {
    double z_min = 0.0;
    double z_max = 0.0;
    std::size_t n = 0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    double length() const noexcept { return z_max - z_min; }
};

/// Tridiagonal operator stored by diagonals. `sub[i]` couples row i to
/// column i-1 (sub[0] unused), `super[i]` couples row i to column i+1
/// (super[n-1] unused).
struct Tridiagonal {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    std::size_t size() const noexcept { return diag.size(); }

    /// out = T * in
    void apply(std::span<const double> in, std::span<double> out) const;
};

/// Lumped-mass P1 discretization of the Laplacian with zero-flux ends,
/// L = -M_lump^{-1} K. Rows sum to zero and weighted columns sum to zero.
struct NeumannLaplacian : Tridiagonal {};

TraitGrid build_grid(double z_min, double z_max, std::size_t n);

NeumannLaplacian build_laplacian(const TraitGrid& grid);

/// Quadrature sum_i w_i f_i.
double integrate(const TraitGrid& grid, std::span<const double> f);

/// Quadrature sum_i w_i a_i b_i.
double integrate_product(const TraitGrid& grid, std::span<const double> a,
                         std::span<const double> b);

/// LU factorization of a diagonally dominant tridiagonal matrix (Thomas
/// algorithm without pivoting). Factor once, solve many times.
class TridiagonalSolver {
public:
    explicit TridiagonalSolver(const Tridiagonal& matrix);

    /// Solves in place: rhs <- A^{-1} rhs.
    void solve(std::span<double> rhs) const;

    std::size_t size() const noexcept { return inv_pivot_.size(); }

private:
    std::vector<double> sub_;
    std::vector<double> upper_;      // modified super-diagonal
    std::vector<double> inv_pivot_;  // 1 / modified diagonal
};

/// I - scale * op, as a new tridiagonal matrix.
Tridiagonal identity_minus(const Tridiagonal& op, double scale);

}  // namespace chemostat
