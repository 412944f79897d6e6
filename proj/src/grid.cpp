#include "chemostat/grid.hpp"

#include <cmath>
#include <string>

#include "chemostat/errors.hpp"

namespace chemostat {

void Tridiagonal::apply(std::span<const double> in, std::span<double> out) const {
    const std::size_t n = size();
    if (in.size() != n || out.size() != n) {
        throw ContractViolation("Tridiagonal::apply: length mismatch");
    }
    if (n == 1) {
        out[0] = diag[0] * in[0];
        return;
    }
    out[0] = diag[0] * in[0] + super[0] * in[1];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = sub[i] * in[i - 1] + diag[i] * in[i] + super[i] * in[i + 1];
    }
    out[n - 1] = sub[n - 1] * in[n - 2] + diag[n - 1] * in[n - 1];
}

TraitGrid build_grid(double z_min, double z_max, std::size_t n) {
    if (n < 3) {
        throw ConfigError("trait grid needs at least 3 nodes, got " + std::to_string(n));
    }
    if (!(z_max > z_min) || !std::isfinite(z_min) || !std::isfinite(z_max)) {
        throw ConfigError("trait grid needs z_max > z_min");
    }
    TraitGrid grid;
    grid.z_min = z_min;
    grid.z_max = z_max;
    grid.n = n;
    grid.h = (z_max - z_min) / static_cast<double>(n - 1);
    grid.nodes.resize(n);
    grid.weights.assign(n, grid.h);
    for (std::size_t i = 0; i < n; ++i) {
        grid.nodes[i] = z_min + grid.h * static_cast<double>(i);
    }
    grid.nodes[n - 1] = z_max;
    grid.weights.front() = 0.5 * grid.h;
    grid.weights.back() = 0.5 * grid.h;
    return grid;
}

NeumannLaplacian build_laplacian(const TraitGrid& grid) {
    const std::size_t n = grid.n;
    const double c = 1.0 / (grid.h * grid.h);
    NeumannLaplacian lap;
    lap.sub.assign(n, c);
    lap.diag.assign(n, -2.0 * c);
    lap.super.assign(n, c);
    // Boundary rows: stiffness row (1,-1)/h divided by the half-cell lumped mass h/2.
    lap.sub[0] = 0.0;
    lap.super[0] = 2.0 * c;
    lap.sub[n - 1] = 2.0 * c;
    lap.super[n - 1] = 0.0;
    return lap;
}

double integrate(const TraitGrid& grid, std::span<const double> f) {
    if (f.size() != grid.n) {
        throw ContractViolation("integrate: vector has " + std::to_string(f.size()) +
                                " entries, grid has " + std::to_string(grid.n));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) sum += grid.weights[i] * f[i];
    return sum;
}

double integrate_product(const TraitGrid& grid, std::span<const double> a,
                         std::span<const double> b) {
    if (a.size() != grid.n || b.size() != grid.n) {
        throw ContractViolation("integrate_product: length mismatch with grid");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) sum += grid.weights[i] * a[i] * b[i];
    return sum;
}

TridiagonalSolver::TridiagonalSolver(const Tridiagonal& m)
    : sub_(m.sub), upper_(m.size(), 0.0), inv_pivot_(m.size(), 0.0) {
    const std::size_t n = m.size();
    if (n == 0 || m.sub.size() != n || m.super.size() != n) {
        throw ContractViolation("TridiagonalSolver: malformed matrix");
    }
    double pivot = m.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) pivot = m.diag[i] - m.sub[i] * upper_[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("TridiagonalSolver: zero pivot at row " + std::to_string(i));
        }
        inv_pivot_[i] = 1.0 / pivot;
        upper_[i] = (i + 1 < n) ? m.super[i] * inv_pivot_[i] : 0.0;
    }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw ContractViolation("TridiagonalSolver::solve: length mismatch");
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - sub_[i] * rhs[i - 1]) * inv_pivot_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= upper_[i] * rhs[i + 1];
    }
}

Tridiagonal identity_minus(const Tridiagonal& op, double scale) {
    Tridiagonal out;
    const std::size_t n = op.size();
    out.sub.resize(n);
    out.diag.resize(n);
    out.super.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.sub[i] = -scale * op.sub[i];
        out.diag[i] = 1.0 - scale * op.diag[i];
        out.super[i] = -scale * op.super[i];
    }
    return out;
}

}  // namespace chemostat
