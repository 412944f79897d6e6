#include "chemostat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chemostat/analysis.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/parallel.hpp"

namespace chemostat {

namespace {

Tridiagonal shifted_negative(const Tridiagonal& a, double shift) {
    Tridiagonal b;
    b.sub.resize(a.size());
    b.diag.resize(a.size());
    b.super.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        b.sub[i] = -a.sub[i];
        b.diag[i] = shift - a.diag[i];
        b.super[i] = -a.super[i];
    }
    return b;
}

double inf_norm(const Tridiagonal& a) {
    double norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        norm = std::max(norm, std::abs(a.sub[i]) + std::abs(a.diag[i]) + std::abs(a.super[i]));
    }
    return norm;
}

/// max_i |(A x)_i - rho x_i|, with the Laplacian part taken as differences
/// of neighbours (its rows sum to zero), which avoids cancellation in
/// alpha/h^2 sized terms.
double residual_norm(const NeumannLaplacian& lap, double alpha, const std::vector<double>& mu,
                     const std::vector<double>& x, double rho) {
    const std::size_t n = x.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double diffusion = 0.0;
        if (i > 0) diffusion += lap.sub[i] * (x[i - 1] - x[i]);
        if (i + 1 < n) diffusion += lap.super[i] * (x[i + 1] - x[i]);
        worst = std::max(worst, std::abs(alpha * diffusion + (mu[i] - rho) * x[i]));
    }
    return worst;
}

}  // namespace

EigenPair principal_eigenpair(double alpha, double sigma, const Kinetics& kin,
                              const TraitGrid& grid, const NeumannLaplacian& lap,
                              const EigenOptions& opts) {
    if (!(alpha > 0.0)) {
        throw ContractViolation("principal_eigenpair requires alpha > 0; the alpha -> 0 limit "
                                "has no L1 eigenfunction");
    }
    if (!(sigma > 0.0)) throw ConfigError("principal_eigenpair requires sigma > 0");
    if (lap.size() != grid.n) throw ContractViolation("principal_eigenpair: Laplacian size mismatch");

    const std::vector<double> mu = eval_mu(kin, sigma, grid);
    Tridiagonal a;
    a.sub.resize(grid.n);
    a.diag.resize(grid.n);
    a.super.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        a.sub[i] = alpha * lap.sub[i];
        a.diag[i] = alpha * lap.diag[i] + mu[i];
        a.super[i] = alpha * lap.super[i];
    }

    double shift = *std::max_element(mu.begin(), mu.end()) + 1.0;
    auto solver = std::make_optional<TridiagonalSolver>(shifted_negative(a, shift));

    std::vector<double> x(grid.n, 1.0 / grid.length());
    std::vector<double> ax(grid.n);
    const double roundoff_floor = 64.0 * std::numeric_limits<double>::epsilon() * inf_norm(a);

    EigenPair pair;
    double previous = std::numeric_limits<double>::infinity();
    double best_residual = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        solver->solve(x);
        const double mass = integrate(grid, x);
        for (double& v : x) v /= mass;

        a.apply(x, ax);
        const double rayleigh = integrate_product(grid, x, ax) / integrate_product(grid, x, x);
        const double residual = residual_norm(lap, alpha, mu, x, rayleigh);
        const double x_max = *std::max_element(x.begin(), x.end());
        pair.lambda1 = -rayleigh;
        pair.residual = residual;
        pair.iterations = it;

        // Past the tolerance, keep iterating while the residual still
        // improves; accept a stalled residual only at the roundoff floor.
        const bool settled = std::abs(pair.lambda1 - previous) < opts.tol;
        if (residual < 0.5 * best_residual) {
            best_residual = residual;
            stalled = 0;
        } else {
            ++stalled;
        }
        if (settled && (residual <= opts.tol ||
                        (stalled >= 20 && residual <= roundoff_floor * x_max))) {
            pair.phi = std::move(x);
            return pair;
        }
        previous = pair.lambda1;

        if (opts.accelerate_every > 0 && it % opts.accelerate_every == 0) {
            double lower = std::numeric_limits<double>::infinity();
            double upper = -std::numeric_limits<double>::infinity();
            bool positive = true;
            for (std::size_t i = 0; i < grid.n && positive; ++i) {
                positive = x[i] > 0.0;
                if (positive) {
                    lower = std::min(lower, ax[i] / x[i]);
                    upper = std::max(upper, ax[i] / x[i]);
                }
            }
            // Collatz-Wielandt: lower <= principal eigenvalue <= upper.
            if (positive) {
                const double candidate =
                    upper + std::max(upper - lower, 1e-8 * std::max(1.0, std::abs(upper)));
                if (candidate < shift) {
                    shift = candidate;
                    solver.emplace(shifted_negative(a, shift));
                }
            }
        }
    }
    throw NonConvergence("principal_eigenpair did not converge in " +
                             std::to_string(opts.max_iter) + " iterations (residual " +
                             std::to_string(pair.residual) + ")",
                         pair.residual);
}

StationaryState stationary_state(const EigenPair& pair, double sigma, double s_in) {
    if (!(sigma < s_in)) throw ConfigError("stationary_state requires sigma < s_in");
    if (!(sigma > 0.0)) throw ConfigError("stationary_state requires sigma > 0");
    StationaryState st;
    st.s_bar = sigma;
    st.theta = s_in - sigma;
    st.f_bar.resize(pair.phi.size());
    for (std::size_t i = 0; i < pair.phi.size(); ++i) st.f_bar[i] = st.theta * pair.phi[i];
    return st;
}

std::vector<std::pair<double, double>> eigen_K_curve(std::span<const double> alphas, double sigma,
                                                     const Kinetics& kin, const TraitGrid& grid,
                                                     const EigenOptions& opts, std::size_t workers) {
    const std::span<const double> r = kin.half_saturation();
    if (r.empty()) throw ConfigError("eigen_K_curve needs a half-saturation profile");
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) throw ContractViolation("eigen_K_curve: every alpha must be > 0");
    }
    const NeumannLaplacian lap = build_laplacian(grid);
    std::vector<std::pair<double, double>> curve(alphas.size());
    parallel_for(alphas.size(), workers, [&](std::size_t i) {
        const EigenPair pair = principal_eigenpair(alphas[i], sigma, kin, grid, lap, opts);
        curve[i] = {alphas[i], k_functional(grid, r, pair.phi)};
    });
    return curve;
}

}  // namespace chemostat
