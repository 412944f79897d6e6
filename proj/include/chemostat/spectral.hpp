#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "chemostat/grid.hpp"
#include "chemostat/kinetics.hpp"

namespace chemostat {

/// Principal eigenpair of alpha*L + diag(mu(sigma, .)) with zero-flux ends,
/// written as  alpha L phi + mu phi = -lambda1 phi.
struct EigenPair {
    double lambda1 = 0.0;
    std::vector<double> phi;  ///< positive, integrate(grid, phi) == 1
    double residual = 0.0;    ///< ||A phi + lambda1 phi||_inf
    std::size_t iterations = 0;
};

struct EigenOptions {
    double tol = 1e-10;
    std::size_t max_iter = 200000;
    /// Iterations between shift updates.
    std::size_t accelerate_every = 50;
};

/// Stationary state parametrized by the set-point: (sigma, (s_in - sigma) phi).
struct StationaryState {
    double s_bar = 0.0;
    std::vector<double> f_bar;
    double theta = 0.0;
};

/// Shifted inverse iteration on c I - A, where c starts at max mu + 1 and is
/// periodically lowered to a Collatz-Wielandt upper bound of the principal
/// eigenvalue. c I - A stays a nonsingular M-matrix throughout, so every
/// iterate is positive and each solve is a plain Thomas sweep.
EigenPair principal_eigenpair(double alpha, double sigma, const Kinetics& kin,
                              const TraitGrid& grid, const NeumannLaplacian& lap,
                              const EigenOptions& opts = {});

StationaryState stationary_state(const EigenPair& pair, double sigma, double s_in);

/// (alpha, K[phi_{sigma,alpha}]) for each alpha, computed concurrently.
std::vector<std::pair<double, double>> eigen_K_curve(std::span<const double> alphas, double sigma,
                                                     const Kinetics& kin, const TraitGrid& grid,
                                                     const EigenOptions& opts = {},
                                                     std::size_t workers = 0);

}  // namespace chemostat
