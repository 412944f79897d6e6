#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chemostat/analysis.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/spectral.hpp"
#include "oracles/dense_eigen.hpp"

using namespace chemostat;

namespace {

double l1_gap(const TraitGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
    double gap = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) gap += g.weights[i] * std::abs(a[i] - b[i]);
    return gap;
}

}  // namespace

TEST(Spectral, FlatPotentialGivesUniformEigenfunction) {
    const TraitGrid g = build_grid(1.0, 3.0, 101);
    const Kinetics kin = Kinetics::monod(1.0, std::vector<double>(g.n, 2.0));
    const EigenPair pair = principal_eigenpair(0.01, 9.0, kin, g, build_laplacian(g));
    EXPECT_NEAR(pair.lambda1, -9.0 / 11.0, 1e-12);
    for (double v : pair.phi) EXPECT_NEAR(v, 0.5, 1e-10);
}

TEST(Spectral, MatchesDenseOracle) {
    const TraitGrid g = build_grid(1.0, 3.0, 200);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const EigenPair pair = principal_eigenpair(0.01, 9.0, kin, g, build_laplacian(g));
    const oracle::DenseEigen ref = oracle::principal(1.0, 3.0, 200, 0.01, eval_mu(kin, 9.0, g));
    EXPECT_NEAR(pair.lambda1, ref.lambda1, 1e-8);
    EXPECT_LE(l1_gap(g, pair.phi, ref.phi), 1e-6);
    EXPECT_LE(pair.residual, 1e-10);
    EXPECT_NEAR(integrate(g, pair.phi), 1.0, 1e-12);
    for (double v : pair.phi) EXPECT_GT(v, 0.0);
    const double k = k_functional(g, kin.half_saturation(), pair.phi);
    EXPECT_GT(k, 1.0);
    EXPECT_LT(k, 3.0);
    EXPECT_NEAR(k, 1.511, 0.02);
}

TEST(Spectral, LargeMutationFlattensEigenfunction) {
    const TraitGrid g = build_grid(1.0, 3.0, 200);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const EigenPair pair = principal_eigenpair(1e3, 9.0, kin, g, build_laplacian(g));
    const oracle::DenseEigen ref = oracle::principal(1.0, 3.0, 200, 1e3, eval_mu(kin, 9.0, g));
    EXPECT_NEAR(pair.lambda1, ref.lambda1, 1e-8);
    EXPECT_NEAR(k_functional(g, kin.half_saturation(), pair.phi), 2.0, 1e-4);
    EXPECT_NEAR(k_functional(g, kin.half_saturation(), ref.phi), 2.0, 1e-4);
}

TEST(Spectral, EigenvalueWithinVariationalBounds) {
    const TraitGrid g = build_grid(1.0, 3.0, 120);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const auto mu = eval_mu(kin, 9.0, g);
    const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
    for (double alpha : {1e-4, 1e-2, 1.0}) {
        const EigenPair pair = principal_eigenpair(alpha, 9.0, kin, g, build_laplacian(g));
        EXPECT_GE(-pair.lambda1, *lo);
        EXPECT_LE(-pair.lambda1, *hi);
        // alpha L phi + mu phi + lambda1 phi = 0
        std::vector<double> lphi(g.n);
        build_laplacian(g).apply(pair.phi, lphi);
        for (std::size_t i = 0; i < g.n; ++i) {
            EXPECT_NEAR(alpha * lphi[i] + mu[i] * pair.phi[i] + pair.lambda1 * pair.phi[i], 0.0, 1e-9);
        }
    }
}

TEST(Spectral, ContractsAndErrors) {
    const TraitGrid g = build_grid(1.0, 3.0, 50);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const NeumannLaplacian lap = build_laplacian(g);
    EXPECT_THROW(principal_eigenpair(0.0, 9.0, kin, g, lap), ContractViolation);
    EigenOptions opts;
    opts.max_iter = 2;
    opts.tol = 1e-15;
    EXPECT_THROW(principal_eigenpair(1e-3, 9.0, kin, g, lap, opts), NonConvergence);
}

TEST(Stationary, MassEqualsInflowMinusSetPoint) {
    const TraitGrid g = build_grid(1.0, 3.0, 200);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const EigenPair pair = principal_eigenpair(0.005, 9.0, kin, g, build_laplacian(g));
    const StationaryState st = stationary_state(pair, 9.0, 35.0);
    EXPECT_NEAR(integrate(g, st.f_bar), 26.0, 1e-10);
    EXPECT_EQ(st.s_bar, 9.0);
    for (double v : st.f_bar) EXPECT_GT(v, 0.0);
    EXPECT_NEAR(integrate(g, stationary_state(pair, 34.0, 35.0).f_bar), 1.0, 1e-12);
    EXPECT_THROW(stationary_state(pair, 35.0, 35.0), ConfigError);
}

TEST(Stationary, FlatProfileIsUniform) {
    const TraitGrid g = build_grid(1.0, 3.0, 64);
    const Kinetics kin = Kinetics::monod(1.0, std::vector<double>(g.n, 1.5));
    const StationaryState st =
        stationary_state(principal_eigenpair(0.1, 9.0, kin, g, build_laplacian(g)), 9.0, 35.0);
    for (double v : st.f_bar) EXPECT_NEAR(v, 13.0, 1e-9);
}

TEST(EigenCurve, DecreasesTowardMinimumHalfSaturation) {
    const TraitGrid g = build_grid(1.0, 3.0, 400);
    const Kinetics kin = Kinetics::monod_linear(1.0, g);
    const std::vector<double> alphas{1e-1, 1e-2, 1e-3};
    const auto curve = eigen_K_curve(alphas, 9.0, kin, g);
    ASSERT_EQ(curve.size(), 3u);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        EXPECT_EQ(curve[i].first, alphas[i]);
        EXPECT_GE(curve[i].second, 1.0);
        EXPECT_LE(curve[i].second, 3.0);
        if (i > 0) EXPECT_LT(curve[i].second, curve[i - 1].second);
    }
    const std::vector<double> single{0.05};
    EXPECT_EQ(eigen_K_curve(single, 9.0, kin, g).size(), 1u);
}
