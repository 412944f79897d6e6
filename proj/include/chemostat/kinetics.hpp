#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "chemostat/grid.hpp"

namespace chemostat {

/// mu(s, z) = bar_mu * s / (r(z) + s), with r sampled at the grid nodes.
struct MonodKinetics {
    double bar_mu = 1.0;
    std::vector<double> r;
};

/// Arbitrary growth law given node-wise: mu(s, i) is the rate of trait node i
/// at substrate s. `half_saturation` is optional and only used by the
/// selection functional.
struct TabulatedKinetics {
    std::function<double(double s, std::size_t node)> mu;
    std::size_t n = 0;
    std::vector<double> half_saturation;
};

/// Growth function mu(s, z) over the trait grid.
class Kinetics {
public:
    static Kinetics monod(double bar_mu, std::vector<double> r);
    /// Monod with r(z) = z sampled on the grid nodes.
    static Kinetics monod_linear(double bar_mu, const TraitGrid& grid);
    static Kinetics tabulated(std::function<double(double, std::size_t)> mu, std::size_t n,
                              std::vector<double> half_saturation = {});

    std::size_t size() const noexcept;
    bool is_monod() const noexcept { return std::holds_alternative<MonodKinetics>(kind_); }
    const MonodKinetics* as_monod() const noexcept { return std::get_if<MonodKinetics>(&kind_); }

    /// Half-saturation profile r at the nodes, empty if unknown.
    std::span<const double> half_saturation() const noexcept;

    /// out_i = mu(s, z_i). Throws DomainError for s < 0.
    void rates(double s, std::span<double> out) const;

    double rate(double s, std::size_t node) const;

    /// Smallest Monod constant mu_hat with mu(s,z) <= mu_hat * s (Monod only).
    std::optional<double> linear_bound() const;

private:
    explicit Kinetics(std::variant<MonodKinetics, TabulatedKinetics> kind)
        : kind_(std::move(kind)) {}

    std::variant<MonodKinetics, TabulatedKinetics> kind_;
};

/// upsilon = sup mu over [0, s_in] x Omega; u_bar = max(upsilon, 4 upsilon s_in).
struct KineticsBounds {
    double upsilon = 0.0;
    double u_bar = 0.0;
};

/// Node-wise growth rates at substrate level s.
std::vector<double> eval_mu(const Kinetics& kin, double s, const TraitGrid& grid);

/// Admissibility constants. Monod uses the closed form bar_mu s_in / (r_min + s_in);
/// other kinetics are maximized over 1001 substrate levels on [0, s_in].
KineticsBounds bounds(const Kinetics& kin, double s_in, const TraitGrid& grid);

}  // namespace chemostat
