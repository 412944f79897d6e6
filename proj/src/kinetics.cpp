#include "chemostat/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemostat/errors.hpp"

namespace chemostat {

Kinetics Kinetics::monod(double bar_mu, std::vector<double> r) {
    if (!(bar_mu > 0.0) || !std::isfinite(bar_mu)) {
        throw ConfigError("Monod kinetics needs bar_mu > 0");
    }
    if (r.empty()) throw ConfigError("Monod kinetics needs a half-saturation profile");
    for (double ri : r) {
        if (!(ri > 0.0) || !std::isfinite(ri)) {
            throw ConfigError("Monod half-saturation values must be positive");
        }
    }
    return Kinetics(MonodKinetics{bar_mu, std::move(r)});
}

Kinetics Kinetics::monod_linear(double bar_mu, const TraitGrid& grid) {
    return monod(bar_mu, grid.nodes);
}

Kinetics Kinetics::tabulated(std::function<double(double, std::size_t)> mu, std::size_t n,
                             std::vector<double> half_saturation) {
    if (!mu) throw ConfigError("tabulated kinetics needs a rate callback");
    if (n == 0) throw ConfigError("tabulated kinetics needs at least one node");
    if (!half_saturation.empty() && half_saturation.size() != n) {
        throw ConfigError("tabulated kinetics: half-saturation profile has wrong length");
    }
    return Kinetics(TabulatedKinetics{std::move(mu), n, std::move(half_saturation)});
}

std::size_t Kinetics::size() const noexcept {
    if (const auto* m = as_monod()) return m->r.size();
    return std::get<TabulatedKinetics>(kind_).n;
}

std::span<const double> Kinetics::half_saturation() const noexcept {
    if (const auto* m = as_monod()) return m->r;
    return std::get<TabulatedKinetics>(kind_).half_saturation;
}

void Kinetics::rates(double s, std::span<double> out) const {
    if (!(s >= 0.0)) throw DomainError("growth rate requested at negative substrate " + std::to_string(s));
    if (out.size() != size()) throw ContractViolation("Kinetics::rates: length mismatch");
    if (const auto* m = as_monod()) {
        const double num = m->bar_mu * s;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = num / (m->r[i] + s);
        return;
    }
    const auto& tab = std::get<TabulatedKinetics>(kind_);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (s == 0.0) ? 0.0 : tab.mu(s, i);
    }
}

double Kinetics::rate(double s, std::size_t node) const {
    if (!(s >= 0.0)) throw DomainError("growth rate requested at negative substrate " + std::to_string(s));
    if (node >= size()) throw ContractViolation("Kinetics::rate: node out of range");
    if (const auto* m = as_monod()) return m->bar_mu * s / (m->r[node] + s);
    if (s == 0.0) return 0.0;
    return std::get<TabulatedKinetics>(kind_).mu(s, node);
}

std::optional<double> Kinetics::linear_bound() const {
    const auto* m = as_monod();
    if (!m) return std::nullopt;
    return m->bar_mu / *std::min_element(m->r.begin(), m->r.end());
}

std::vector<double> eval_mu(const Kinetics& kin, double s, const TraitGrid& grid) {
    if (kin.size() != grid.n) {
        throw ContractViolation("eval_mu: kinetics has " + std::to_string(kin.size()) +
                                " nodes, grid has " + std::to_string(grid.n));
    }
    std::vector<double> out(grid.n);
    kin.rates(s, out);
    return out;
}

KineticsBounds bounds(const Kinetics& kin, double s_in, const TraitGrid& grid) {
    if (!(s_in > 0.0)) throw ConfigError("bounds: s_in must be positive");
    if (kin.size() != grid.n) throw ContractViolation("bounds: kinetics/grid size mismatch");

    double upsilon = 0.0;
    if (const auto* m = kin.as_monod()) {
        const double r_min = *std::min_element(m->r.begin(), m->r.end());
        upsilon = m->bar_mu * s_in / (r_min + s_in);
    } else {
        constexpr std::size_t levels = 1001;
        std::vector<double> mu(grid.n);
        for (std::size_t k = 0; k < levels; ++k) {
            const double s = s_in * static_cast<double>(k) / static_cast<double>(levels - 1);
            kin.rates(s, mu);
            upsilon = std::max(upsilon, *std::max_element(mu.begin(), mu.end()));
        }
    }
    return KineticsBounds{upsilon, std::max(upsilon, 4.0 * upsilon * s_in)};
}

}  // namespace chemostat
