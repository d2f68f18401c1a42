#include "bistab/nucleation.hpp"

#include "bistab/landscape.hpp"
#include "bistab/models.hpp"
#include "bistab/varnorm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bistab {

namespace {

void check_ordering(double f_s, double f_m, double f_sp) {
    if (!(f_s >= 0.0) || f_m < f_s || f_sp < f_m)
        throw std::invalid_argument("nucleation: need f_sp >= f_m >= f_s >= 0");
}

}  // namespace

NucleationResult activation(double f_s, double f_m, double f_sp) {
    check_ordering(f_s, f_m, f_sp);
    NucleationResult r;
    const double bulk = f_m - f_s;       // volume gain per site
    const double surface = f_sp - f_m;   // sharp-kink tension per unit edge
    r.lambda = 2.0 * bulk;
    if (bulk == 0.0) {
        r.degenerate = true;
        r.ell_star = std::numeric_limits<double>::infinity();
        r.activation_energy = std::numeric_limits<double>::infinity();
        return r;
    }
    r.ell_star = 2.0 * surface / bulk;
    r.activation_energy = 4.0 * surface * surface / bulk;
    return r;
}

double relaxation_rate(double f_s, double f_m, double f_sp) {
    const NucleationResult r = activation(f_s, f_m, f_sp);
    if (r.degenerate) return 0.0;
    return f_sp * std::sqrt(f_m / (2.0 * std::numbers::pi * r.lambda)) *
           std::exp(-r.activation_energy / f_m);
}

double log10_relaxation_rate(double f_s, double f_m, double f_sp) {
    const NucleationResult r = activation(f_s, f_m, f_sp);
    if (r.degenerate) return -std::numeric_limits<double>::infinity();
    return std::log10(f_sp) +
           0.5 * std::log10(f_m / (2.0 * std::numbers::pi * r.lambda)) -
           r.activation_energy / (f_m * std::numbers::ln10);
}

std::vector<RateCurveRow> rate_curve(double J, double gamma, double g_lo, double g_hi,
                                     int n_points) {
    std::vector<RateCurveRow> rows(n_points);
    for (int k = 0; k < n_points; ++k) {
        RateCurveRow& row = rows[k];
        row.g_over_gamma =
            n_points == 1 ? g_lo : g_lo + (g_hi - g_lo) * static_cast<double>(k) / (n_points - 1);
        const NormEvaluator ev(build_ising(row.g_over_gamma * gamma, J, gamma));
        const auto minima = find_minima(ev);
        if (minima.size() < 2) continue;
        CriticalProfile cp;
        try {
            const auto sp = find_saddle(ev, minima[0].alpha, minima[1].alpha);
            cp.f_stable = minima[0].f_v;
            cp.f_metastable = minima[1].f_v;
            cp.f_saddle = sp.second;
        } catch (const std::exception&) {
            continue;  // row marked absent
        }
        row.valid = true;
        row.f_s = cp.f_stable;
        row.f_m = cp.f_metastable;
        row.f_sp = cp.f_saddle;
        row.log10_rate = log10_relaxation_rate(row.f_s, row.f_m, row.f_sp);
    }
    return rows;
}

}  // namespace bistab
