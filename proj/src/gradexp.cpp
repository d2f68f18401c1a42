#include "bistab/gradexp.hpp"

#include "bistab/errors.hpp"

#include <cmath>
#include <string>

namespace bistab {

namespace {

double ipow(double base, int exp) {
    double out = 1.0;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

}  // namespace

double overlap_functional(const NormEvaluator& ev, const FieldRotation& rot, double phi,
                          double dx, double dy, double orth) {
    auto field_at = [&](double site_phi) { return rot.alpha_of(site_phi, orth); };
    auto inhom = [&](const Offset& o) { return field_at(phi + o.x * dx + o.y * dy); };
    auto hom = [&](const Offset&) { return field_at(phi); };

    const double p_center = purity(field_at(phi));
    Complex total = 0.0;
    for (const auto& cfg : ev.pairs()) {
        const Complex num = ev.pair_numerator_fields(cfg, inhom);
        const Complex num0 = ev.pair_numerator_fields(cfg, hom);
        total += (num - num0) / ipow(p_center, cfg.n_ij);
    }
    return total.real();
}

LangevinCoeffs extract_coeffs(const NormEvaluator& ev, const FieldRotation& rot,
                              const Profile& f0, double phi_stable, double phi_meta,
                              const ExtractOptions& opt) {
    const double orth = orth_minimizer(ev, rot, opt.phi_eval);
    auto F = [&](double phi, double dx, double dy) {
        return overlap_functional(ev, rot, phi, dx, dy, orth);
    };
    const double p0 = opt.phi_eval;

    auto coeffs_at = [&](double s) {
        struct Raw {
            double a, b, b_prime, c;
        } r{};
        r.a = 2.0 * (F(p0, s, 0) - F(p0, -s, 0)) / (2.0 * s);
        r.b = (F(p0, s, s) - F(p0, s, -s) - F(p0, -s, s) + F(p0, -s, -s)) / (4.0 * s * s);
        r.b_prime =
            (F(p0 + s, s, 0) - F(p0 + s, -s, 0) - F(p0 - s, s, 0) + F(p0 - s, -s, 0)) /
            (4.0 * s * s);
        r.c = 0.5 * (F(p0, s, 0) + F(p0, -s, 0)) / (s * s);
        return r;
    };

    const auto full = coeffs_at(opt.fd_step);
    const auto half = coeffs_at(0.5 * opt.fd_step);
    auto check = [&](double v1, double v2, const char* name) {
        const double scale = std::max({std::abs(v1), std::abs(v2), 1e-6});
        if (std::abs(v1 - v2) > opt.richardson_tol * scale)
            throw NumericalError(std::string("extract_coeffs: FD inconsistency in ") + name);
    };
    check(full.a, half.a, "a");
    check(full.b, half.b, "b");
    check(full.b_prime, half.b_prime, "b_prime");
    check(full.c, half.c, "c");

    LangevinCoeffs out;
    // second-order central differences: one Richardson step
    out.a = (4.0 * half.a - full.a) / 3.0;
    out.b = (4.0 * half.b - full.b) / 3.0;
    out.b_prime = (4.0 * half.b_prime - full.b_prime) / 3.0;
    out.c = (4.0 * half.c - full.c) / 3.0;
    out.f0 = f0;
    out.phi_stable = phi_stable;
    out.phi_meta = phi_meta;
    out.f0_stable = f0.eval(phi_stable);
    out.f0_meta = f0.eval(phi_meta);
    out.noise_amp = std::max(0.0, out.f0_meta);
    return out;
}

}  // namespace bistab
