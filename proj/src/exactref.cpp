#include "bistab/exactref.hpp"

#include <algorithm>
#include <stdexcept>

namespace bistab {

Patch Patch::rectangle(int nx, int ny) {
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("Patch::rectangle: empty patch");
    Patch p;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) p.sites.push_back({x, y});
    return p;
}

Complex dense_pair_oracle(const BlochVector& a, const PairConfig& cfg, const LatticeModel& model) {
    if (cfg.n_ij > 6) throw std::invalid_argument("dense_pair_oracle: joint support too large");
    const Support& joint = cfg.joint_support;
    const LocalOperator rho = product_state(a, joint);

    const LindbladTerm& ti = model.terms[cfg.term_i];
    LindbladTerm tj = model.terms[cfg.term_j];
    for (auto& s : tj.op.support) s = s + cfg.displacement;

    const LocalOperator li = apply_term(ti, rho);
    const LocalOperator lj = apply_term(tj, rho);

    // purity of the full product state, computed dense on purpose
    const Complex pur = hs_inner(rho.matrix, rho.matrix);
    return hs_inner(li.matrix, lj.matrix) / pur;
}

BlochVector single_site_steady(double g, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("single_site_steady: gamma must be > 0");
    const double denom = gamma * gamma + 2.0 * g * g;
    return BlochVector{0.0, 2.0 * g * gamma / denom, -gamma * gamma / denom};
}

double dense_patch_norm(const LatticeModel& model, const BlochVector& a, const Patch& patch) {
    if (patch.n_sites() > 12) throw std::invalid_argument("dense_patch_norm: patch too large");
    const Support& sites = patch.sites;
    auto in_patch = [&](const Offset& o) {
        return std::find(sites.begin(), sites.end(), o) != sites.end();
    };

    const LocalOperator rho = product_state(a, sites);
    Matrix lrho = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& term : model.terms)
        for (const auto& anchor : sites) {
            bool fits = true;
            for (const auto& s : term.op.support)
                if (!in_patch(anchor + s)) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            LindbladTerm shifted = term;
            for (auto& s : shifted.op.support) s = s + anchor;
            lrho += apply_term(shifted, rho).matrix;
        }
    const Complex pur = hs_inner(rho.matrix, rho.matrix);
    return (hs_inner(lrho, lrho) / pur).real();
}

}  // namespace bistab
