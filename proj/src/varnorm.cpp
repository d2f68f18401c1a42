#include "bistab/varnorm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bistab {

namespace {

double ipow(double base, int exp) {
    double out = 1.0;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

}  // namespace

std::vector<PairConfig> enumerate_pairs(const LatticeModel& model) {
    std::vector<PairConfig> out;
    const int nt = static_cast<int>(model.terms.size());
    for (int i = 0; i < nt; ++i) {
        const Support& si = model.terms[i].op.support;
        for (int j = 0; j < nt; ++j) {
            const Support& sj = model.terms[j].op.support;
            std::set<Offset> displacements;
            for (const auto& a : si)
                for (const auto& b : sj) displacements.insert(a - b);
            for (const auto& d : displacements) {
                PairConfig cfg;
                cfg.term_i = i;
                cfg.term_j = j;
                cfg.displacement = d;
                cfg.joint_support = si;
                std::set<Offset> overlap;
                for (const auto& s : sj) {
                    const Offset shifted = s + d;
                    if (std::find(si.begin(), si.end(), shifted) != si.end())
                        overlap.insert(shifted);
                    else
                        cfg.joint_support.push_back(shifted);
                }
                cfg.n_ij = static_cast<int>(cfg.joint_support.size());
                for (const auto& o : overlap) {
                    cfg.keep_i.push_back(static_cast<int>(
                        std::find(si.begin(), si.end(), o) - si.begin()));
                    cfg.keep_j.push_back(static_cast<int>(
                        std::find(sj.begin(), sj.end(), o - d) - sj.begin()));
                }
                out.push_back(std::move(cfg));
            }
        }
    }
    return out;
}

NormEvaluator::NormEvaluator(LatticeModel model) : model_(std::move(model)) {
    pairs_ = enumerate_pairs(model_);
    // deduplicate (term, keep-order) partial-trace requests across configs
    std::map<std::pair<int, std::vector<int>>, int> seen;
    auto reduced_index = [&](int term, const std::vector<int>& keep) {
        auto key = std::make_pair(term, keep);
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        const int idx = static_cast<int>(reduced_.size());
        reduced_.push_back({term, keep});
        seen.emplace(std::move(key), idx);
        return idx;
    };
    for (std::size_t c = 0; c < pairs_.size(); ++c) {
        auto& cfg = pairs_[c];
        cfg.red_i = reduced_index(cfg.term_i, cfg.keep_i);
        cfg.red_j = reduced_index(cfg.term_j, cfg.keep_j);
        pair_lookup_[{cfg.term_i, cfg.term_j, cfg.displacement.x, cfg.displacement.y}] =
            static_cast<int>(c);
    }
}

Matrix NormEvaluator::term_applied(const BlochVector& a, int term_index) const {
    const LindbladTerm& term = model_.terms[term_index];
    const Matrix rho0 = bloch_state(a);
    Matrix rho = rho0;
    for (int k = 1; k < term.op.n_sites(); ++k) rho = kron(rho, rho0);
    return apply_term_matrix(term, rho);
}

Matrix NormEvaluator::term_applied_fields(
    int term_index, const Offset& shift, const std::function<BlochVector(const Offset&)>& field,
    std::vector<Matrix>* site_states) const {
    const LindbladTerm& term = model_.terms[term_index];
    site_states->clear();
    Matrix rho = Matrix::Identity(1, 1);
    for (const auto& s : term.op.support) {
        site_states->push_back(bloch_state(field(s + shift)));
        rho = kron(rho, site_states->back());
    }
    return apply_term_matrix(term, rho);
}

Complex NormEvaluator::pair_term(const BlochVector& a, const PairConfig& cfg) const {
    const BlochVector aa = a;
    auto field = [&aa](const Offset&) { return aa; };
    const Complex num = pair_numerator_fields(cfg, field);
    return num / ipow(purity(a), cfg.n_ij);
}

Complex NormEvaluator::pair_numerator_fields(
    const PairConfig& cfg, const std::function<BlochVector(const Offset&)>& field) const {
    std::vector<Matrix> states;
    const Matrix ai = term_applied_fields(cfg.term_i, Offset{0, 0}, field, &states);
    std::vector<Matrix> traced;
    const Support& si = model_.terms[cfg.term_i].op.support;
    for (int p = 0; p < static_cast<int>(si.size()); ++p)
        if (std::find(cfg.keep_i.begin(), cfg.keep_i.end(), p) == cfg.keep_i.end())
            traced.push_back(states[p]);
    const Matrix bi = weighted_partial_trace(ai, static_cast<int>(si.size()), cfg.keep_i, traced);

    const Matrix aj = term_applied_fields(cfg.term_j, cfg.displacement, field, &states);
    traced.clear();
    const Support& sj = model_.terms[cfg.term_j].op.support;
    for (int p = 0; p < static_cast<int>(sj.size()); ++p)
        if (std::find(cfg.keep_j.begin(), cfg.keep_j.end(), p) == cfg.keep_j.end())
            traced.push_back(states[p]);
    const Matrix bj = weighted_partial_trace(aj, static_cast<int>(sj.size()), cfg.keep_j, traced);

    return hs_inner(bi, bj);
}

Complex NormEvaluator::term_mean_numerator_fields(
    int term_index, const std::function<BlochVector(const Offset&)>& field) const {
    std::vector<Matrix> states;
    const Matrix at = term_applied_fields(term_index, Offset{0, 0}, field, &states);
    Matrix rho = Matrix::Identity(1, 1);
    for (const auto& s : states) rho = kron(rho, s);
    return hs_inner(at, rho);
}

Complex NormEvaluator::term_mean(const BlochVector& a, int term_index) const {
    const Matrix at = term_applied(a, term_index);
    const Matrix rho0 = bloch_state(a);
    Matrix rho = rho0;
    for (int k = 1; k < model_.terms[term_index].op.n_sites(); ++k) rho = kron(rho, rho0);
    return hs_inner(at, rho) / ipow(purity(a), model_.terms[term_index].op.n_sites());
}

NormValue NormEvaluator::f_v(const BlochVector& a) const {
    if (!a.valid()) throw std::invalid_argument("f_v: |alpha| > 1 (invalid state)");
    const double p = purity(a);
    const int nt = static_cast<int>(model_.terms.size());
    const Matrix rho0 = bloch_state(a);

    // per-term applied operators and means
    std::vector<Matrix> applied(nt);
    std::vector<Complex> means(nt);
    for (int t = 0; t < nt; ++t) {
        applied[t] = term_applied(a, t);
        const int ns = model_.terms[t].op.n_sites();
        Matrix rho = rho0;
        for (int k = 1; k < ns; ++k) rho = kron(rho, rho0);
        means[t] = hs_inner(applied[t], rho) / ipow(p, ns);
    }

    // shared reduced partial traces
    std::vector<Matrix> reduced(reduced_.size());
    for (std::size_t r = 0; r < reduced_.size(); ++r) {
        const auto& red = reduced_[r];
        const int ns = model_.terms[red.term].op.n_sites();
        std::vector<Matrix> traced(ns - static_cast<int>(red.keep.size()), rho0);
        reduced[r] = weighted_partial_trace(applied[red.term], ns, red.keep, traced);
    }

    Complex overlap = 0.0;
    for (const auto& cfg : pairs_) {
        const Complex pair = hs_inner(reduced[cfg.red_i], reduced[cfg.red_j]) / ipow(p, cfg.n_ij);
        overlap += pair - means[cfg.term_i] * std::conj(means[cfg.term_j]);
    }
    Complex mean_sum = 0.0;
    for (const auto& m : means) mean_sum += m;

    NormValue out;
    out.overlap_part = overlap.real();
    out.disjoint_part = std::norm(mean_sum);
    out.value = out.overlap_part + out.disjoint_part;
    if (std::abs(overlap.imag()) > 1e-8)
        throw std::runtime_error("f_v: imaginary residue exceeds tolerance");
    return out;
}

Eigen::Vector3d NormEvaluator::grad(const BlochVector& a, bool* boundary) const {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    if (boundary) *boundary = false;
    const double h = kGradStep;
    for (int k = 0; k < 3; ++k) {
        if (!model_.restriction.free[k]) continue;
        auto shifted = [&](double delta) {
            BlochVector b = a;
            (k == 0 ? b.x : k == 1 ? b.y : b.z) += delta;
            return b;
        };
        const bool up_ok = shifted(h).valid();
        const bool dn_ok = shifted(-h).valid();
        if (up_ok && dn_ok) {
            g[k] = (value(shifted(h)) - value(shifted(-h))) / (2.0 * h);
        } else if (up_ok) {
            g[k] = (value(shifted(h)) - value(a)) / h;
            if (boundary) *boundary = true;
        } else if (dn_ok) {
            g[k] = (value(a) - value(shifted(-h))) / h;
            if (boundary) *boundary = true;
        } else {
            throw std::runtime_error("grad: no admissible finite-difference step");
        }
    }
    return g;
}

double NormEvaluator::patch_pair_sum(const BlochVector& a, const Support& patch) const {
    const int nt = static_cast<int>(model_.terms.size());
    auto in_patch = [&](const Offset& o) {
        return std::find(patch.begin(), patch.end(), o) != patch.end();
    };
    // anchors whose full term support fits inside the open patch
    std::vector<std::pair<int, Offset>> instances;
    for (int t = 0; t < nt; ++t)
        for (const auto& anchor : patch) {
            bool fits = true;
            for (const auto& s : model_.terms[t].op.support)
                if (!in_patch(anchor + s)) {
                    fits = false;
                    break;
                }
            if (fits) instances.emplace_back(t, anchor);
        }

    std::vector<Complex> means(nt);
    for (int t = 0; t < nt; ++t) means[t] = term_mean(a, t);

    Complex total = 0.0;
    for (const auto& [ti, ai] : instances)
        for (const auto& [tj, aj] : instances) {
            const Offset d = aj - ai;
            const auto it = pair_lookup_.find({ti, tj, d.x, d.y});
            if (it != pair_lookup_.end())
                total += pair_term(a, pairs_[it->second]);
            else
                total += means[ti] * std::conj(means[tj]);
        }
    return total.real();
}

}  // namespace bistab
