// varnorm.hpp — Intensive variational norm f_v(alpha) of a lattice model under
// a homogeneous product ansatz. Overlapping ordered term pairs are enumerated
// exhaustively; the extensive (disjoint) contribution enters through the
// rescaled squared sum of term means:
//
//   f_v = sum_cfg [ pair(cfg) - m_i conj(m_j) ] + | sum_t m_t |^2,
//
//   pair(cfg) = Tr[(L_i rho)^dag (L_j rho)] / purity^{n_ij},
//   m_t       = Tr[(L_t rho)^dag rho] / purity^{|S_t|}.

#pragma once

#include "bistab/models.hpp"
#include "bistab/opalg.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <tuple>
#include <vector>

namespace bistab {

// Ordered pair of unit-cell terms: term_i anchored at the origin, term_j
// shifted by `displacement`, supports overlapping.
struct PairConfig {
    int term_i = 0;
    int term_j = 0;
    Offset displacement;
    Support joint_support;  // S_i sites first, then new sites of S_j + d
    int n_ij = 0;
    // overlap sites in canonical (sorted-offset) order, as positions
    // within S_i and within S_j
    std::vector<int> keep_i;
    std::vector<int> keep_j;
    // indices into the evaluator's reduced-operator cache
    int red_i = -1;
    int red_j = -1;
};

struct NormValue {
    double value = 0.0;
    double overlap_part = 0.0;
    double disjoint_part = 0.0;
};

// Exhaustive, duplicate-free list of overlapping ordered configurations.
std::vector<PairConfig> enumerate_pairs(const LatticeModel& model);

class NormEvaluator {
  public:
    explicit NormEvaluator(LatticeModel model);

    const LatticeModel& model() const { return model_; }
    const std::vector<PairConfig>& pairs() const { return pairs_; }

    // Single configuration, reference path (no caching across configs).
    Complex pair_term(const BlochVector& a, const PairConfig& cfg) const;

    // m_t of one unit-cell term.
    Complex term_mean(const BlochVector& a, int term_index) const;

    NormValue f_v(const BlochVector& a) const;
    double value(const BlochVector& a) const { return f_v(a).value; }

    // Central finite-difference gradient (step 1e-5) of f_v.value over the
    // free ansatz components; frozen components return 0. Falls back to
    // one-sided differences at the Bloch-ball boundary (sets *boundary).
    Eigen::Vector3d grad(const BlochVector& a, bool* boundary = nullptr) const;

    // Sum of all ordered instance pairs on a finite open patch (overlapping
    // pairs contracted exactly, disjoint pairs factorized) -- the engine-side
    // counterpart of the dense patch oracle.
    double patch_pair_sum(const BlochVector& a, const Support& patch) const;

    // Raw pair numerator with per-site states (inhomogeneous ansatz); the
    // caller supplies the purity normalization.
    Complex pair_numerator_fields(const PairConfig& cfg,
                                  const std::function<BlochVector(const Offset&)>& field) const;

    // Term mean numerator with per-site states.
    Complex term_mean_numerator_fields(
        int term_index, const std::function<BlochVector(const Offset&)>& field) const;

    static constexpr double kGradStep = 1e-5;

  private:
    struct Reduced {
        int term = 0;
        std::vector<int> keep;
    };

    Matrix term_applied(const BlochVector& a, int term_index) const;
    Matrix term_applied_fields(int term_index, const Offset& shift,
                               const std::function<BlochVector(const Offset&)>& field,
                               std::vector<Matrix>* site_states) const;

    LatticeModel model_;
    std::vector<PairConfig> pairs_;
    std::vector<Reduced> reduced_;
    std::map<std::tuple<int, int, int, int>, int> pair_lookup_;  // (i, j, dx, dy) -> index
};

}  // namespace bistab
