// profile.hpp — Tabulated scalar profile on a uniform grid with a not-a-knot
// cubic interpolant. Evaluation outside the table clamps to the edge and
// counts the event.

#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

namespace bistab {

class Profile {
  public:
    Profile() = default;
    Profile(std::vector<double> x, std::vector<double> y);

    bool empty() const { return x_.empty(); }
    double eval(double x) const;
    double deriv(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

    // largest |second derivative| over the knots (stability estimates)
    double max_curvature() const;

    std::int64_t clamp_count() const { return clamps_.load(std::memory_order_relaxed); }
    void reset_clamp_count() const { clamps_.store(0, std::memory_order_relaxed); }

    Profile(const Profile& other);
    Profile& operator=(const Profile& other);

  private:
    int interval(double& x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
    double h_ = 1.0;
    mutable std::atomic<std::int64_t> clamps_{0};
};

}  // namespace bistab
