#include "bistab/profile.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace bistab {

Profile::Profile(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 4) throw std::invalid_argument("Profile: need at least 4 knots");
    if (y_.size() != x_.size()) throw std::invalid_argument("Profile: x/y size mismatch");
    h_ = x_[1] - x_[0];
    if (!(h_ > 0)) throw std::invalid_argument("Profile: grid must be increasing");
    for (int i = 1; i + 1 < n; ++i)
        if (std::abs((x_[i + 1] - x_[i]) - h_) > 1e-9 * std::abs(h_))
            throw std::invalid_argument("Profile: grid must be uniform");

    // second derivatives from the not-a-knot spline conditions
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 1; i + 1 < n; ++i) {
        A(i, i - 1) = h_;
        A(i, i) = 4.0 * h_;
        A(i, i + 1) = h_;
        rhs(i) = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / h_;
    }
    A(0, 0) = 1.0;
    A(0, 1) = -2.0;
    A(0, 2) = 1.0;
    A(n - 1, n - 3) = 1.0;
    A(n - 1, n - 2) = -2.0;
    A(n - 1, n - 1) = 1.0;
    Eigen::VectorXd m = A.partialPivLu().solve(rhs);
    m_.assign(m.data(), m.data() + n);
}

Profile::Profile(const Profile& other)
    : x_(other.x_), y_(other.y_), m_(other.m_), h_(other.h_) {
    clamps_.store(other.clamps_.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

Profile& Profile::operator=(const Profile& other) {
    if (this != &other) {
        x_ = other.x_;
        y_ = other.y_;
        m_ = other.m_;
        h_ = other.h_;
        clamps_.store(other.clamps_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    }
    return *this;
}

int Profile::interval(double& x) const {
    if (x < x_.front()) {
        x = x_.front();
        clamps_.fetch_add(1, std::memory_order_relaxed);
    } else if (x > x_.back()) {
        x = x_.back();
        clamps_.fetch_add(1, std::memory_order_relaxed);
    }
    int i = static_cast<int>((x - x_.front()) / h_);
    const int last = static_cast<int>(x_.size()) - 2;
    if (i < 0) i = 0;
    if (i > last) i = last;
    return i;
}

double Profile::eval(double x) const {
    if (empty()) throw std::logic_error("Profile: empty");
    const int i = interval(x);
    const double u = x_[i + 1] - x;
    const double v = x - x_[i];
    return m_[i] * u * u * u / (6.0 * h_) + m_[i + 1] * v * v * v / (6.0 * h_) +
           (y_[i] / h_ - m_[i] * h_ / 6.0) * u + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * v;
}

double Profile::deriv(double x) const {
    if (empty()) throw std::logic_error("Profile: empty");
    const int i = interval(x);
    const double u = x_[i + 1] - x;
    const double v = x - x_[i];
    return -m_[i] * u * u / (2.0 * h_) + m_[i + 1] * v * v / (2.0 * h_) -
           (y_[i] / h_ - m_[i] * h_ / 6.0) + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0);
}

double Profile::max_curvature() const {
    double out = 0.0;
    for (const double m : m_) out = std::max(out, std::abs(m));
    return out;
}

}  // namespace bistab
