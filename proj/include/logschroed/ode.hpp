#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the 4th-order continuous
// extension. Integration may run forward or backward in the independent
// variable; every accepted step is kept so the whole trajectory can be
// evaluated densely afterwards.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace logschroed::ode {

template <std::size_t M>
using State = std::array<double, M>;

/// One accepted step together with its interpolation coefficients.
template <std::size_t M>
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    std::array<State<M>, 5> rcont{};

    State<M> eval(double x) const {
        const double theta = (x - x0) / h;
        const double theta1 = 1.0 - theta;
        State<M> y{};
        for (std::size_t i = 0; i < M; ++i) {
            y[i] = rcont[0][i] +
                   theta * (rcont[1][i] +
                            theta1 * (rcont[2][i] + theta * (rcont[3][i] + theta1 * rcont[4][i])));
        }
        return y;
    }
    double x1() const { return x0 + h; }
};

struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-12;
    double h_init = 0.0;  // 0 = automatic
    double h_min = 1e-14;
    double h_max = 0.0;   // 0 = unbounded
    std::size_t max_steps = 2'000'000;
};

enum class StepStatus { Ok, StepUnderflow, NonFinite, TooManySteps };

/// Dormand-Prince stepper. `Rhs` is callable as rhs(x, y, dydx).
template <std::size_t M, typename Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, Tolerances tol) : rhs_(std::move(rhs)), tol_(tol) {}

    void reset(double x, const State<M>& y, double direction) {
        x_ = x;
        y_ = y;
        dir_ = direction >= 0 ? 1.0 : -1.0;
        rhs_(x_, y_, k1_);
        h_ = tol_.h_init > 0 ? tol_.h_init : initial_step();
        steps_ = 0;
    }

    double x() const { return x_; }
    const State<M>& y() const { return y_; }
    const State<M>& dydx() const { return k1_; }

    /// Advances by one accepted step without passing `x_stop`.
    StepStatus step(double x_stop, DenseStep<M>& dense) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                         a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                         d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                         d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

        bool rejected_last = false;
        while (true) {
            if (++steps_ > tol_.max_steps) return StepStatus::TooManySteps;
            double h = h_;
            if (tol_.h_max > 0) h = std::min(h, tol_.h_max);
            const double remaining = (x_stop - x_) * dir_;
            bool last = false;
            if (h >= remaining) {
                h = remaining;
                last = true;
            }
            if (h < tol_.h_min * std::max(1.0, std::abs(x_)) && !last) return StepStatus::StepUnderflow;
            const double hs = h * dir_;

            State<M> yt{};
            for (std::size_t i = 0; i < M; ++i) yt[i] = y_[i] + hs * a21 * k1_[i];
            rhs_(x_ + c2 * hs, yt, k2_);
            for (std::size_t i = 0; i < M; ++i) yt[i] = y_[i] + hs * (a31 * k1_[i] + a32 * k2_[i]);
            rhs_(x_ + c3 * hs, yt, k3_);
            for (std::size_t i = 0; i < M; ++i)
                yt[i] = y_[i] + hs * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
            rhs_(x_ + c4 * hs, yt, k4_);
            for (std::size_t i = 0; i < M; ++i)
                yt[i] = y_[i] + hs * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
            rhs_(x_ + c5 * hs, yt, k5_);
            for (std::size_t i = 0; i < M; ++i)
                yt[i] = y_[i] +
                        hs * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
            const double xph = last ? x_stop : x_ + hs;
            rhs_(xph, yt, k6_);
            State<M> ynew{};
            for (std::size_t i = 0; i < M; ++i)
                ynew[i] = y_[i] +
                          hs * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
            rhs_(xph, ynew, k7_);

            double err = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < M; ++i) {
                const double ei = hs * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                        e6 * k6_[i] + e7 * k7_[i]);
                const double sk = tol_.abs + tol_.rel * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                const double q = ei / sk;
                err += q * q;
                finite = finite && std::isfinite(ynew[i]) && std::isfinite(k7_[i]);
            }
            err = std::sqrt(err / static_cast<double>(M));
            if (!finite || !std::isfinite(err)) {
                if (h <= tol_.h_min * std::max(1.0, std::abs(x_))) return StepStatus::NonFinite;
                h_ = 0.25 * h;
                rejected_last = true;
                continue;
            }

            if (err <= 1.0) {
                dense.x0 = x_;
                dense.h = hs;
                for (std::size_t i = 0; i < M; ++i) {
                    const double ydiff = ynew[i] - y_[i];
                    const double bspl = hs * k1_[i] - ydiff;
                    dense.rcont[0][i] = y_[i];
                    dense.rcont[1][i] = ydiff;
                    dense.rcont[2][i] = bspl;
                    dense.rcont[3][i] = ydiff - hs * k7_[i] - bspl;
                    dense.rcont[4][i] = hs * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                                              d6 * k6_[i] + d7 * k7_[i]);
                }
                x_ = xph;
                y_ = ynew;
                k1_ = k7_;
                double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
                if (!last) h_ = h * fac;
                return StepStatus::Ok;
            }
            h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected_last = true;
        }
    }

private:
    double initial_step() {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double sk = tol_.abs + tol_.rel * std::abs(y_[i]);
            d0 += (y_[i] / sk) * (y_[i] / sk);
            d1 += (k1_[i] / sk) * (k1_[i] / sk);
        }
        d0 = std::sqrt(d0 / M);
        d1 = std::sqrt(d1 / M);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        return std::max(h, 1e-10);
    }

    Rhs rhs_;
    Tolerances tol_;
    double x_ = 0.0, h_ = 0.0, dir_ = 1.0;
    std::size_t steps_ = 0;
    State<M> y_{}, k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
};

/// Dense trajectory assembled from accepted steps (monotone in x, either direction).
template <std::size_t M>
class DenseTrajectory {
public:
    void push(const DenseStep<M>& s) { steps_.push_back(s); }
    bool empty() const { return steps_.empty(); }
    std::size_t size() const { return steps_.size(); }
    const std::vector<DenseStep<M>>& steps() const { return steps_; }
    void truncate_after(std::size_t n) { steps_.resize(std::min(n, steps_.size())); }
    void replace_last(const DenseStep<M>& s) { steps_.back() = s; }

    double x_begin() const { return steps_.front().x0; }
    double x_end() const { return steps_.back().x1(); }

    State<M> eval(double x) const { return steps_[locate(x)].eval(x); }

private:
    std::size_t locate(double x) const {
        const bool forward = steps_.front().h > 0;
        // first step whose end lies beyond x in the direction of integration
        auto it = std::lower_bound(steps_.begin(), steps_.end(), x,
                                   [forward](const DenseStep<M>& s, double v) {
                                       return forward ? s.x1() < v : s.x1() > v;
                                   });
        if (it == steps_.end()) return steps_.size() - 1;
        return static_cast<std::size_t>(it - steps_.begin());
    }

    std::vector<DenseStep<M>> steps_;
};

}  // namespace logschroed::ode
