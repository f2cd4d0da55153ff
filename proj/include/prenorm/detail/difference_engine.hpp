#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "prenorm/series_eval.hpp"

namespace prenorm::detail {

/// Generalized binomial coefficient C(h,n) by the multiplicative recurrence.
template <typename Real>
Real gen_binomial_t(Real h, int n) {
    Real c = 1;
    for (int k = 0; k < n; ++k) c *= (h - Real(k)) / Real(k + 1);
    return c;
}

/// Forward-difference triangle over a contiguous sample window.
/// rows[v][i] = Delta^v s(start+i), defined for i < len - v.
template <typename Real>
class DifferenceTriangle {
  public:
    using C = std::complex<Real>;

    DifferenceTriangle(std::vector<C> values, int max_order, Real sample_eps)
        : sample_eps_(sample_eps) {
        const std::size_t len = values.size();
        const int orders = static_cast<int>(std::min<std::size_t>(max_order, len - 1));
        rows_.reserve(orders + 1);
        rows_.push_back(std::move(values));
        max_abs_ = 0;
        for (const C& v : rows_[0]) max_abs_ = std::max(max_abs_, std::abs(v));
        for (int v = 1; v <= orders; ++v) {
            const auto& prev = rows_[v - 1];
            std::vector<C> row(prev.size() - 1);
            for (std::size_t i = 0; i + 1 < prev.size(); ++i) row[i] = prev[i + 1] - prev[i];
            rows_.push_back(std::move(row));
        }
    }

    int max_order() const { return static_cast<int>(rows_.size()) - 1; }
    std::size_t window_len() const { return rows_[0].size(); }
    const C& delta(int order, std::size_t pos) const { return rows_[order][pos]; }
    Real max_abs() const { return max_abs_; }
    Real sample_eps() const { return sample_eps_; }

    /// True when row `order` vanishes identically from `pos` to the end;
    /// all higher-order rows then vanish there as well.
    bool row_zero_from(int order, std::size_t pos) const {
        const auto& row = rows_[order];
        for (std::size_t i = pos; i < row.size(); ++i)
            if (row[i] != C(0)) return false;
        return true;
    }

    /// Cancellation floor for Delta^v: input noise scaled by the binomial
    /// weight growth 2^v.
    Real noise_floor(int order) const {
        return std::ldexp(sample_eps_ * max_abs_, order);
    }

  private:
    std::vector<std::vector<C>> rows_;
    Real sample_eps_;
    Real max_abs_ = 0;
};

template <typename Real>
struct SeriesResult {
    std::complex<Real> value{};
    SeriesStatus status = SeriesStatus::Stagnated;
    int terms_used = 0;
    double tail_estimate = 0.0;
    double rounding_floor = 0.0;

    SeriesEval to_eval() const {
        return SeriesEval{Complex(static_cast<double>(value.real()), static_cast<double>(value.imag())),
                          status, terms_used, tail_estimate, rounding_floor};
    }
};

/// Sums sum_v weight(v) * Delta^v s(base) with the shared status heuristics:
///  - Converged: |term| < tol*max(1,|partial|) for 3 consecutive terms and
///    non-increasing magnitudes over the trailing 5 terms;
///  - Terminated: the difference row is exactly zero from `base` on;
///  - Diverged: magnitudes strictly increasing across a full 5-term window
///    with total growth > 1.5, clearly above the rounding floor;
///  - Stagnated otherwise once the term budget is exhausted.
template <typename Real, typename WeightFn>
SeriesResult<Real> difference_series(const DifferenceTriangle<Real>& tri, std::size_t base,
                                     WeightFn&& weight, double tol, int max_terms) {
    using C = std::complex<Real>;
    SeriesResult<Real> out;
    const std::size_t avail = tri.window_len() - base - 1; // orders usable at this base
    const int orders = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(std::min(max_terms, tri.max_order())), avail));

    C sum{};
    C comp{};  // Kahan compensation
    Real hist[5] = {0, 0, 0, 0, 0};
    Real hfloor[5] = {0, 0, 0, 0, 0};
    int hist_n = 0;
    int consec_small = 0;
    Real last_abs = 0;
    Real floor_acc = 0;

    auto record_floor = [&](Real w_abs, int v) {
        floor_acc = std::max(floor_acc, w_abs * tri.noise_floor(v));
    };

    int v = 0;
    for (; v <= orders; ++v) {
        const C dv = tri.delta(v, base);
        if (dv == C(0) && tri.row_zero_from(v, base)) {
            out.status = SeriesStatus::Terminated;
            out.terms_used = v;
            out.value = sum + comp;
            out.tail_estimate = 0.0;
            out.rounding_floor = static_cast<double>(floor_acc);
            return out;
        }
        const Real w = weight(v);
        const C term = w * dv;
        record_floor(std::abs(w), v);

        // Kahan step
        const C y = term - comp;
        const C t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        last_abs = std::abs(term);
        const Real term_floor = std::abs(w) * tri.noise_floor(v);
        for (int i = 0; i < 4; ++i) {
            hist[i] = hist[i + 1];
            hfloor[i] = hfloor[i + 1];
        }
        hist[4] = last_abs;
        hfloor[4] = term_floor;
        if (hist_n < 5) ++hist_n;

        const Real scale = std::max<Real>(1, std::abs(sum));
        if (last_abs < Real(tol) * scale)
            ++consec_small;
        else
            consec_small = 0;

        if (consec_small >= 3 && hist_n >= 5) {
            // Non-increasing up to the cancellation noise of each order.
            bool nonincreasing = true;
            for (int i = 1; i < 5; ++i)
                if (hist[i] > hist[i - 1] * Real(1.0000001) + 2 * hfloor[i]) nonincreasing = false;
            if (nonincreasing) {
                out.status = SeriesStatus::Converged;
                out.terms_used = v + 1;
                out.value = sum + comp;
                out.tail_estimate = static_cast<double>(last_abs / scale);
                out.rounding_floor = static_cast<double>(floor_acc);
                return out;
            }
        }

        if (hist_n >= 5) {
            bool increasing = true;
            for (int i = 1; i < 5; ++i)
                if (hist[i] <= hist[i - 1]) increasing = false;
            if (increasing && hist[4] > Real(1.5) * hist[0] &&
                hist[4] > 8 * tri.noise_floor(v)) {
                out.status = SeriesStatus::Diverged;
                out.terms_used = v + 1;
                out.value = sum + comp;
                out.tail_estimate = static_cast<double>(last_abs);
                out.rounding_floor = static_cast<double>(floor_acc);
                return out;
            }
        }
    }

    out.status = SeriesStatus::Stagnated;
    out.terms_used = v;
    out.value = sum + comp;
    out.tail_estimate =
        static_cast<double>(last_abs / std::max<Real>(1, std::abs(sum + comp)));
    out.rounding_floor = static_cast<double>(floor_acc);
    return out;
}

/// Newton fractional shift sum_v C(h,v) Delta^v s(base) on a triangle.
template <typename Real>
SeriesResult<Real> newton_shift_core(const DifferenceTriangle<Real>& tri, std::size_t base,
                                     Real h, double tol, int max_terms) {
    if (h == Real(0)) {
        SeriesResult<Real> out;
        out.value = tri.delta(0, base);
        out.status = SeriesStatus::Terminated;
        out.terms_used = 1;
        out.rounding_floor = static_cast<double>(tri.sample_eps() * tri.max_abs());
        return out;
    }
    std::vector<Real> binom(max_terms + 1);
    binom[0] = 1;
    for (int v = 0; v < max_terms; ++v) binom[v + 1] = binom[v] * (h - Real(v)) / Real(v + 1);
    return difference_series(tri, base, [&](int v) { return binom[v]; }, tol, max_terms);
}

} // namespace prenorm::detail
