#pragma once

#include <vector>

#include "prenorm/series_eval.hpp"

namespace prenorm {

/// Generalized binomial coefficient C(h,n), exact for integer h.
double gen_binomial(double h, int n);

/// A tabulated stretch of a sequence: values[k] sits at index base_index + k.
struct SeqWindow {
    long base_index = 0;
    std::vector<Complex> values;

    SeqWindow() = default;
    SeqWindow(long base, std::vector<Complex> vals);

    std::size_t len() const { return values.size(); }
};

/// Iterated forward differences Delta^k s(base), k = 0..max_order, with a
/// per-order cancellation estimate (k * eps * max |row values|).
struct DiffTable {
    std::vector<Complex> delta;
    std::vector<double> rounding_floor;
};

DiffTable difference_table(const SeqWindow& w, int max_order);

/// Newton-series fractional shift: sum_n C(h,n) Delta^n s(base), h in [0,1).
/// h = 0 short-circuits to s(base).
SeriesEval newton_shift(const SeqWindow& w, double h, double tol, int max_terms);

} // namespace prenorm
