#include "prenorm/diffcalc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "prenorm/detail/difference_engine.hpp"
#include "prenorm/errors.hpp"

namespace prenorm {

double gen_binomial(double h, int n) {
    if (n < 0) throw std::invalid_argument("gen_binomial: n must be >= 0");
    return detail::gen_binomial_t<double>(h, n);
}

SeqWindow::SeqWindow(long base, std::vector<Complex> vals)
    : base_index(base), values(std::move(vals)) {
    if (base_index < 0) throw std::invalid_argument("SeqWindow: base_index must be >= 0");
    if (values.empty()) throw std::invalid_argument("SeqWindow: window must hold at least one value");
    for (const Complex& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("SeqWindow: values must be finite");
}

DiffTable difference_table(const SeqWindow& w, int max_order) {
    if (max_order < 0) throw std::invalid_argument("difference_table: max_order must be >= 0");
    if (w.len() < static_cast<std::size_t>(max_order) + 1)
        throw InsufficientWindow("difference_table: window shorter than max_order + 1");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    DiffTable out;
    out.delta.reserve(max_order + 1);
    out.rounding_floor.reserve(max_order + 1);

    std::vector<Complex> row = w.values;
    double row_max = 0.0;
    for (int k = 0; k <= max_order; ++k) {
        for (const Complex& v : row) row_max = std::max(row_max, std::abs(v));
        out.delta.push_back(row[0]);
        out.rounding_floor.push_back(k * eps * row_max);
        if (k == max_order) break;
        // Kahan-compensated pairwise subtraction is a no-op for a single
        // difference; each row entry is one rounding away from exact.
        std::vector<Complex> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) next[i] = row[i + 1] - row[i];
        row = std::move(next);
    }
    return out;
}

SeriesEval newton_shift(const SeqWindow& w, double h, double tol, int max_terms) {
    if (!(h >= 0.0 && h < 1.0))
        throw std::invalid_argument("newton_shift: h must lie in [0,1)");
    if (tol <= 0) throw std::invalid_argument("newton_shift: tol must be positive");
    if (max_terms < 1) throw std::invalid_argument("newton_shift: max_terms must be >= 1");
    if (w.len() < static_cast<std::size_t>(max_terms) + 1)
        throw InsufficientWindow("newton_shift: window shorter than max_terms + 1");

    detail::DifferenceTriangle<double> tri(w.values, max_terms,
                                           2 * std::numeric_limits<double>::epsilon());
    return detail::newton_shift_core<double>(tri, 0, h, tol, max_terms).to_eval();
}

} // namespace prenorm
