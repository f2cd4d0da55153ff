#include "prenorm/renorm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prenorm/detail/difference_engine.hpp"
#include "prenorm/errors.hpp"

namespace prenorm {

namespace {

using CL = ComplexL;

CL to_cl(Complex z) { return CL(z.real(), z.imag()); }

Complex to_c(CL z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

constexpr long double kLdEps = std::numeric_limits<long double>::epsilon();
constexpr double kDEps = std::numeric_limits<double>::epsilon();

// Kahan-compensated prefix sums P[n] = sum_{i<=n} v(i).
std::vector<CL> prefix_sums(const std::function<CL(long)>& v, long n_max) {
    std::vector<CL> out(n_max + 1);
    CL sum{}, comp{};
    for (long n = 0; n <= n_max; ++n) {
        const CL y = v(n) - comp;
        const CL t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        out[n] = sum + comp;
    }
    return out;
}

ResidueClassTable build_table(const std::vector<CL>& P, const std::vector<CL>& Q, int m, int j,
                              int rho, long n_max, long double term_eps) {
    ResidueClassTable t;
    t.m = m;
    t.j = j;
    t.rho = rho;
    t.n_max = n_max;
    const long K = (n_max - j) / m;
    t.raw.resize(K + 1);
    const long double factor = rho == 1 ? static_cast<long double>(m) : 1.0L;
    long double max_p = 0.0L, max_raw = 0.0L;
    for (long k = 0; k <= K; ++k) {
        const CL p = P[j + m * k];
        t.raw[k] = p - factor * Q[k];
        max_p = std::max(max_p, std::max(std::abs(p), factor * std::abs(Q[k])));
        max_raw = std::max(max_raw, std::abs(t.raw[k]));
    }
    // Class sums are differences of large prefix sums; their noise is set by
    // the prefix magnitude, not their own.
    t.sample_eps = term_eps * std::max(1.0L, max_p / std::max(max_raw, 1e-300L));
    return t;
}

// Householder QR least squares with a real design matrix and complex RHS.
struct FitResult {
    std::vector<CL> coef;
    std::vector<CL> residual;
};

FitResult qr_solve(std::vector<std::vector<long double>> cols, std::vector<CL> b) {
    const std::size_t ncols = cols.size();
    const std::size_t nrows = b.size();
    std::vector<long double> colscale(ncols, 1.0L);
    for (std::size_t c = 0; c < ncols; ++c) {
        long double mx = 0.0L;
        for (long double v : cols[c]) mx = std::max(mx, std::abs(v));
        colscale[c] = mx > 0 ? mx : 1.0L;
        for (long double& v : cols[c]) v /= colscale[c];
    }
    const std::vector<std::vector<long double>> a0 = cols;
    const std::vector<CL> b0 = b;

    for (std::size_t c = 0; c < ncols; ++c) {
        long double norm = 0.0L;
        for (std::size_t r = c; r < nrows; ++r) norm += cols[c][r] * cols[c][r];
        norm = std::sqrt(norm);
        if (norm == 0.0L) continue;
        const long double alpha = cols[c][c] >= 0 ? -norm : norm;
        std::vector<long double> v(nrows, 0.0L);
        v[c] = cols[c][c] - alpha;
        for (std::size_t r = c + 1; r < nrows; ++r) v[r] = cols[c][r];
        long double vnorm2 = 0.0L;
        for (std::size_t r = c; r < nrows; ++r) vnorm2 += v[r] * v[r];
        if (vnorm2 == 0.0L) continue;
        for (std::size_t cc = c; cc < ncols; ++cc) {
            long double dot = 0.0L;
            for (std::size_t r = c; r < nrows; ++r) dot += v[r] * cols[cc][r];
            const long double f = 2.0L * dot / vnorm2;
            for (std::size_t r = c; r < nrows; ++r) cols[cc][r] -= f * v[r];
        }
        CL dotb{};
        for (std::size_t r = c; r < nrows; ++r) dotb += v[r] * b[r];
        const CL fb = 2.0L * dotb / vnorm2;
        for (std::size_t r = c; r < nrows; ++r) b[r] -= fb * v[r];
    }

    std::vector<CL> x(ncols);
    for (std::size_t c = ncols; c-- > 0;) {
        CL acc = b[c];
        for (std::size_t cc = c + 1; cc < ncols; ++cc) acc -= cols[cc][c] * x[cc];
        x[c] = acc / cols[c][c];
    }

    FitResult out;
    out.coef.resize(ncols);
    for (std::size_t c = 0; c < ncols; ++c) out.coef[c] = x[c] / colscale[c];
    out.residual.resize(nrows);
    for (std::size_t r = 0; r < nrows; ++r) {
        CL pred{};
        for (std::size_t c = 0; c < ncols; ++c) pred += a0[c][r] * x[c];
        out.residual[r] = b0[r] - pred;
    }
    return out;
}

} // namespace

const char* to_string(MVerdict v) {
    switch (v) {
        case MVerdict::Value: return "value";
        case MVerdict::Drift: return "drift";
        case MVerdict::Oscillation: return "oscillation";
        case MVerdict::ExtensionDivergence: return "extension-divergence";
    }
    return "unknown";
}

const char* to_string(FitVerdict v) {
    switch (v) {
        case FitVerdict::Strong: return "strong";
        case FitVerdict::WeakOnly: return "weak-only";
        case FitVerdict::Degenerate: return "degenerate";
    }
    return "unknown";
}

TermSequence terms_from_family(const HFamily& fam, Complex s, double t0, double eval_tol) {
    TermSequence out;
    if (fam.has_ld()) {
        const CL sl = to_cl(s) - CL(1.0L, 0.0L);
        out.a = [fam, sl, t0](long n) -> CL {
            if (n == 0) return CL{};
            return eval_f_ld(fam, sl, (long double)t0 + n - 1);
        };
        out.sample_eps = 2 * kLdEps;
    } else {
        const Complex sm1 = s - Complex(1.0, 0.0);
        out.a = [fam, sm1, t0, eval_tol](long n) -> CL {
            if (n == 0) return CL{};
            return to_cl(eval_f(fam, sm1, t0 + n - 1, eval_tol).value);
        };
        out.sample_eps = std::max<long double>(4 * kDEps, eval_tol);
    }
    return out;
}

TermSequence grandi_terms() {
    TermSequence out;
    out.a = [](long n) -> CL {
        if (n == 0) return CL{};
        return CL(n % 2 == 1 ? 1.0L : -1.0L, 0.0L);
    };
    out.sample_eps = 2 * kLdEps;
    return out;
}

Complex ResidueClassTable::extended_at(long n) const {
    if (!extension_filled || n < j || n > n_eval)
        throw std::out_of_range("ResidueClassTable: extension not available at n");
    return extended[n - j];
}

SeriesStatus ResidueClassTable::status_at(long n) const {
    if (!extension_filled || n < j || n > n_eval)
        throw std::out_of_range("ResidueClassTable: extension not available at n");
    return extension_status[n - j];
}

ResidueClassTable class_partial_sums(const TermSequence& terms, int m, int j, int rho,
                                     long n_max) {
    if (m < 1) throw std::invalid_argument("class_partial_sums: m must be >= 1");
    if (j < 0 || j >= m) throw std::invalid_argument("class_partial_sums: j must lie in [0,m)");
    if (rho != 0 && rho != 1) throw std::invalid_argument("class_partial_sums: rho must be 0 or 1");
    if (n_max < j) throw std::invalid_argument("class_partial_sums: n_max must be >= j");

    const auto P = prefix_sums(terms.a, n_max);
    const long K = (n_max - j) / m;
    const auto Q = prefix_sums([&](long i) { return terms.a(m * i); }, K);
    return build_table(P, Q, m, j, rho, n_max, terms.sample_eps);
}

std::vector<ResidueClassTable> class_tables(const TermSequence& terms, int m, int rho,
                                            long n_max) {
    if (m < 1) throw std::invalid_argument("class_tables: m must be >= 1");
    if (rho != 0 && rho != 1) throw std::invalid_argument("class_tables: rho must be 0 or 1");
    const auto P = prefix_sums(terms.a, n_max);
    const auto Q = prefix_sums([&](long i) { return terms.a(m * i); }, n_max / m);
    std::vector<ResidueClassTable> out;
    out.reserve(m);
    for (int j = 0; j < m; ++j) out.push_back(build_table(P, Q, m, j, rho, n_max, terms.sample_eps));
    return out;
}

void extend_class(ResidueClassTable& table, long n_eval, double tol, int max_terms,
                  bool analytic_fallback) {
    if (n_eval < table.j) throw std::invalid_argument("extend_class: n_eval below class start");
    const long base_max = (n_eval - table.j) / table.m;
    if (static_cast<long>(table.raw.size()) < base_max + max_terms + 1)
        throw InsufficientWindow("extend_class: raw class sums shorter than n_eval + m*max_terms");

    detail::DifferenceTriangle<long double> tri(table.raw, max_terms, table.sample_eps);

    table.n_eval = n_eval;
    table.extended.assign(n_eval - table.j + 1, Complex{});
    table.extension_status.assign(n_eval - table.j + 1, SeriesStatus::Terminated);
    table.diverged_count = 0;
    table.fallback_count = 0;

    for (long n = table.j; n <= n_eval; ++n) {
        const long k0 = (n - table.j) / table.m;
        const long r = (n - table.j) % table.m;
        if (r == 0) {
            table.extended[n - table.j] = to_c(table.raw[k0]);
            table.extension_status[n - table.j] = SeriesStatus::Terminated;
            continue;
        }
        const long double h = static_cast<long double>(r) / table.m;
        auto res = detail::newton_shift_core<long double>(tri, k0, h, tol, max_terms);

        if (res.status == SeriesStatus::Diverged && analytic_fallback) {
            // Geometric difference columns Delta^v = Delta^1 r^{v-1} close to
            // (1+r)^h on the principal branch.
            const CL d1 = tri.delta(1, k0);
            bool geometric = std::abs(d1) > 0;
            CL ratio{};
            if (geometric) {
                ratio = tri.delta(2, k0) / d1;
                for (int v = 2; v <= 4 && geometric; ++v) {
                    const CL prev = tri.delta(v - 1, k0);
                    if (std::abs(prev) == 0) { geometric = false; break; }
                    const CL rr = tri.delta(v, k0) / prev;
                    if (std::abs(rr - ratio) > 1e-6L * (1.0L + std::abs(ratio))) geometric = false;
                }
            }
            if (geometric && std::abs(ratio) > 0) {
                const CL closure = table.raw[k0] + d1 * (std::pow(CL(1.0L) + ratio, CL(h)) - CL(1.0L)) / ratio;
                res.value = closure;
                res.status = SeriesStatus::Converged;
                ++table.fallback_count;
            }
        }

        table.extended[n - table.j] = to_c(res.value);
        table.extension_status[n - table.j] = res.status;
        if (res.status == SeriesStatus::Diverged) ++table.diverged_count;
    }
    table.extension_filled = true;
}

Complex sample_X(const std::vector<ResidueClassTable>& tables, long n) {
    if (tables.empty()) throw std::invalid_argument("sample_X: no class tables");
    const int m = tables.front().m;
    if (n < m - 1) throw std::invalid_argument("sample_X: n below the defined range");
    CL acc{};
    for (const auto& t : tables) acc += to_cl(t.extended_at(n));
    return to_c(acc / static_cast<long double>(m));
}

Expectation expectation(std::span<const Complex> samples, long n_end, double tol_drift,
                        double tol_const) {
    const std::size_t W = samples.size();
    if (W < 32) throw std::invalid_argument("expectation: need a window of at least 32 samples");

    Expectation out;
    CL mean{};
    double max_abs = 0.0;
    for (const Complex& x : samples) {
        mean += to_cl(x);
        max_abs = std::max(max_abs, std::abs(x));
    }
    mean /= static_cast<long double>(W);
    double dev = 0.0;
    for (const Complex& x : samples)
        dev = std::max(dev, static_cast<double>(std::abs(to_cl(x) - mean)));

    // Exact-constant short circuit: the tail value is the expectation.
    if (2.0 * dev < 1e-10) {
        out.value = to_c(mean);
        out.verdict = MVerdict::Value;
        out.residual_spread = dev;
        return out;
    }

    const double scale = std::max(1.0, max_abs);
    const long n_lo = n_end - static_cast<long>(W) + 1;

    std::vector<std::vector<long double>> cols(5, std::vector<long double>(W));
    std::vector<CL> rhs(W);
    for (std::size_t i = 0; i < W; ++i) {
        const long double n = static_cast<long double>(n_lo + static_cast<long>(i));
        const long double u = 1.0L / n;
        cols[0][i] = 1.0L;
        cols[1][i] = u;
        cols[2][i] = u * u;
        cols[3][i] = u * u * u;
        cols[4][i] = n / static_cast<long double>(n_end);
        rhs[i] = to_cl(samples[i]);
    }
    const FitResult fit = qr_solve(std::move(cols), std::move(rhs));

    // coef[4] is the drift contribution at n = n_end.
    out.drift = static_cast<double>(std::abs(fit.coef[4])) / scale;
    double spread = 0.0;
    int sign_changes = 0;
    for (std::size_t i = 0; i < W; ++i) {
        spread = std::max(spread, static_cast<double>(std::abs(fit.residual[i])));
        if (i > 0 && std::signbit(fit.residual[i].real()) != std::signbit(fit.residual[i - 1].real()))
            ++sign_changes;
    }
    out.residual_spread = spread / scale;

    if (out.drift > tol_drift) {
        out.verdict = MVerdict::Drift;
        return out;
    }
    if (out.residual_spread > tol_const) {
        out.verdict = sign_changes >= 3 ? MVerdict::Oscillation : MVerdict::Drift;
        return out;
    }
    out.value = to_c(fit.coef[0]);
    out.verdict = MVerdict::Value;
    return out;
}

std::map<int, Complex> RenormReport::expectations() const {
    std::map<int, Complex> out;
    for (const MRow& r : rows)
        if (r.expectation) out[r.m] = *r.expectation;
    return out;
}

namespace {

RenormReport run_pipeline(const TermSequence& terms, std::span<const int> m_list, int rho,
                          const RenormConfig& cfg, const HFamily* fam, Complex s, double t0) {
    if (m_list.empty()) throw std::invalid_argument("weak_report: m_list must be nonempty");
    for (int m : m_list)
        if (m < 2 || m > 12)
            throw std::invalid_argument("weak_report: m_list entries must lie in [2,12]");
    if (rho != 0 && rho != 1) throw std::invalid_argument("weak_report: rho must be 0 or 1");
    if (cfg.window < 32 || cfg.n_eval < cfg.window + 12)
        throw std::invalid_argument("weak_report: window/n_eval configuration too small");

    RenormReport report;
    report.weak = true;
    std::optional<Complex> b_at_t0; // cached across m for the cross-check

    for (int m : m_list) {
        const long n_max = cfg.n_eval + static_cast<long>(m) * cfg.max_terms;
        auto tables = class_tables(terms, m, rho, n_max);
        for (auto& t : tables)
            extend_class(t, cfg.n_eval, cfg.shift_tol, cfg.max_terms,
                         cfg.fallback_analytic_binomial);

        MRow row;
        row.m = m;
        row.tail_window_lo = std::max<long>(m, cfg.n_eval - cfg.window + 1);
        row.tail_window_hi = cfg.n_eval;

        int diverged = 0;
        for (const auto& t : tables) diverged += t.diverged_count;
        if (diverged > 0) {
            row.verdict = MVerdict::ExtensionDivergence;
            report.weak = false;
            report.rows.push_back(row);
            continue;
        }

        std::vector<Complex> xs;
        xs.reserve(row.tail_window_hi - row.tail_window_lo + 1);
        for (long n = row.tail_window_lo; n <= row.tail_window_hi; ++n)
            xs.push_back(sample_X(tables, n));
        for (const Complex& x : xs)
            row.constancy_deviation = std::max(row.constancy_deviation, std::abs(x - xs.front()));

        const Expectation e =
            expectation(xs, row.tail_window_hi, cfg.tol_drift, cfg.tol_const);
        row.verdict = e.verdict;
        row.expectation = e.value;
        if (!e.value) report.weak = false;

        if (fam && rho == 1 && row.expectation) {
            if (!b_at_t0) b_at_t0 = bernoulli_apply(*fam, s, t0, cfg.beval).value;
            const HFamily fm = scaled_family(*fam, m);
            const Complex bfm =
                bernoulli_apply(fm, s, (t0 + m - 1.0) / m, cfg.beval).value;
            const CL ms = std::exp(to_cl(s) * std::log((long double)m));
            const Complex closed = to_c(-(to_cl(*b_at_t0) - ms * to_cl(bfm)) / to_cl(s));
            row.cross_residual =
                std::abs(*row.expectation - closed) / (1.0 + std::abs(closed));
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace

RenormReport weak_report(const HFamily& fam, Complex s, double t0, int rho,
                         std::span<const int> m_list, const RenormConfig& cfg) {
    if (s == Complex(0.0, 0.0)) throw SIsZero("weak_report: s = 0 excluded");
    const TermSequence terms = terms_from_family(fam, s, t0, cfg.eval_tol);
    return run_pipeline(terms, m_list, rho, cfg, &fam, s, t0);
}

RenormReport weak_report_terms(const TermSequence& terms, std::span<const int> m_list, int rho,
                               const RenormConfig& cfg) {
    return run_pipeline(terms, m_list, rho, cfg, nullptr, Complex{}, 1.0);
}

double StrongFit::max_residual() const {
    double m = 0.0;
    for (const auto& [mm, r] : residuals) m = std::max(m, r);
    return m;
}

StrongFit strong_fit(const std::map<int, Complex>& E, double tol) {
    StrongFit out;
    std::vector<std::pair<int, Complex>> data;
    for (const auto& [m, e] : E)
        if (m >= 2) data.emplace_back(m, e);
    if (data.size() < 3)
        throw std::invalid_argument("strong_fit: need at least 3 values of m >= 2");

    double max_abs = 0.0;
    for (const auto& [m, e] : data) max_abs = std::max(max_abs, std::abs(e));
    if (max_abs < 1e-10) {
        out.verdict = FitVerdict::Degenerate;
        out.S = Complex(0.0, 0.0);
        out.c = Complex(0.0, 0.0);
        for (const auto& [m, e] : data) out.residuals[m] = std::abs(e);
        return out;
    }

    const int m1 = data[0].first;
    const int m2 = data[1].first;
    const CL e1 = to_cl(data[0].second);
    const CL e2 = to_cl(data[1].second);
    const long double l1 = std::log((long double)m1);
    const long double l2 = std::log((long double)m2);

    auto g = [&](CL c) { return e1 * (CL(1.0L) - std::exp(c * l2)) - e2 * (CL(1.0L) - std::exp(c * l1)); };
    auto gp = [&](CL c) { return -e1 * l2 * std::exp(c * l2) + e2 * l1 * std::exp(c * l1); };

    std::vector<CL> roots;
    for (double re = -6.0; re <= 6.0 + 1e-9; re += 0.5) {
        for (double im = -6.0; im <= 6.0 + 1e-9; im += 0.5) {
            CL c(re, im);
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                const CL d = gp(c);
                if (std::abs(d) < 1e-300L) break;
                const CL step = g(c) / d;
                c -= step;
                if (std::abs(c) > 60.0L) break;
                if (std::abs(step) < 1e-14L * (1.0L + std::abs(c))) {
                    ok = true;
                    break;
                }
            }
            if (!ok || std::abs(c) <= 1e-4L) continue;
            bool dup = false;
            for (const CL& r : roots)
                if (std::abs(r - c) < 1e-6L * (1.0L + std::abs(c))) dup = true;
            if (!dup) roots.push_back(c);
        }
    }

    struct Candidate {
        CL c;
        CL S;
        std::map<int, double> residuals;
        double max_res;
    };
    std::vector<Candidate> cands;
    for (const CL& c : roots) {
        const CL denom = CL(1.0L) - std::exp(c * l1);
        if (std::abs(denom) < 1e-12L) continue;
        Candidate cand;
        cand.c = c;
        cand.S = e1 / denom;
        cand.max_res = 0.0;
        const double sscale = 1.0 + static_cast<double>(std::abs(cand.S));
        for (const auto& [m, e] : data) {
            const CL pred = cand.S * (CL(1.0L) - std::exp(c * std::log((long double)m)));
            const double r = static_cast<double>(std::abs(to_cl(e) - pred)) / sscale;
            cand.residuals[m] = r;
            cand.max_res = std::max(cand.max_res, r);
        }
        cands.push_back(std::move(cand));
    }

    if (cands.empty()) {
        out.verdict = FitVerdict::WeakOnly;
        for (const auto& [m, e] : data) out.residuals[m] = std::abs(e);
        return out;
    }

    std::vector<const Candidate*> fitting;
    for (const auto& cand : cands)
        if (cand.max_res < tol) fitting.push_back(&cand);

    const Candidate* best = nullptr;
    if (!fitting.empty()) {
        best = fitting.front();
        for (const Candidate* cand : fitting)
            if (std::abs(cand->c) < std::abs(best->c)) best = cand;
        out.verdict = FitVerdict::Strong;
        out.tie_break_used = fitting.size() > 1;
    } else {
        best = &cands.front();
        for (const auto& cand : cands)
            if (cand.max_res < best->max_res) best = &cand;
        out.verdict = FitVerdict::WeakOnly;
    }
    out.S = to_c(best->S);
    out.c = to_c(best->c);
    out.residuals = best->residuals;
    return out;
}

} // namespace prenorm
