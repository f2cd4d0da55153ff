#include "prenorm/bernoulli_op.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "prenorm/detail/difference_engine.hpp"
#include "prenorm/diffcalc.hpp"
#include "prenorm/errors.hpp"

namespace prenorm {

namespace {

using CL = ComplexL;

CL to_cl(Complex z) { return CL(z.real(), z.imag()); }

Complex to_c(CL z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

double rel_residual(Complex a, Complex b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

// One sampling lane for a family at fixed s: long-double closed form when the
// family has one, otherwise the double evaluation upcast.
struct Sampler {
    const HFamily& fam;
    CL s;
    double eval_tol;
    long double eps;

    Sampler(const HFamily& f, Complex s_, double tol)
        : fam(f), s(to_cl(s_)), eval_tol(tol),
          eps(f.has_ld() ? 2 * std::numeric_limits<long double>::epsilon()
                         : 2 * std::numeric_limits<double>::epsilon()) {}

    CL operator()(long double t) const {
        if (fam.has_ld()) return eval_f_ld(fam, s, t);
        const Complex v =
            eval_f(fam, Complex(static_cast<double>(s.real()), static_cast<double>(s.imag())),
                   static_cast<double>(t), eval_tol)
                .value;
        return to_cl(v);
    }
};

int default_shift_base(double t) {
    if (t >= 30.0) return 0;
    return static_cast<int>(std::ceil(30.0 - t));
}

} // namespace

SeriesEval bernoulli_apply(const HFamily& fam, Complex s, double t, const BEvalConfig& cfg) {
    if (!(t > 0)) throw std::domain_error("bernoulli_apply: t must be positive");
    if (cfg.max_terms < 5) throw std::invalid_argument("bernoulli_apply: max_terms too small");

    const Sampler at_s(fam, s, cfg.eval_tol);
    const Sampler at_sm1(fam, s - Complex(1.0, 0.0), cfg.eval_tol);
    const CL sl = to_cl(s);

    int N = cfg.shift_base ? *cfg.shift_base : default_shift_base(t);
    if (N < 0) throw std::invalid_argument("bernoulli_apply: shift base must be >= 0");

    detail::SeriesResult<long double> raw;
    for (int attempt = 0;; ++attempt) {
        const long double T = (long double)t + N;
        std::vector<CL> samples(cfg.max_terms + 1);
        for (int k = 0; k <= cfg.max_terms; ++k) samples[k] = at_s(T + k);
        detail::DifferenceTriangle<long double> tri(std::move(samples), cfg.max_terms, at_s.eps);
        raw = detail::difference_series<long double>(
            tri, 0,
            [](int v) { return (v % 2 == 0 ? 1.0L : -1.0L) / (long double)(v + 1); },
            cfg.tol, cfg.max_terms);
        if (raw.status != SeriesStatus::Diverged || attempt >= 2) break;
        N = (N == 0) ? 16 : 2 * N;
    }

    SeriesEval out = raw.to_eval();
    if (raw.status == SeriesStatus::Diverged) return out;

    // Exact pull-back from T to t.
    CL pb{}, comp{};
    for (int i = 0; i < N; ++i) {
        const CL term = at_sm1((long double)t + i);
        const CL y = term - comp;
        const CL u = pb + y;
        comp = (u - pb) - y;
        pb = u;
    }
    out.value = to_c(raw.value - sl * (pb + comp));
    return out;
}

SeriesEval bernoulli_apply_scaled(const HFamily& fam, Complex s, double t, double h,
                                  const BEvalConfig& cfg) {
    if (!(h > 0)) throw std::invalid_argument("bernoulli_apply_scaled: h must be positive");
    if (h == 1.0) return bernoulli_apply(fam, s, t, cfg);
    const HFamily g = scaled_family(fam, h);
    SeriesEval out = bernoulli_apply(g, s, t / h, cfg);
    const CL factor = std::exp(to_cl(s) * std::log((long double)h));
    out.value = to_c(factor * to_cl(out.value));
    return out;
}

SeriesEval dirichlet_value(const HFamily& fam, Complex sigma, double t, const BEvalConfig& cfg) {
    const Complex s = Complex(1.0, 0.0) - sigma;
    if (s == Complex(0.0, 0.0))
        throw PoleError("dirichlet_value: pole at sigma = 1");
    SeriesEval out = bernoulli_apply(fam, s, t, cfg);
    out.value = -out.value / s;
    return out;
}

SeriesEval series_sum_A(const HFamily& fam, Complex s, double t, double tol) {
    if (!(t > 0)) throw std::domain_error("series_sum_A: t must be positive");
    if (!(s.real() < fam.sigma_star))
        throw OutsideConvergence("series_sum_A: " + fam.name +
                                 " requires Re(s) < " + std::to_string(fam.sigma_star));

    const Sampler at_sm1(fam, s - Complex(1.0, 0.0), std::min(tol, 1e-12));
    const double p = s.real() - 1.0 - fam.nu + fam.growth_exponent; // term decay exponent
    constexpr long kCap = 1'000'000;

    CL sum{}, comp{};
    double recent_max = 0.0;
    SeriesEval out;
    long n = 0;
    for (; n < kCap; ++n) {
        const CL term = at_sm1((long double)t + n);
        const CL y = term - comp;
        const CL u = sum + y;
        comp = (u - sum) - y;
        sum = u;

        const double mag = static_cast<double>(std::abs(term));
        recent_max = (n % 4 == 0) ? mag : std::max(recent_max, mag);
        if (n >= 8) {
            const double tail = recent_max * (t + n) / (-(p + 1.0));
            const double scale = std::max(1.0, static_cast<double>(std::abs(sum)));
            if (tail < tol * scale) {
                out.status = SeriesStatus::Converged;
                out.tail_estimate = tail / scale;
                ++n;
                break;
            }
        }
    }
    if (n >= kCap) out.status = SeriesStatus::Stagnated;
    out.value = to_c(sum + comp);
    out.terms_used = static_cast<int>(n);
    out.rounding_floor =
        std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(out.value));
    return out;
}

IdentityResiduals identity_residuals(const HFamily& fam, Complex s, double t, int m, double h,
                                     const BEvalConfig& cfg) {
    if (m < 1) throw std::invalid_argument("identity_residuals: m must be >= 1");
    if (!(h > 0.0 && h < 1.0))
        throw std::invalid_argument("identity_residuals: h must lie in (0,1)");

    IdentityResiduals out;
    const Complex b_t = bernoulli_apply(fam, s, t, cfg).value;

    // r1: distribution over residue shifts of the scaled companion.
    {
        const HFamily fm = scaled_family(fam, m);
        Complex acc(0.0, 0.0);
        for (int i = 0; i < m; ++i)
            acc += bernoulli_apply(fm, s, (t + i) / m, cfg).value;
        const CL ms = std::exp(to_cl(s) * std::log((long double)m));
        const Complex rhs = to_c(ms * to_cl(acc)) / static_cast<double>(m);
        out.distribution = rel_residual(b_t, rhs);
    }

    // r2: telescoping with N = 5.
    {
        constexpr int N = 5;
        Complex tail_sum(0.0, 0.0);
        for (int n = 0; n < N; ++n)
            tail_sum += eval_f(fam, s - Complex(1.0, 0.0), t + n, cfg.eval_tol).value;
        const Complex lhs = s * tail_sum;
        const Complex rhs = bernoulli_apply(fam, s, t + N, cfg).value - b_t;
        out.telescoping = rel_residual(lhs, rhs);
    }

    // r3: Newton fractional shift against the direct evaluation.
    {
        std::vector<Complex> samples(cfg.max_terms + 1);
        for (int k = 0; k <= cfg.max_terms; ++k)
            samples[k] = eval_f(fam, s, t + k, cfg.eval_tol).value;
        const SeqWindow w(0, std::move(samples));
        const SeriesEval shifted = newton_shift(w, h, cfg.tol, cfg.max_terms);
        const Complex direct = eval_f(fam, s, t + h, cfg.eval_tol).value;
        out.shift_equivalence = rel_residual(shifted.value, direct);
    }

    // r4: Delta(B f) = df/dt = s f(s-1, t).
    {
        const Complex b_t1 = bernoulli_apply(fam, s, t + 1, cfg).value;
        const Complex rhs = s * eval_f(fam, s - Complex(1.0, 0.0), t, cfg.eval_tol).value;
        out.derivative_link = rel_residual(b_t1 - b_t, rhs);
    }

    // r5: A-operator link, only inside the convergence region.
    if (s.real() < fam.sigma_star) {
        const Complex a = series_sum_A(fam, s, t, cfg.eval_tol).value;
        out.a_link = rel_residual(b_t, -s * a);
    }

    return out;
}

} // namespace prenorm
