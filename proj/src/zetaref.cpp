#include "prenorm/zetaref.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "prenorm/errors.hpp"

namespace prenorm {

namespace {

using CL = std::complex<long double>;

constexpr int kBernoulliMax = 30;

// B_0..B_30 by the defining recurrence sum_{j<=k} C(k+1,j) B_j = 0,
// evaluated in long double to absorb the recurrence's cancellation.
const std::array<long double, kBernoulliMax + 1>& bernoulli_table() {
    static const auto table = [] {
        std::array<long double, kBernoulliMax + 1> b{};
        b[0] = 1.0L;
        // Pascal triangle rows up to C(31, j).
        long double binom[kBernoulliMax + 2][kBernoulliMax + 2] = {};
        for (int n = 0; n <= kBernoulliMax + 1; ++n) {
            binom[n][0] = 1.0L;
            for (int j = 1; j <= n; ++j)
                binom[n][j] = binom[n - 1][j - 1] + (j <= n - 1 ? binom[n - 1][j] : 0.0L);
        }
        for (int k = 1; k <= kBernoulliMax; ++k) {
            long double acc = 0.0L;
            for (int j = 0; j < k; ++j) acc += binom[k + 1][j] * b[j];
            b[k] = -acc / binom[k + 1][k];
        }
        return b;
    }();
    return table;
}

// x^e for real x > 0, principal branch.
CL cpowr(long double x, CL e) {
    if (e.imag() == 0.0L) {
        return CL(std::pow(x, e.real()), 0.0L);
    }
    return std::exp(e * std::log(x));
}

long double factorial_ld(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double bernoulli_number(int k) {
    if (k < 0) throw OutOfTable("bernoulli_number: k must be >= 0");
    if (k > kBernoulliMax) throw OutOfTable("bernoulli_number: table covers k <= 30");
    return static_cast<double>(bernoulli_table()[k]);
}

double bernoulli_polynomial(int n, double t) {
    if (n < 0 || n > kBernoulliMax - 1)
        throw OutOfTable("bernoulli_polynomial: n must lie in [0, 29]");
    // B_n(t) = sum_j C(n,j) B_j t^{n-j}
    long double acc = 0.0L;
    long double binom = 1.0L;
    for (int j = 0; j <= n; ++j) {
        acc += binom * bernoulli_table()[j] * std::pow((long double)t, (long double)(n - j));
        binom = binom * (n - j) / (j + 1);
    }
    return static_cast<double>(acc);
}

double digamma(double x) {
    if (!(x > 0)) throw std::domain_error("digamma: x must be positive");
    long double shifted = x;
    long double acc = 0.0L;
    while (shifted < 16.0L) {
        acc -= 1.0L / shifted;
        shifted += 1.0L;
    }
    long double inv = 1.0L / shifted;
    long double inv2 = inv * inv;
    long double res = std::log(shifted) - 0.5L * inv;
    long double p = inv2;
    for (int k = 1; k <= 8; ++k) {
        res -= bernoulli_table()[2 * k] / (2 * k) * p;
        p *= inv2;
    }
    return static_cast<double>(acc + res);
}

SeriesEval hurwitz_zeta(Complex s, double t, const EulerMaclaurinConfig& cfg) {
    if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
    if (!(t > 0)) throw std::domain_error("hurwitz_zeta: t must be positive");
    if (cfg.shift_terms < 1 || cfg.correction_terms < 1 || cfg.correction_terms > 15)
        throw std::invalid_argument("hurwitz_zeta: invalid Euler-Maclaurin configuration");

    const CL sl(s.real(), s.imag());
    const int K = cfg.correction_terms;

    int N = cfg.shift_terms;
    constexpr int kCap = 512;
    for (;; N *= 2) {
        if (N > kCap) N = kCap;
        // Truncated sum, Kahan-compensated.
        CL sum{}, comp{};
        for (int n = 0; n < N; ++n) {
            const CL term = cpowr((long double)t + n, -sl);
            const CL y = term - comp;
            const CL u = sum + y;
            comp = (u - sum) - y;
            sum = u;
        }
        const long double P = (long double)t + N;
        CL total = sum + comp;
        total += cpowr(P, 1.0L - sl) / (sl - 1.0L);
        total += cpowr(P, -sl) * 0.5L;

        // Correction terms B_{2k}/(2k)! (s)_{2k-1} P^{-s-2k+1}.
        CL rising = sl; // (s)_1
        CL last{};
        for (int k = 1; k <= K; ++k) {
            const long double coeff = bernoulli_table()[2 * k] / factorial_ld(2 * k);
            last = coeff * rising * cpowr(P, -sl - CL(2.0L * k - 1.0L));
            total += last;
            rising *= (sl + CL(2.0L * k - 1.0L)) * (sl + CL(2.0L * k));
        }

        const long double scale = std::max<long double>(std::abs(total), 1e-300L);
        if (std::abs(last) < cfg.tol * scale || N >= kCap) {
            if (std::abs(last) >= cfg.tol * scale) {
                throw NoConvergence("hurwitz_zeta: Euler-Maclaurin cap reached (|Im s| = " +
                                    std::to_string(std::abs(s.imag())) + ")");
            }
            SeriesEval out;
            out.value = Complex(static_cast<double>(total.real()), static_cast<double>(total.imag()));
            out.status = SeriesStatus::Converged;
            out.terms_used = N + K;
            out.tail_estimate = static_cast<double>(std::abs(last) / scale);
            out.rounding_floor = static_cast<double>(std::numeric_limits<double>::epsilon() *
                                                     std::max<long double>(1.0L, std::abs(total)));
            return out;
        }
    }
}

SeriesEval riemann_zeta(Complex s, const EulerMaclaurinConfig& cfg) {
    return hurwitz_zeta(s, 1.0, cfg);
}

SeriesEval dirichlet_eta(Complex s, const EulerMaclaurinConfig& cfg) {
    if (s == Complex(1.0, 0.0))
        throw PoleError("dirichlet_eta: s = 1 excluded by the zeta product form");
    SeriesEval z = riemann_zeta(s, cfg);
    const CL sl(s.real(), s.imag());
    const CL factor = 1.0L - std::exp((1.0L - sl) * std::log(2.0L));
    const CL v = factor * CL(z.value.real(), z.value.imag());
    z.value = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    return z;
}

SeriesEval dirichlet_L(Complex s, const Character& chi, const EulerMaclaurinConfig& cfg) {
    if (chi.principal() && s == Complex(1.0, 0.0))
        throw PoleError("dirichlet_L: principal character shares the pole at s = 1");
    const int k = chi.modulus;
    CL acc{};
    SeriesEval out;
    out.status = SeriesStatus::Converged;
    for (int i = 1; i <= k; ++i) {
        const Complex ci = chi.values[i - 1];
        if (ci == Complex(0.0, 0.0)) continue;
        const SeriesEval z = hurwitz_zeta(s, static_cast<double>(i) / k, cfg);
        acc += CL(ci.real(), ci.imag()) * CL(z.value.real(), z.value.imag());
        out.terms_used += z.terms_used;
        out.tail_estimate = std::max(out.tail_estimate, z.tail_estimate);
        out.rounding_floor = std::max(out.rounding_floor, z.rounding_floor);
    }
    const CL sl(s.real(), s.imag());
    acc *= cpowr((long double)k, -sl);
    out.value = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    return out;
}

Complex hurwitz_zeta_v(Complex s, double t) { return hurwitz_zeta(s, t).value; }

Complex riemann_zeta_v(Complex s) { return riemann_zeta(s).value; }

} // namespace prenorm
