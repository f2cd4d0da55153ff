#include "prenorm/hfun.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "prenorm/errors.hpp"
#include "prenorm/zetaref.hpp"

namespace prenorm {

namespace {

using CL = ComplexL;

CL cpow_ld(long double x, CL e) {
    if (e.imag() == 0.0L) return CL(std::pow(x, e.real()), 0.0L);
    return std::exp(e * std::log(x));
}

Complex cpow_d(double x, Complex e) {
    const CL v = cpow_ld(x, CL(e.real(), e.imag()));
    return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

CL falling_factorial_ld(CL s, int nu) {
    CL f(1.0L, 0.0L);
    for (int i = 0; i < nu; ++i) f *= s - CL(i, 0.0L);
    return f;
}

int euler_phi(int k) {
    int count = 0;
    for (int i = 1; i <= k; ++i) {
        int a = i, b = k;
        while (b) { int r = a % b; a = b; b = r; }
        if (a == 1) ++count;
    }
    return count;
}

} // namespace

SeriesEval eval_f(const HFamily& fam, Complex s, double t, double tol) {
    if (!(t > 0)) throw std::domain_error("eval_f: t must be positive");
    if (tol <= 0) throw std::invalid_argument("eval_f: tol must be positive");

    const double u = fam.scale * t;
    const Complex pre = fam.scale == 1.0 ? Complex(1.0, 0.0) : cpow_d(fam.scale, -s);

    if (fam.has_closed_form()) {
        SeriesEval out;
        out.value = pre * fam.closed_form(s, u);
        out.status = SeriesStatus::Converged;
        out.terms_used = 0;
        out.tail_estimate = 0.0;
        out.rounding_floor = std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(out.value));
        return out;
    }

    if (!(s.real() < fam.sigma_star - 0.1))
        throw OutsideConvergence("eval_f: " + fam.name + " requires Re(s) < sigma* - 0.1");

    const double g = fam.growth_exponent;
    const double p = s.real() - fam.nu + g; // term decay exponent; p < -1.1 here
    const CL sl(s.real(), s.imag());
    const CL expo = sl - CL(fam.nu, 0.0L);

    CL sum{}, comp{};
    long double max_partial = 0.0L;
    double cmax = 0.0;
    constexpr long kWarmup = 8;
    constexpr long kCap = 4'000'000;

    SeriesEval out;
    long i = 0;
    for (; i < kCap; ++i) {
        const long n = i + 1;
        const Complex cn = fam.coeff(n);
        const double ratio = std::abs(cn) / std::pow(static_cast<double>(n), g);
        if (n > kWarmup && cmax > 0.0 && ratio > 10.0 * cmax)
            throw CoefficientOverflow("eval_f: " + fam.name +
                                      " coefficient exceeds declared growth bound");
        cmax = std::max(cmax, ratio);

        if (cn != Complex(0.0, 0.0)) {
            const CL term = CL(cn.real(), cn.imag()) * cpow_ld((long double)u + i, expo);
            const CL y = term - comp;
            const CL v = sum + y;
            comp = (v - sum) - y;
            sum = v;
            max_partial = std::max(max_partial, std::abs(sum));
        }

        if (i >= kWarmup) {
            const double tail =
                cmax * std::pow(u + i, p + 1.0) / (-(p + 1.0));
            const double scale = std::max<double>(1.0, static_cast<double>(std::abs(sum)));
            if (tail < tol * scale) {
                out.status = SeriesStatus::Converged;
                out.tail_estimate = tail / scale;
                ++i;
                break;
            }
        }
    }
    if (i >= kCap) {
        out.status = SeriesStatus::Stagnated;
        out.tail_estimate = cmax * std::pow(u + i, p + 1.0) / (-(p + 1.0));
    }

    const CL total = CL(pre.real(), pre.imag()) * falling_factorial_ld(sl, fam.nu) * (sum + comp);
    out.value = Complex(static_cast<double>(total.real()), static_cast<double>(total.imag()));
    out.terms_used = static_cast<int>(std::min<long>(i, std::numeric_limits<int>::max()));
    out.rounding_floor = std::numeric_limits<double>::epsilon() *
                         static_cast<double>(std::max<long double>(1.0L, max_partial));
    return out;
}

ComplexL eval_f_ld(const HFamily& fam, ComplexL s, long double t) {
    if (!fam.has_ld())
        throw std::logic_error("eval_f_ld: family has no high-precision closed form");
    const long double u = fam.scale * t;
    CL pre(1.0L, 0.0L);
    if (fam.scale != 1.0) pre = cpow_ld((long double)fam.scale, -s);
    return pre * fam.closed_form_ld(s, u);
}

Complex term_a(const HFamily& fam, Complex s, double t0, long n, double tol) {
    if (n < 0) throw std::invalid_argument("term_a: n must be >= 0");
    if (n == 0) return Complex(0.0, 0.0);
    return eval_f(fam, s - Complex(1.0, 0.0), t0 + n - 1, tol).value;
}

HFamily scaled_family(const HFamily& fam, double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("scaled_family: m must be >= 1");
    HFamily out = fam;
    out.scale = fam.scale * m;
    if (m != 1.0) out.name = fam.name + "@" + std::to_string(m);
    return out;
}

double check_h_derivative(const HFamily& fam, Complex s, double t, double step, double tol) {
    if (!(step > 0) || t - step <= 0)
        throw std::invalid_argument("check_h_derivative: need 0 < step < t");
    const Complex hi = eval_f(fam, s, t + step, tol).value;
    const Complex lo = eval_f(fam, s, t - step, tol).value;
    const Complex num = (hi - lo) / (2.0 * step);
    const Complex ref = s * eval_f(fam, s - Complex(1.0, 0.0), t, tol).value;
    return std::abs(num - ref) / (1.0 + std::abs(ref));
}

// --- coefficient generators -------------------------------------------------

std::function<Complex(long)> constant_coeff() {
    return [](long) { return Complex(1.0, 0.0); };
}

std::function<Complex(long)> alternating_coeff() {
    return [](long n) { return Complex(n % 2 == 1 ? 1.0 : -1.0, 0.0); };
}

std::function<Complex(long)> character_coeff(const Character& chi) {
    return [chi](long n) { return chi(n); };
}

std::function<Complex(long)> ehrhart_coeff(Polytope shape, int dim) {
    if (dim < 1 || dim > 4) throw DimensionTooLarge("ehrhart_coeff: dimension must be in [1,4]");
    if (shape == Polytope::Box) {
        return [dim](long n) {
            double v = 1.0;
            for (int i = 0; i < dim; ++i) v *= static_cast<double>(n + 1);
            return Complex(v, 0.0);
        };
    }
    return [dim](long n) {
        // C(n+d, d)
        double v = 1.0;
        for (int i = 1; i <= dim; ++i) v = v * static_cast<double>(n + i) / i;
        return Complex(v, 0.0);
    };
}

double jacobi_polynomial(double a, double b, double x, int n) {
    if (n < 0) throw std::invalid_argument("jacobi_polynomial: n must be >= 0");
    long double p0 = 1.0L;
    if (n == 0) return 1.0;
    long double p1 = 0.5L * (a - b) + 0.5L * (a + b + 2.0L) * x;
    for (int k = 2; k <= n; ++k) {
        const long double k2ab = 2.0L * k + a + b;
        const long double c1 = 2.0L * k * (k + a + b) * (k2ab - 2.0L);
        const long double c2 = (k2ab - 1.0L) * ((k2ab) * (k2ab - 2.0L) * x + a * a - b * b);
        const long double c3 = 2.0L * (k + a - 1.0L) * (k + b - 1.0L) * k2ab;
        const long double pk = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = pk;
    }
    return static_cast<double>(p1);
}

std::function<Complex(long)> jacobi_coeff(double a, double b, double x) {
    if (!(x > -1.0 && x < 1.0)) throw std::domain_error("jacobi_coeff: x must lie in (-1,1)");
    struct Cache {
        std::mutex mu;
        std::vector<double> p; // p[n] = P_n^{(a,b)}(x)
    };
    auto cache = std::make_shared<Cache>();
    return [a, b, x, cache](long n) {
        if (n < 0) throw std::invalid_argument("jacobi_coeff: n must be >= 0");
        std::lock_guard<std::mutex> lock(cache->mu);
        auto& p = cache->p;
        if (p.empty()) {
            p.push_back(1.0);
            p.push_back(0.5 * (a - b) + 0.5 * (a + b + 2.0) * x);
        }
        while (static_cast<long>(p.size()) <= n) {
            const int k = static_cast<int>(p.size());
            const double k2ab = 2.0 * k + a + b;
            const double c1 = 2.0 * k * (k + a + b) * (k2ab - 2.0);
            const double c2 = (k2ab - 1.0) * (k2ab * (k2ab - 2.0) * x + a * a - b * b);
            const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * k2ab;
            p.push_back((c2 * p[k - 1] - c3 * p[k - 2]) / c1);
        }
        return Complex(p[n], 0.0);
    };
}

std::function<Complex(long)> gauss_ideal_coeff() {
    struct Cache {
        std::mutex mu;
        std::vector<int> c; // c[n], index 0 unused
    };
    auto cache = std::make_shared<Cache>();
    return [cache](long n) {
        if (n < 1) throw std::invalid_argument("gauss_ideal_coeff: n must be >= 1");
        std::lock_guard<std::mutex> lock(cache->mu);
        auto& c = cache->c;
        if (static_cast<long>(c.size()) <= n) {
            const long cap = std::max<long>(2 * n, 4096);
            c.assign(cap + 1, 0);
            for (long d = 1; d <= cap; d += 2) {
                const int chi = (d % 4 == 1) ? 1 : -1;
                for (long m = d; m <= cap; m += d) c[m] += chi;
            }
        }
        return Complex(static_cast<double>(c[n]), 0.0);
    };
}

namespace {

long count_simplex(int dim, int budget) {
    if (dim == 0) return 1;
    long total = 0;
    for (int x = 0; x <= budget; ++x) total += count_simplex(dim - 1, budget - x);
    return total;
}

} // namespace

long ehrhart_count_brute(Polytope shape, int dim, int n) {
    if (dim < 1 || dim > 4) throw DimensionTooLarge("ehrhart_count_brute: dimension must be in [1,4]");
    if (n < 0 || n > 64) throw std::invalid_argument("ehrhart_count_brute: n must lie in [0,64]");
    if (shape == Polytope::Box) {
        long total = 1;
        for (int i = 0; i < dim; ++i) total *= (n + 1);
        return total;
    }
    return count_simplex(dim, n);
}

// --- family catalogue ---------------------------------------------------------

HFamily make_power_family() {
    HFamily f;
    f.name = "power";
    f.nu = 0;
    f.growth_exponent = 0.0;
    f.sigma_star = 0.0;
    f.coeff = [](long n) { return Complex(n == 1 ? 1.0 : 0.0, 0.0); };
    f.closed_form = [](Complex s, double t) { return cpow_d(t, s); };
    f.closed_form_ld = [](CL s, long double t) { return cpow_ld(t, s); };
    return f;
}

HFamily make_hurwitz_family() {
    HFamily f;
    f.name = "hurwitz";
    f.nu = 1;
    f.growth_exponent = 0.0;
    f.sigma_star = 0.0;
    f.coeff = constant_coeff();
    f.closed_form = [](Complex s, double t) {
        if (s == Complex(0.0, 0.0)) return Complex(-1.0, 0.0); // removable: s zeta(1-s,t) -> -1
        return s * hurwitz_zeta_v(Complex(1.0, 0.0) - s, t);
    };
    return f;
}

HFamily make_eta_family() {
    HFamily f;
    f.name = "eta";
    f.nu = 0;
    f.growth_exponent = 0.0;
    f.sigma_star = -1.0;
    f.coeff = alternating_coeff();
    f.closed_form = [](Complex s, double t) {
        if (s == Complex(-1.0, 0.0))
            return Complex(0.5 * (digamma((t + 1.0) / 2.0) - digamma(t / 2.0)), 0.0);
        const Complex za = hurwitz_zeta_v(-s, t / 2.0);
        const Complex zb = hurwitz_zeta_v(-s, (t + 1.0) / 2.0);
        return cpow_d(2.0, s) * (za - zb);
    };
    return f;
}

HFamily make_character_family(const Character& chi) {
    HFamily f;
    const bool principal = chi.principal();
    f.name = principal ? "character0-mod" + std::to_string(chi.modulus)
                       : "character-mod" + std::to_string(chi.modulus);
    f.nu = principal ? 1 : 0;
    f.growth_exponent = 0.0;
    f.sigma_star = principal ? 0.0 : -1.0;
    f.coeff = character_coeff(chi);
    const int k = chi.modulus;
    if (principal) {
        f.closed_form = [chi, k](Complex s, double t) {
            if (s == Complex(0.0, 0.0)) return Complex(-euler_phi(k), 0.0);
            Complex acc(0.0, 0.0);
            for (int r = 1; r <= k; ++r) {
                if (chi.values[r - 1] == Complex(0.0, 0.0)) continue;
                acc += chi.values[r - 1] *
                       hurwitz_zeta_v(Complex(1.0, 0.0) - s, (t + r - 1.0) / k);
            }
            return s * cpow_d(k, s - Complex(1.0, 0.0)) * acc;
        };
    } else {
        f.closed_form = [chi, k](Complex s, double t) {
            Complex acc(0.0, 0.0);
            const bool at_pole = s == Complex(-1.0, 0.0);
            for (int r = 1; r <= k; ++r) {
                if (chi.values[r - 1] == Complex(0.0, 0.0)) continue;
                const double q = (t + r - 1.0) / k;
                // zeta(1,q) poles cancel since sum chi = 0; the finite part is -psi(q).
                const Complex z = at_pole ? Complex(-digamma(q), 0.0)
                                          : hurwitz_zeta_v(-s, q);
                acc += chi.values[r - 1] * z;
            }
            return cpow_d(k, s) * acc;
        };
    }
    return f;
}

HFamily make_ehrhart_family(Polytope shape, int dim) {
    HFamily f;
    f.name = (shape == Polytope::Box ? "ehrhart-box" : "ehrhart-simplex") + std::to_string(dim);
    f.nu = dim + 1;
    f.growth_exponent = static_cast<double>(dim);
    f.sigma_star = 0.0;
    f.coeff = ehrhart_coeff(shape, dim);
    return f;
}

HFamily make_jacobi_family(double a, double b, double x) {
    HFamily f;
    f.name = "jacobi";
    f.nu = 0;
    f.growth_exponent = 0.0;
    f.sigma_star = -1.0;
    // eq-series packaging is shifted by one against polynomial degree: c_n = P_{n-1}.
    auto by_degree = jacobi_coeff(a, b, x);
    f.coeff = [by_degree](long n) { return by_degree(n - 1); };
    return f;
}

HFamily make_gauss_ideal_family() {
    HFamily f;
    f.name = "gauss-ideal";
    f.nu = 1;
    f.growth_exponent = 0.5;
    f.sigma_star = -0.5;
    f.coeff = gauss_ideal_coeff();
    return f;
}

} // namespace prenorm
