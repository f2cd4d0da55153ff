#include "prenorm/verify.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "prenorm/bernoulli_op.hpp"
#include "prenorm/hfun.hpp"
#include "prenorm/renorm.hpp"
#include "prenorm/zetaref.hpp"

namespace prenorm {

namespace {

using CL = ComplexL;

std::string fmt_cs(Complex s) {
    std::ostringstream os;
    os << s.real();
    if (s.imag() != 0) os << (s.imag() > 0 ? "+" : "") << s.imag() << "i";
    return os.str();
}

void push(std::vector<ResidualRow>& rows, std::string name, double value, double bound) {
    rows.push_back({std::move(name), value, bound, value < bound});
}

// --- truncated power series over long double, for the Jacobi generating
// function check (order cap kept tiny on purpose).
constexpr int kSeriesOrder = 9;
using Series = std::array<long double, kSeriesOrder + 1>;

Series series_mul(const Series& p, const Series& q) {
    Series r{};
    for (int i = 0; i <= kSeriesOrder; ++i)
        for (int j = 0; i + j <= kSeriesOrder; ++j) r[i + j] += p[i] * q[j];
    return r;
}

// (1 + u)^alpha for a series u with u_0 = 0.
Series series_binomial_power(const Series& u, long double alpha) {
    Series r{};
    r[0] = 1.0L;
    Series upow{};
    upow[0] = 1.0L;
    long double coeff = 1.0L;
    for (int j = 1; j <= kSeriesOrder; ++j) {
        upow = series_mul(upow, u);
        coeff *= (alpha - (j - 1)) / j;
        for (int i = 0; i <= kSeriesOrder; ++i) r[i] += coeff * upow[i];
    }
    return r;
}

// Power-series coefficients of 2^{a+b} R^{-1} (R+1-z)^{-a} (R+1+z)^{-b},
// R = (1 - 2xz + z^2)^{1/2}.
Series jacobi_gf_series(double a, double b, double x) {
    Series u{};
    u[1] = -2.0L * x;
    u[2] = 1.0L;
    const Series R = series_binomial_power(u, 0.5L);
    const Series Rinv = series_binomial_power(u, -0.5L);

    auto shifted_power = [&](long double zsign, long double expo) {
        // (R + 1 + zsign*z)^expo = 2^expo (1 + v)^expo with v = (R - 1 + zsign z)/2
        Series v{};
        for (int i = 0; i <= kSeriesOrder; ++i) v[i] = R[i] / 2.0L;
        v[0] -= 0.5L;
        v[1] += zsign / 2.0L;
        Series r = series_binomial_power(v, expo);
        const long double scale = std::pow(2.0L, expo);
        for (auto& c : r) c *= scale;
        return r;
    };

    Series out = series_mul(Rinv, shifted_power(-1.0L, -(long double)a));
    out = series_mul(out, shifted_power(+1.0L, -(long double)b));
    const long double scale = std::pow(2.0L, (long double)(a + b));
    for (auto& c : out) c *= scale;
    return out;
}

// Directly summed sum_{n>=1} 1/(q n)^2 with an Euler-Maclaurin tail.
double inverse_square_sum(int q) {
    long double sum = 0.0L;
    const long N = 20000;
    for (long n = N; n >= 1; --n) sum += 1.0L / ((long double)n * n);
    const long double t = N;
    sum += 1.0L / t - 1.0L / (2.0L * t * t) + 1.0L / (6.0L * t * t * t);
    return static_cast<double>(sum / ((long double)q * q));
}

} // namespace

bool all_pass(const std::vector<ResidualRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::vector<ResidualRow> verify_operators() {
    std::vector<ResidualRow> rows;
    const HFamily power = make_power_family();

    const Complex grid_s[] = {{-2, 0}, {-0.5, 0}, {0.5, 0}, {2, 0}, {3, 0}, {2, 3}};
    const double grid_t[] = {0.5, 1.0, 2.0, 10.0};
    for (Complex s : grid_s)
        for (double t : grid_t) {
            const Complex b = bernoulli_apply(power, s, t).value;
            const Complex ref = -s * hurwitz_zeta_v(Complex(1, 0) - s, t);
            push(rows, "B t^s oracle s=" + fmt_cs(s) + " t=" + std::to_string(t),
                 std::abs(b - ref), 1e-8);
        }

    // Pull-back independence: N against N + 7.
    {
        struct Probe { const HFamily* fam; Complex s; double t; };
        const HFamily hurwitz = make_hurwitz_family();
        const Probe probes[] = {{&power, {2, 0}, 1.0},
                                {&power, {2, 3}, 0.5},
                                {&power, {-0.5, 0}, 2.0},
                                {&hurwitz, {-2, 0}, 1.5}};
        for (const Probe& p : probes) {
            BEvalConfig c1, c2;
            const int n0 = p.t >= 30 ? 0 : static_cast<int>(std::ceil(30 - p.t));
            c1.shift_base = n0;
            c2.shift_base = n0 + 7;
            const Complex v1 = bernoulli_apply(*p.fam, p.s, p.t, c1).value;
            const Complex v2 = bernoulli_apply(*p.fam, p.s, p.t, c2).value;
            push(rows, "pull-back N vs N+7 " + p.fam->name + " s=" + fmt_cs(p.s),
                 std::abs(v1 - v2), 1e-9);
        }
    }

    // Identity residuals across the catalogue.
    struct Case {
        HFamily fam;
        Complex s;
        double t;
        int m;
        double h;
        double bound;
    };
    std::vector<Case> cases;
    cases.push_back({power, {2, 0}, 1.0, 2, 0.5, 1e-8});
    cases.push_back({power, {-1, 0}, 1.0, 3, 1.0 / 3.0, 1e-8});
    cases.push_back({power, {2, 3}, 2.0, 2, 0.5, 1e-8});
    cases.push_back({make_hurwitz_family(), {-2, 0}, 1.5, 3, 1.0 / 3.0, 1e-8});
    cases.push_back({make_eta_family(), {-2, 0}, 1.0, 2, 0.5, 1e-8});
    cases.push_back({make_character_family(chi_minus4()), {-2, 0}, 1.0, 2, 0.5, 1e-8});
    cases.push_back({make_ehrhart_family(Polytope::Box, 2), {-3, 0}, 1.0, 2, 0.5, 1e-6});
    cases.push_back({make_ehrhart_family(Polytope::Simplex, 2), {-3, 0}, 1.0, 2, 0.5, 1e-6});
    cases.push_back({make_jacobi_family(0, 0, 0.5), {-3.5, 0}, 1.0, 2, 0.5, 1e-6});
    cases.push_back({make_gauss_ideal_family(), {-3, 0}, 1.0, 2, 0.5, 1e-6});

    for (const Case& c : cases) {
        const IdentityResiduals r = identity_residuals(c.fam, c.s, c.t, c.m, c.h);
        const std::string tag = c.fam.name + " s=" + fmt_cs(c.s);
        push(rows, "r1 distribution " + tag, r.distribution, c.bound);
        push(rows, "r2 telescoping " + tag, r.telescoping, c.bound);
        push(rows, "r3 shift equivalence " + tag, r.shift_equivalence, c.bound);
        push(rows, "r4 derivative link " + tag, r.derivative_link, c.bound);
        if (r.a_link) push(rows, "r5 A-link " + tag, *r.a_link, c.bound);
    }
    return rows;
}

std::vector<ResidualRow> verify_oracle() {
    std::vector<ResidualRow> rows;
    const Complex grid_s[] = {{-3, 0}, {-1, 0}, {0.5, 0}, {2, 0}, {2, 3}};
    const double grid_t[] = {0.25, 1.0, 2.0, 7.5};

    for (Complex s : grid_s)
        for (double t : grid_t) {
            const Complex lhs = hurwitz_zeta_v(s, t) - hurwitz_zeta_v(s, t + 1);
            const CL rhs = std::exp(-CL(s.real(), s.imag()) * std::log((long double)t));
            push(rows, "hurwitz recurrence s=" + fmt_cs(s) + " t=" + std::to_string(t),
                 std::abs(lhs - Complex((double)rhs.real(), (double)rhs.imag())), 1e-10);
        }

    for (int m : {2, 3})
        for (Complex s : grid_s)
            for (double t : grid_t) {
                Complex acc(0, 0);
                for (int i = 0; i < m; ++i) acc += hurwitz_zeta_v(s, (t + i) / m);
                const CL ms = std::exp(CL(s.real(), s.imag()) * std::log((long double)m));
                const Complex rhs =
                    Complex((double)ms.real(), (double)ms.imag()) * hurwitz_zeta_v(s, t);
                push(rows,
                     "hurwitz distribution m=" + std::to_string(m) + " s=" + fmt_cs(s) +
                         " t=" + std::to_string(t),
                     std::abs(acc - rhs), 1e-9);
            }

    for (int n = 0; n <= 3; ++n)
        for (double t : {0.5, 1.0, 2.0}) {
            const Complex z = hurwitz_zeta_v(Complex(-n, 0), t);
            const double ref = -bernoulli_polynomial(n + 1, t) / (n + 1);
            push(rows, "zeta(-n,t) Bernoulli n=" + std::to_string(n) + " t=" + std::to_string(t),
                 std::abs(z - Complex(ref, 0)), 1e-10);
        }

    push(rows, "zeta(-1) = -1/12", std::abs(riemann_zeta_v(Complex(-1, 0)) - Complex(-1.0 / 12, 0)),
         1e-12);
    push(rows, "zeta(2) = pi^2/6",
         std::abs(riemann_zeta_v(Complex(2, 0)) - Complex(M_PI * M_PI / 6, 0)), 1e-10);
    push(rows, "zeta(0,0.75) = -0.25",
         std::abs(hurwitz_zeta_v(Complex(0, 0), 0.75) - Complex(-0.25, 0)), 1e-12);
    push(rows, "eta(2) = pi^2/12",
         std::abs(dirichlet_eta(Complex(2, 0)).value - Complex(M_PI * M_PI / 12, 0)), 1e-10);
    push(rows, "L(2,chi_-4) = Catalan",
         std::abs(dirichlet_L(Complex(2, 0), chi_minus4()).value -
                  Complex(0.91596559417721901505, 0)),
         1e-10);
    push(rows, "B_12 = -691/2730", std::abs(bernoulli_number(12) + 691.0 / 2730.0), 1e-15);
    return rows;
}

std::vector<ResidualRow> verify_families() {
    std::vector<ResidualRow> rows;

    for (int d = 1; d <= 3; ++d) {
        auto box = ehrhart_coeff(Polytope::Box, d);
        auto simplex = ehrhart_coeff(Polytope::Simplex, d);
        double worst_box = 0, worst_simplex = 0;
        for (int n = 0; n <= 20; ++n) {
            worst_box = std::max(worst_box, std::abs(box(n).real() -
                                                     ehrhart_count_brute(Polytope::Box, d, n)));
            worst_simplex = std::max(
                worst_simplex,
                std::abs(simplex(n).real() - ehrhart_count_brute(Polytope::Simplex, d, n)));
        }
        push(rows, "ehrhart box d=" + std::to_string(d) + " exact", worst_box, 0.5);
        push(rows, "ehrhart simplex d=" + std::to_string(d) + " exact", worst_simplex, 0.5);
    }

    for (auto [a, b, x] : {std::array<double, 3>{0, 0, 0.5}, {0.5, -0.25, 0.3}}) {
        const Series gf = jacobi_gf_series(a, b, x);
        double worst = 0;
        for (int n = 0; n <= 8; ++n)
            worst = std::max(worst,
                             std::abs((double)gf[n] - jacobi_polynomial(a, b, x, n)));
        std::ostringstream tag;
        tag << "jacobi generating function a=" << a << " b=" << b << " x=" << x;
        push(rows, tag.str(), worst, 1e-9);
    }

    {
        auto gauss = gauss_ideal_coeff();
        push(rows, "gauss ideal c_5 = 2", std::abs(gauss(5).real() - 2.0), 0.5);
        push(rows, "gauss ideal c_3 = 0", std::abs(gauss(3).real()), 0.5);
        long double sum = 0;
        const long N = 10000;
        for (long n = 1; n <= N; ++n) sum += gauss(n).real();
        const double ratio = static_cast<double>(sum / N) / (M_PI / 4.0);
        push(rows, "gauss circle trend at N=1e4", std::abs(ratio - 1.0), 0.10);
    }

    {
        // Character packaging against the L-function decomposition:
        // eval_f(chi family, s, 1) = L(-s, chi) for the nontrivial character.
        const HFamily fam = make_character_family(chi_minus4());
        for (double sigma : {1.5, 2.0, 3.0}) {
            const Complex lhs = eval_f(fam, Complex(-sigma, 0), 1.0, 1e-12).value;
            const Complex rhs = dirichlet_L(Complex(sigma, 0), chi_minus4()).value;
            push(rows, "character packaging sigma=" + std::to_string(sigma), std::abs(lhs - rhs),
                 1e-8);
        }
    }

    {
        const HFamily power = make_power_family();
        push(rows, "h-derivative power s=3 t=2",
             check_h_derivative(power, Complex(3, 0), 2.0, 1e-5), 1e-8);
        push(rows, "h-derivative hurwitz s=-2 t=1.5",
             check_h_derivative(make_hurwitz_family(), Complex(-2, 0), 1.5, 1e-4), 1e-6);
        push(rows, "h-derivative jacobi s=-4 t=2",
             check_h_derivative(make_jacobi_family(0, 0, 0.5), Complex(-4, 0), 2.0, 1e-4), 1e-6);
    }

    {
        // Scale invariance of t^s and the identity scaling m = 1.
        const HFamily power = make_power_family();
        const HFamily p2 = scaled_family(power, 2.0);
        const HFamily hz = make_hurwitz_family();
        const HFamily hz1 = scaled_family(hz, 1.0);
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> re(-3.0, 3.0), tt(0.3, 5.0);
        double worst_pow = 0, worst_id = 0;
        for (int i = 0; i < 10; ++i) {
            const Complex s(re(rng), re(rng));
            const double t = tt(rng);
            worst_pow = std::max(worst_pow, std::abs(eval_f(p2, s, t, 1e-12).value -
                                                     eval_f(power, s, t, 1e-12).value));
            worst_id = std::max(worst_id, std::abs(eval_f(hz1, s, t, 1e-12).value -
                                                   eval_f(hz, s, t, 1e-12).value));
        }
        push(rows, "power family scale invariance", worst_pow, 1e-12);
        push(rows, "scaled_family m=1 identity", worst_id, 1e-15);
        const Complex lhs = eval_f(scaled_family(hz, 2.0), Complex(-2, 0), 1.0, 1e-12).value;
        const Complex rhs = 4.0 * Complex(-2, 0) * hurwitz_zeta_v(Complex(3, 0), 2.0);
        push(rows, "scaled hurwitz m=2 oracle", std::abs(lhs - rhs), 1e-10);
    }
    return rows;
}

std::vector<ResidualRow> verify_renorm() {
    std::vector<ResidualRow> rows;

    // Planted strong fits.
    {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> uc(-4.0, 4.0);
        std::uniform_real_distribution<double> us(0.25, 4.0);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> noise(-1e-10, 1e-10);
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            Complex c(uc(rng), uc(rng));
            while (std::abs(c) < 0.2) c = Complex(uc(rng), uc(rng));
            const double mag = us(rng);
            const double phase = ph(rng);
            const Complex S(mag * std::cos(phase), mag * std::sin(phase));
            std::map<int, Complex> E;
            for (int m = 2; m <= 6; ++m) {
                const CL mc = std::exp(CL(c.real(), c.imag()) * std::log((long double)m));
                Complex e = S * (Complex(1, 0) - Complex((double)mc.real(), (double)mc.imag()));
                e += Complex(noise(rng), noise(rng)) * std::abs(e);
                E[m] = e;
            }
            const StrongFit fit = strong_fit(E, 1e-6);
            if (fit.verdict != FitVerdict::Strong) {
                worst = 1.0;
                break;
            }
            worst = std::max(worst, std::abs(fit.S - S) / std::abs(S));
            worst = std::max(worst, std::abs(fit.c - c) / std::abs(c));
        }
        push(rows, "planted fit recovery (20 draws)", worst, 1e-6);
    }

    {
        std::map<int, Complex> zeros = {{2, {0, 0}}, {3, {0, 0}}, {4, {0, 0}}};
        const StrongFit fit = strong_fit(zeros, 1e-6);
        push(rows, "all-zero input degenerate",
             fit.verdict == FitVerdict::Degenerate ? 0.0 : 1.0, 0.5);
    }

    // Convergent consistency: a_n = 1/n^2, rho = 0, E(m) = L - L_m.
    {
        RenormConfig cfg;
        cfg.n_eval = 320;
        cfg.window = 64;
        const HFamily power = make_power_family();
        const int ms[] = {2, 3};
        const RenormReport rep = weak_report(power, Complex(-1, 0), 1.0, 0, ms, cfg);
        const double L = inverse_square_sum(1);
        for (const MRow& row : rep.rows) {
            const double ref = L - inverse_square_sum(row.m);
            const double err = row.expectation ? std::abs(*row.expectation - Complex(ref, 0)) : 1.0;
            push(rows, "convergent E(m)=L-L_m m=" + std::to_string(row.m), err, 1e-8);
        }
    }

    // Constancy of X for the scale-invariant family.
    {
        RenormConfig cfg;
        const TermSequence terms = terms_from_family(make_power_family(), Complex(2, 0), 1.0,
                                                     cfg.eval_tol);
        for (int m : {2, 5}) {
            const long n_max = cfg.n_eval + m * cfg.max_terms;
            auto tables = class_tables(terms, m, 1, n_max);
            for (auto& t : tables) extend_class(t, cfg.n_eval, cfg.shift_tol, cfg.max_terms);
            double dev = 0;
            const Complex x0 = sample_X(tables, m);
            for (long n = m; n <= cfg.n_eval; ++n)
                dev = std::max(dev, std::abs(sample_X(tables, n) - x0));
            push(rows, "X_a constancy full range s=2 m=" + std::to_string(m), dev, 1e-9);
        }
    }

    // Window independence for constant tails.
    {
        bool identical = true;
        Complex ref;
        const Complex c(0.25, 0.0);
        for (int w : {32, 64, 128}) {
            std::vector<Complex> xs(w, c);
            const Expectation e = expectation(xs, 160, 1e-7, 1e-6);
            if (!e.value) identical = false;
            if (w == 32)
                ref = *e.value;
            else if (e.value && *e.value != ref)
                identical = false;
        }
        push(rows, "window independence of constant tail", identical ? 0.0 : 1.0, 0.5);
    }
    return rows;
}

} // namespace prenorm
