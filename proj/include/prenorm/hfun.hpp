#pragma once

#include <functional>
#include <string>

#include "prenorm/character.hpp"
#include "prenorm/series_eval.hpp"

namespace prenorm {

using ComplexL = std::complex<long double>;

/// Descriptor of a two-variable function f(s,t) built from a coefficient
/// series with a pole-order parameter nu:
///
///   f(s,t) = s(s-1)...(s-nu+1) * sum_{i>=0} c_{i+1} (t+i)^{s-nu}
///
/// absolutely convergent for Re(s) < sigma_star.  Families with a known
/// continuation carry closed_form and evaluate at any s; the rest are
/// restricted to the convergence region.  `scale` composes the companion
/// rule scale^{-s} f(s, scale*t) without touching the coefficient data.
struct HFamily {
    std::string name;
    int nu = 0;
    double growth_exponent = 0.0; ///< declared bound |c_n| = O(n^growth_exponent)
    double sigma_star = 0.0;      ///< abscissa of absolute convergence
    double scale = 1.0;
    std::function<Complex(long)> coeff;                   ///< c_n, n >= 1
    std::function<Complex(Complex, double)> closed_form;  ///< optional, any s
    std::function<ComplexL(ComplexL, long double)> closed_form_ld; ///< optional high-precision lane

    bool has_closed_form() const { return static_cast<bool>(closed_form); }
    bool has_ld() const { return static_cast<bool>(closed_form_ld); }
};

/// Evaluate f(s,t).  Closed-form families return directly; series families
/// require Re(s) < sigma_star - 0.1 and truncate under an integral tail bound.
SeriesEval eval_f(const HFamily& fam, Complex s, double t, double tol);

/// High-precision evaluation; only valid when fam.has_ld().
ComplexL eval_f_ld(const HFamily& fam, ComplexL s, long double t);

/// Series term a_n: a_0 = 0, a_n = f(s-1, t0+n-1) for n >= 1.
Complex term_a(const HFamily& fam, Complex s, double t0, long n, double tol);

/// Companion family f^m(s,t) = m^{-s} f(s, mt); m >= 1 (integer scalings in
/// the renormalization pipeline, any positive factor for operator work).
HFamily scaled_family(const HFamily& fam, double m);

/// Relative residual of the central-difference d/dt f(s,t) against s*f(s-1,t).
double check_h_derivative(const HFamily& fam, Complex s, double t, double step,
                          double tol = 1e-12);

// --- coefficient generators -------------------------------------------------

enum class Polytope { Box, Simplex };

std::function<Complex(long)> constant_coeff();
std::function<Complex(long)> alternating_coeff();
std::function<Complex(long)> character_coeff(const Character& chi);
/// Lattice-point counts |n P|: box -> (n+1)^d, simplex -> C(n+d,d); d <= 4.
std::function<Complex(long)> ehrhart_coeff(Polytope shape, int dim);
/// n -> P_n^{(a,b)}(x) by the three-term recurrence (indexed by degree).
std::function<Complex(long)> jacobi_coeff(double a, double b, double x);
/// n -> sum_{d|n} chi_{-4}(d): ideal counts of norm n in Z[i].
std::function<Complex(long)> gauss_ideal_coeff();

/// Direct lattice-point enumeration of n*P for validation, d <= 4.
long ehrhart_count_brute(Polytope shape, int dim, int n);

double jacobi_polynomial(double a, double b, double x, int n);

// --- family catalogue ---------------------------------------------------------

HFamily make_power_family();                       ///< f(s,t) = t^s
HFamily make_hurwitz_family();                     ///< nu=1, c=1; f = s zeta(1-s,t)
HFamily make_eta_family();                         ///< nu=0, c=(-1)^{n-1}
HFamily make_character_family(const Character& chi);
HFamily make_ehrhart_family(Polytope shape, int dim);
HFamily make_jacobi_family(double a, double b, double x); ///< x in (-1,1)
HFamily make_gauss_ideal_family();

} // namespace prenorm
