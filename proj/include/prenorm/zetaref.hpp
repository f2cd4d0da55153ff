#pragma once

#include "prenorm/character.hpp"
#include "prenorm/series_eval.hpp"

namespace prenorm {

/// Euler-Maclaurin evaluation parameters for the Hurwitz zeta oracle.
/// N is doubled (cap 512) until the last correction term is below tol.
struct EulerMaclaurinConfig {
    int shift_terms = 15;      // N
    int correction_terms = 12; // K, 1 <= K <= 15
    double tol = 1e-12;
};

/// Bernoulli number B_k (B_1 = -1/2 convention), k <= 30; recurrence-computed
/// once at startup and cached.
double bernoulli_number(int k);

/// Bernoulli polynomial B_n(t), n <= 29.
double bernoulli_polynomial(int n, double t);

/// Digamma for real x > 0 (Euler-Maclaurin tail).
double digamma(double x);

/// Hurwitz zeta(s,t) for s != 1, t > 0.
SeriesEval hurwitz_zeta(Complex s, double t, const EulerMaclaurinConfig& cfg = {});

SeriesEval riemann_zeta(Complex s, const EulerMaclaurinConfig& cfg = {});

/// (1 - 2^{1-s}) zeta(s); s = 1 excluded.
SeriesEval dirichlet_eta(Complex s, const EulerMaclaurinConfig& cfg = {});

/// L(s, chi) = k^{-s} sum_i chi(i) zeta(s, i/k); the principal character
/// shares the pole at s = 1.
SeriesEval dirichlet_L(Complex s, const Character& chi, const EulerMaclaurinConfig& cfg = {});

/// Value-only shorthands; throw on the excluded arguments like the full calls.
Complex hurwitz_zeta_v(Complex s, double t);
Complex riemann_zeta_v(Complex s);

} // namespace prenorm
