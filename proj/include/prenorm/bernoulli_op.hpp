#pragma once

#include <optional>

#include "prenorm/hfun.hpp"
#include "prenorm/series_eval.hpp"

namespace prenorm {

/// Parameters for evaluating the operator series B = sum (-Delta)^n / (n+1).
/// The series is summed at the shifted base T = t + N and pulled back through
/// the exact telescoping relation B f(s,t) = B f(s,t+N) - s sum_{i<N} f(s-1,t+i).
struct BEvalConfig {
    std::optional<int> shift_base; ///< N; default: smallest N with t + N >= 30
    double tol = 1e-11;
    int max_terms = 40;
    double eval_tol = 1e-12; ///< tolerance handed to family evaluations
};

/// B f(s, t).
SeriesEval bernoulli_apply(const HFamily& fam, Complex s, double t,
                           const BEvalConfig& cfg = {});

/// B_h f(s, t) through scaling conjugation: h^s (B g)(s, t/h) with
/// g the scaled companion of f by h.
SeriesEval bernoulli_apply_scaled(const HFamily& fam, Complex s, double t, double h,
                                  const BEvalConfig& cfg = {});

/// Continued Dirichlet value D^f(sigma, t) = -(1/s) B f(s,t) with s = 1 - sigma.
SeriesEval dirichlet_value(const HFamily& fam, Complex sigma, double t,
                           const BEvalConfig& cfg = {});

/// Direct summation sum_{n>=0} f(s-1, t+n); requires Re(s) below the family's
/// Dirichlet abscissa.
SeriesEval series_sum_A(const HFamily& fam, Complex s, double t, double tol);

/// Relative residuals of the operator identity suite.
struct IdentityResiduals {
    double distribution = 0;        ///< r1: B f vs (m^s/m) sum_i B f^m at (t+i)/m
    double telescoping = 0;         ///< r2: s sum_{n<5} f(s-1,t+n) vs B f(s,t+5) - B f(s,t)
    double shift_equivalence = 0;   ///< r3: Newton E^h on samples vs f(s,t+h)
    double derivative_link = 0;     ///< r4: Delta(B f) vs s f(s-1,t)
    std::optional<double> a_link;   ///< r5: B f + s sum f(s-1,t+n), convergent regime only

    double max_all() const {
        double m = std::max(std::max(distribution, telescoping),
                            std::max(shift_equivalence, derivative_link));
        if (a_link) m = std::max(m, *a_link);
        return m;
    }
};

IdentityResiduals identity_residuals(const HFamily& fam, Complex s, double t, int m, double h,
                                     const BEvalConfig& cfg = {});

} // namespace prenorm
