#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "prenorm/bernoulli_op.hpp"
#include "prenorm/hfun.hpp"
#include "prenorm/series_eval.hpp"

namespace prenorm {

/// Knobs of the renormalization pipeline.
struct RenormConfig {
    long n_eval = 160;   ///< last index at which X_a is sampled
    int window = 64;     ///< tail-window width feeding the expectation
    int max_terms = 40;  ///< Newton-series budget for the fractional shifts
    double shift_tol = 1e-12;
    double eval_tol = 1e-12;
    double tol_drift = 1e-7; ///< threshold on |drift| * n_eval, relative to sample scale
    double tol_const = 1e-6; ///< residual-spread threshold, relative to sample scale
    double fit_tol = 1e-6;   ///< strong-fit residual tolerance
    bool fallback_analytic_binomial = false;
    BEvalConfig beval{};
};

/// Term source a(n), n >= 0, together with the relative accuracy of its values.
struct TermSequence {
    std::function<ComplexL(long)> a;
    long double sample_eps;
};

/// a_0 = 0, a_n = f(s-1, t0+n-1); uses the family's high-precision lane when present.
TermSequence terms_from_family(const HFamily& fam, Complex s, double t0, double eval_tol);

/// a_0 = 0, a_n = (-1)^{n+1}: the alternating unit series (not in the H class).
TermSequence grandi_terms();

/// Partial sums on one residue class mod m and their fractional-shift extension.
/// raw[k] = sum_{i<=j+mk} a_i - m^rho sum_{i<=k} a_{mi}.
struct ResidueClassTable {
    int m = 1;
    int j = 0;
    int rho = 1;
    long n_max = 0;
    std::vector<ComplexL> raw; ///< class sums indexed by k = (n-j)/m

    long n_eval = 0;
    bool extension_filled = false;
    std::vector<Complex> extended;             ///< s_[j](n) for n in [j, n_eval]
    std::vector<SeriesStatus> extension_status;
    int diverged_count = 0;
    int fallback_count = 0;
    long double sample_eps = 0;

    Complex extended_at(long n) const;
    SeriesStatus status_at(long n) const;
};

/// Raw class sums for one (m, j); prefix sums are Kahan-compensated.
ResidueClassTable class_partial_sums(const TermSequence& terms, int m, int j, int rho,
                                     long n_max);

/// All residue classes of one m, sharing a single prefix-sum pass.
std::vector<ResidueClassTable> class_tables(const TermSequence& terms, int m, int rho,
                                            long n_max);

/// Fills table.extended on [j, n_eval] by Newton shifts over the class-indexed
/// sequence; diverging shifts are counted (and optionally replaced by the
/// analytic binomial fallback for geometric difference columns).
void extend_class(ResidueClassTable& table, long n_eval, double tol, int max_terms,
                  bool analytic_fallback = false);

/// X_a(n) = (1/m) sum_j s_[j](n); requires every class extended at n.
Complex sample_X(const std::vector<ResidueClassTable>& tables, long n);

enum class MVerdict { Value, Drift, Oscillation, ExtensionDivergence };
const char* to_string(MVerdict v);

/// Tail-limit expectation of a sample window: exact-constant short circuit,
/// otherwise a least-squares fit alpha + beta1/n + beta2/n^2 + beta3/n^3 + drift*n.
struct Expectation {
    std::optional<Complex> value;
    MVerdict verdict = MVerdict::Value;
    double drift = 0;           ///< |drift| * n_end, relative to the sample scale
    double residual_spread = 0; ///< max post-fit residual, relative to the sample scale
};

Expectation expectation(std::span<const Complex> samples, long n_end, double tol_drift,
                        double tol_const);

/// Per-m outcome of the weak-renormalizability run.
struct MRow {
    int m = 0;
    std::optional<Complex> expectation; ///< present iff verdict == Value
    MVerdict verdict = MVerdict::Value;
    double constancy_deviation = 0; ///< max |X(n) - X(first)| over the tail window
    long tail_window_lo = 0;
    long tail_window_hi = 0;
    std::optional<double> cross_residual; ///< closed-form check, rho = 1 family runs
};

struct RenormReport {
    std::vector<MRow> rows;
    bool weak = false; ///< every m produced a finite expectation

    std::map<int, Complex> expectations() const;
};

/// Full pipeline over m_list (subset of [2,12]) with the closed-form
/// cross-check -(1/s)(B f(s,t0) - m^s B f^m(s,(t0+m-1)/m)) when rho = 1.
RenormReport weak_report(const HFamily& fam, Complex s, double t0, int rho,
                         std::span<const int> m_list, const RenormConfig& cfg = {});

/// Pipeline on a bare term sequence (no closed-form cross-check).
RenormReport weak_report_terms(const TermSequence& terms, std::span<const int> m_list, int rho,
                               const RenormConfig& cfg = {});

enum class FitVerdict { Strong, WeakOnly, Degenerate };
const char* to_string(FitVerdict v);

/// Fit E(m) = S (1 - m^c) by complex Newton iteration seeded from a coarse
/// grid; smallest-|c| root wins when several fit within tolerance.
struct StrongFit {
    Complex S{};
    Complex c{};
    std::map<int, double> residuals; ///< per-m relative residual
    FitVerdict verdict = FitVerdict::WeakOnly;
    bool tie_break_used = false;

    double max_residual() const;
};

StrongFit strong_fit(const std::map<int, Complex>& E, double tol);

} // namespace prenorm
