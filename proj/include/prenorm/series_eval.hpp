#pragma once

#include <complex>

namespace prenorm {

using Complex = std::complex<double>;

/// Outcome classification for a truncated infinite series.
enum class SeriesStatus {
    Converged,   ///< tail estimate dropped below the requested tolerance
    Terminated,  ///< the series became an exact finite sum (polynomial case)
    Diverged,    ///< term magnitudes grow; value holds the last partial sum
    Stagnated    ///< term budget exhausted before the tolerance was met
};

const char* to_string(SeriesStatus s);

/// Value of a truncated series together with its truncation bookkeeping.
///
/// tail_estimate is relative to max(1, |value|); a Converged status
/// guarantees tail_estimate <= the tolerance that was requested.
/// rounding_floor is an absolute estimate of the accuracy lost to
/// cancellation; a Diverged value must not be consumed as a result.
struct SeriesEval {
    Complex value{};
    SeriesStatus status = SeriesStatus::Converged;
    int terms_used = 0;
    double tail_estimate = 0.0;
    double rounding_floor = 0.0;

    bool usable() const {
        return status == SeriesStatus::Converged || status == SeriesStatus::Terminated;
    }
};

} // namespace prenorm
