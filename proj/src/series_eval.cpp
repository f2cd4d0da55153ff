#include "prenorm/series_eval.hpp"

namespace prenorm {

const char* to_string(SeriesStatus s) {
    switch (s) {
        case SeriesStatus::Converged: return "converged";
        case SeriesStatus::Terminated: return "terminated";
        case SeriesStatus::Diverged: return "diverged";
        case SeriesStatus::Stagnated: return "stagnated";
    }
    return "unknown";
}

} // namespace prenorm
