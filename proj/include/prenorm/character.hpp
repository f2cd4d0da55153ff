#pragma once

#include <vector>

#include "prenorm/series_eval.hpp"

namespace prenorm {

/// Dirichlet character given as an explicit value table chi(1..k).
/// Construction validates the support (zero exactly off the units),
/// |chi| = 1 on units, and total multiplicativity on a spot-check grid.
struct Character {
    int modulus = 1;
    std::vector<Complex> values;

    Character(int k, std::vector<Complex> vals);

    Complex operator()(long n) const;
    bool principal() const;
};

/// The nontrivial character mod 4: (1, 0, -1, 0).
Character chi_minus4();

} // namespace prenorm
