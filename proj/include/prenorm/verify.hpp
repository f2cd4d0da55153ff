#pragma once

#include <string>
#include <vector>

namespace prenorm {

/// One checked residual with its bound.
struct ResidualRow {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
};

/// Operator identity grid: the B t^s oracle, pull-back independence, and the
/// r1..r5 residual suite across the family catalogue.
std::vector<ResidualRow> verify_operators();

/// Hurwitz zeta recurrence, distribution law, Bernoulli-polynomial values and
/// classical reference constants.
std::vector<ResidualRow> verify_oracle();

/// Coefficient-family checks: Ehrhart counts, Jacobi generating function,
/// character packaging, Gauss ideal counts, derivative identity, scalings.
std::vector<ResidualRow> verify_families();

/// Renormalization-engine checks: planted fits, degenerate input, convergent
/// consistency, constancy, and window independence.
std::vector<ResidualRow> verify_renorm();

bool all_pass(const std::vector<ResidualRow>& rows);

} // namespace prenorm
