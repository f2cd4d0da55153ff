#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prenorm/diffcalc.hpp"
#include "prenorm/errors.hpp"

using namespace prenorm;

namespace {

SeqWindow window_from(long base, std::initializer_list<double> vals) {
    std::vector<Complex> v;
    for (double x : vals) v.emplace_back(x, 0.0);
    return SeqWindow(base, std::move(v));
}

// Direct binomial-sum formula for Delta^k s(base), the independent route
// against the iterative table.
Complex delta_direct(const std::vector<Complex>& v, int k) {
    Complex acc(0, 0);
    double binom = 1;
    for (int i = 0; i <= k; ++i) {
        const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * v[i];
        binom = binom * (k - i) / (i + 1);
    }
    return acc;
}

// Newton interpolation oracle: value of the degree-(len-1) interpolating
// polynomial at base + h, built by divided differences on unit spacing.
Complex interp_at(const std::vector<Complex>& v, double h) {
    std::vector<Complex> d = v;
    for (std::size_t k = 1; k < v.size(); ++k)
        for (std::size_t i = v.size() - 1; i >= k; --i) d[i] = d[i] - d[i - 1];
    // d[k] now holds Delta^k s(0) ... via in-place differencing of rows
    Complex acc(0, 0);
    double binom = 1;
    for (std::size_t k = 0; k < v.size(); ++k) {
        acc += binom * d[k];
        binom = binom * (h - static_cast<double>(k)) / (static_cast<double>(k) + 1.0);
    }
    return acc;
}

} // namespace

TEST_CASE("gen_binomial basics") {
    CHECK(gen_binomial(1.0, 1) == doctest::Approx(1.0));
    CHECK(gen_binomial(0.5, 0) == doctest::Approx(1.0));
    CHECK(gen_binomial(0.5, 2) == doctest::Approx(-0.125));
    // exact zero beyond integer h
    CHECK(gen_binomial(3.0, 4) == 0.0);
    CHECK(gen_binomial(3.0, 7) == 0.0);
}

TEST_CASE("difference_table on k^2, constants and alternating signs") {
    const auto sq = difference_table(window_from(0, {0, 1, 4, 9}), 2);
    CHECK(sq.delta[0] == Complex(0, 0));
    CHECK(sq.delta[1] == Complex(1, 0));
    CHECK(sq.delta[2] == Complex(2, 0));

    const auto cst = difference_table(window_from(0, {3.5, 3.5, 3.5}), 2);
    CHECK(cst.delta[0] == Complex(3.5, 0));
    CHECK(cst.delta[1] == Complex(0, 0));
    CHECK(cst.delta[2] == Complex(0, 0));

    const auto alt = difference_table(window_from(0, {1, -1, 1, -1}), 3);
    CHECK(alt.delta[0] == Complex(1, 0));
    CHECK(alt.delta[1] == Complex(-2, 0));
    CHECK(alt.delta[2] == Complex(4, 0));
    CHECK(alt.delta[3] == Complex(-8, 0));
}

TEST_CASE("difference_table window guard") {
    CHECK_THROWS_AS(difference_table(window_from(0, {1, 2}), 2), InsufficientWindow);
    CHECK_THROWS_AS(SeqWindow(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(SeqWindow(0, {Complex(std::nan(""), 0)}), std::invalid_argument);
}

TEST_CASE("difference_table iterative rows match the direct binomial sum") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> v(12);
        for (auto& x : v) x = Complex(u(rng), u(rng));
        const SeqWindow w(0, v);
        const auto table = difference_table(w, 11);
        for (int k = 0; k <= 11; ++k) {
            const double gap = std::abs(table.delta[k] - delta_direct(v, k));
            CHECK(gap <= table.rounding_floor[k] + 64 * std::numeric_limits<double>::epsilon() *
                                                       (1.0 + std::abs(table.delta[k])));
        }
    }
}

TEST_CASE("newton_shift terminates on polynomial class sums") {
    // s~_k = k^2 with base k = 1 corresponds to the square class sums; the
    // interpolating value at 1.5 is 2.25.
    std::vector<Complex> v;
    for (int k = 1; k <= 12; ++k) v.emplace_back(static_cast<double>(k) * k, 0.0);
    const SeqWindow w(1, v);
    const SeriesEval r = newton_shift(w, 0.5, 1e-12, 10);
    CHECK(r.status == SeriesStatus::Terminated);
    CHECK(r.value.real() == doctest::Approx(2.25).epsilon(1e-13));
    CHECK(r.terms_used <= 3);
}

TEST_CASE("newton_shift on constants and h = 0") {
    std::vector<Complex> v(8, Complex(2.75, -1.0));
    const SeqWindow w(0, v);
    const SeriesEval r = newton_shift(w, 0.75, 1e-12, 7);
    CHECK(r.status == SeriesStatus::Terminated);
    CHECK(r.value == Complex(2.75, -1.0));

    std::vector<Complex> v2;
    for (int k = 0; k < 8; ++k) v2.emplace_back(std::sqrt(1.0 + k), 0.0);
    const SeriesEval r2 = newton_shift(SeqWindow(0, v2), 0.0, 1e-12, 7);
    CHECK(r2.value == v2[0]); // exact short-circuit
}

TEST_CASE("newton_shift diverges on alternating class sums") {
    std::vector<Complex> v;
    for (int k = 0; k < 41; ++k) v.emplace_back(k % 2 == 0 ? 1.0 : -1.0, 0.0);
    const SeriesEval r = newton_shift(SeqWindow(0, v), 0.5, 1e-12, 40);
    CHECK(r.status == SeriesStatus::Diverged);
}

TEST_CASE("newton_shift equals polynomial interpolation for degree <= 5") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int deg = 1 + static_cast<int>(rng() % 5);
        std::vector<Complex> coef(deg + 1);
        for (auto& c : coef) c = Complex(u(rng), u(rng));
        std::vector<Complex> v(16);
        for (int k = 0; k < 16; ++k) {
            Complex acc(0, 0);
            for (int d = deg; d >= 0; --d) acc = acc * static_cast<double>(k) + coef[d];
            v[k] = acc;
        }
        const double h = 0.125 + 0.75 * u(rng) * u(rng);
        const SeriesEval r = newton_shift(SeqWindow(0, v), std::abs(h), 1e-12, 15);
        CHECK(r.status == SeriesStatus::Terminated);
        CHECK(r.terms_used <= deg + 1);
        const Complex ref = interp_at(v, std::abs(h));
        CHECK(std::abs(r.value - ref) <= 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("newton_shift is linear where it converges") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        // smooth decaying windows sampled from x -> (t+x)^{-1.5} type curves
        const double t1 = 20.0 + 10.0 * std::abs(u(rng));
        const double t2 = 25.0 + 10.0 * std::abs(u(rng));
        std::vector<Complex> a(26), b(26), mix(26);
        const Complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
        for (int k = 0; k < 26; ++k) {
            a[k] = Complex(std::pow(t1 + k, -1.5), 0);
            b[k] = Complex(std::pow(t2 + k, -0.5), 0);
            mix[k] = alpha * a[k] + beta * b[k];
        }
        const double h = 0.3;
        const SeriesEval ra = newton_shift(SeqWindow(0, a), h, 1e-12, 25);
        const SeriesEval rb = newton_shift(SeqWindow(0, b), h, 1e-12, 25);
        const SeriesEval rm = newton_shift(SeqWindow(0, mix), h, 1e-12, 25);
        REQUIRE(ra.usable());
        REQUIRE(rb.usable());
        REQUIRE(rm.usable());
        const Complex lin = alpha * ra.value + beta * rb.value;
        CHECK(std::abs(rm.value - lin) <= 1e-12 * (1.0 + std::abs(lin)));
    }
}

TEST_CASE("newton_shift rejects h outside [0,1) and short windows") {
    std::vector<Complex> v(8, Complex(1, 0));
    CHECK_THROWS_AS(newton_shift(SeqWindow(0, v), 1.0, 1e-12, 7), std::invalid_argument);
    CHECK_THROWS_AS(newton_shift(SeqWindow(0, v), -0.1, 1e-12, 7), std::invalid_argument);
    CHECK_THROWS_AS(newton_shift(SeqWindow(0, v), 0.5, 1e-12, 8), InsufficientWindow);
}
