#include "prenorm/character.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace prenorm {

namespace {
constexpr double kCharTol = 1e-12;
}

Character::Character(int k, std::vector<Complex> vals) : modulus(k), values(std::move(vals)) {
    if (k < 1) throw std::invalid_argument("Character: modulus must be >= 1");
    if (values.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("Character: value table must have length k");
    for (int i = 1; i <= k; ++i) {
        const Complex v = values[i - 1];
        const bool unit = std::gcd(i, k) == 1;
        if (unit) {
            if (std::abs(std::abs(v) - 1.0) > kCharTol)
                throw std::invalid_argument("Character: |chi(i)| must be 1 on units");
        } else if (std::abs(v) > kCharTol) {
            throw std::invalid_argument("Character: chi(i) must vanish when gcd(i,k) > 1");
        }
    }
    for (int a = 1; a <= k; ++a) {
        if (std::gcd(a, k) != 1) continue;
        for (int b = a; b <= k; ++b) {
            if (std::gcd(b, k) != 1) continue;
            const int ab = static_cast<int>((static_cast<long>(a) * b - 1) % k) + 1;
            if (std::abs(values[ab - 1] - values[a - 1] * values[b - 1]) > 1e-10)
                throw std::invalid_argument("Character: value table is not multiplicative");
        }
    }
}

Complex Character::operator()(long n) const {
    long r = n % modulus;
    if (r < 0) r += modulus;
    if (r == 0) r = modulus;
    return values[r - 1];
}

bool Character::principal() const {
    for (int i = 1; i <= modulus; ++i)
        if (std::gcd(i, modulus) == 1 && std::abs(values[i - 1] - 1.0) > kCharTol) return false;
    return true;
}

Character chi_minus4() {
    return Character(4, {Complex(1, 0), Complex(0, 0), Complex(-1, 0), Complex(0, 0)});
}

} // namespace prenorm
