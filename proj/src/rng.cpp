#include "finlstm/rng.hpp"

#include <cmath>

#include "finlstm/errors.hpp"

namespace finlstm {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw ContractError("next_uniform: requires lo < hi, got [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + ")");
    }
    double v = lo + next_unit() * (hi - lo);
    if (v >= hi) v = std::nextafter(hi, lo);  // rounding guard, keeps [lo, hi)
    return v;
}

double Rng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_unit() - 1.0;
        v = 2.0 * next_unit() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

std::size_t Rng::next_index(std::size_t n) {
    if (n == 0) throw ContractError("next_index: n must be positive");
    return static_cast<std::size_t>(next_u64() % n);
}

Matrix gaussian_fill(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix out(rows, cols);
    for (double& v : out.values()) v = rng.next_gaussian();
    return out;
}

Matrix uniform_fill(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
    if (!(lo < hi)) {
        throw ContractError("uniform_fill: requires lo < hi, got [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + ")");
    }
    Matrix out(rows, cols);
    for (double& v : out.values()) v = rng.next_uniform(lo, hi);
    return out;
}

}  // namespace finlstm
