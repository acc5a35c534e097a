#pragma once

#include <array>
#include <cstdint>

#include "finlstm/matrix.hpp"

namespace finlstm {

/// Deterministic random source, pinned so every stream is a pure function of
/// its seed:
///   - generator: xoshiro256++, state seeded with four splitmix64 outputs
///   - uniform doubles: top 53 bits of one output word, giving [0, 1)
///   - standard normals: Marsaglia polar transform, spare deviate cached
///   - bounded indices: one output word reduced modulo n
/// Replaying a seed replays the stream bitwise.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    double next_unit();                         // [0, 1)
    double next_uniform(double lo, double hi);  // [lo, hi); requires lo < hi
    double next_gaussian();
    std::size_t next_index(std::size_t n);      // {0, ..., n-1}; requires n > 0

private:
    std::uint64_t seed_ = 0;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Matrix of i.i.d. standard normal entries.
Matrix gaussian_fill(Rng& rng, std::size_t rows, std::size_t cols);

/// Matrix of i.i.d. uniform entries on [lo, hi).
Matrix uniform_fill(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi);

}  // namespace finlstm
