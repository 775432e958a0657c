#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cdk::sample {

// Seeded sampling primitive shared by all strategies. Outputs are stable
// across platforms and standard libraries:
//   - the generator is std::mt19937_64, whose output sequence is fully
//     specified by the C++ standard;
//   - bounded draws use rejection sampling below (std::uniform_int_distribution
//     is implementation-defined and would not reproduce across toolchains);
//   - draws without replacement use a partial Fisher-Yates shuffle:
//       for i in 0..count-1: j = i + below(n - i); swap(v[i], v[j])
//     and the first `count` slots, in draw order, are the sample.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t rem = (UINT64_MAX % n + 1) % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (rem != 0 && x > UINT64_MAX - rem);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

// Indices of a uniform sample without replacement from [0, population),
// in draw order.
inline std::vector<std::size_t> draw_without_replacement(Rng& rng, std::size_t population,
                                                         std::size_t count) {
    std::vector<std::size_t> v(population);
    for (std::size_t i = 0; i < population; ++i) v[i] = i;
    if (count > population) count = population;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
        std::swap(v[i], v[j]);
    }
    v.resize(count);
    return v;
}

} // namespace cdk::sample
