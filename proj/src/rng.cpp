#include "vennabers/rng.hpp"

#include <cmath>
#include <numbers>

namespace vennabers {

std::uint64_t mix_seed(std::uint64_t value) {
    value += 0x9e3779b97f4a7c15ULL;
    value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
    value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
    return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
    // FNV-1a over the stream name.
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return mix_seed(mix_seed(seed) ^ hash);
}

Rng Rng::substream(std::uint64_t seed, std::string_view name) { return Rng(derive_seed(seed, name)); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire, "Fast Random Integer Generation in an Interval".
    auto product = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
        const std::uint64_t threshold = -n % n;
        while (low < threshold) {
            product = static_cast<unsigned __int128>(next()) * n;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double Rng::gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace vennabers
