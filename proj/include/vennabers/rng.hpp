#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace vennabers {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform, integer and Gaussian variates are derived here rather
/// than through <random> distributions, which are implementation-defined:
///   uniform  = (next >> 11) * 2^-53                       in [0, 1)
///   integer  = Lemire's multiply-shift with rejection     in [0, n)
///   gaussian = Box-Muller, cos branch only, u1 in (0, 1]
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for a named purpose ("split", "folds", ...).
    static Rng substream(std::uint64_t seed, std::string_view name);

    std::uint64_t next() { return engine_(); }
    double uniform();
    std::uint64_t below(std::uint64_t n);
    double gaussian();

    // Fisher-Yates (Randomize-in-Place) shuffle.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finaliser; used to mix seeds with stream names.
std::uint64_t mix_seed(std::uint64_t value);

// Seed for a named purpose derived from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

}  // namespace vennabers
