#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace qrobust {

/**
 * Seeded pseudo-random source with a platform-independent output stream.
 *
 * The engine is std::mt19937_64, whose raw output sequence is fixed by the
 * C++ standard. The standard distributions are implementation-defined, so the
 * conversions below are written out by hand:
 *   - uniform01: top 53 bits of one engine output, scaled by 2^-53.
 *   - below(n): rejection sampling on the engine output (no modulo bias).
 *   - normal: Box-Muller on two uniform01 draws, spare value cached.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [0, n). Requires n > 0.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal variate.
    double normal();

    /// Fisher-Yates shuffle using below().
    template <typename T> void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for sub-stream `stream` of `master`. Pure and order-independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Two-level derivation, e.g. (epsilon index, round).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream);

} // namespace qrobust
