#pragma once

#include <cstdint>

namespace stands {

/// SplitMix64 generator (Steele, Lea & Flood; finalizer constants per Vigna's
/// reference implementation). The sequence is fully defined by the algorithm,
/// so a fixed seed yields bit-identical draws on every platform and standard
/// library — which is what makes simulation traces reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Disjoint stream families: calibration draws never overlap evaluation draws
/// for the same master seed.
enum class StreamPhase : std::uint64_t {
    Calibration = 0,
    Evaluation = 1,
    Sweep = 2,
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Seed for the (phase, run, sensor) sub-stream. Each identifier is folded
/// through the SplitMix64 finalizer, so streams are independent: adding
/// sensors or extending a run never perturbs the draws of existing ones.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, StreamPhase phase,
                                        std::uint64_t run, std::uint64_t sensor) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = master_seed;
    z = detail::mix64(z + golden * (static_cast<std::uint64_t>(phase) + 1));
    z = detail::mix64(z + golden * (run + 1));
    z = detail::mix64(z + golden * (sensor + 1));
    return z;
}

}  // namespace stands
