#pragma once

#include <cstdint>
#include <random>

namespace sparsestep {

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Combine a parent seed with a stream tag into a child seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);

/// Seedable, splittable generator whose output is fully specified:
/// the engine is std::mt19937_64 (bit-exact by the C++ standard) and the
/// real-valued transforms are implemented here rather than with the
/// implementation-defined <random> distributions.
class Rng
{
public:
    static constexpr const char* algorithm_id =
        "mt19937_64;seed=splitmix64-derive;uniform=53bit;normal=marsaglia-polar";

    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream keyed by tag.
    Rng split(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace sparsestep
