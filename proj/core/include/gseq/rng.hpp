#pragma once

#include <cstdint>

namespace gseq {

/// SplitMix64: tiny counter-derived generator (Steele, Lea & Flood's
/// mixing function). One instance per Monte Carlo replication, keyed by
/// (seed, replication index), so streams are independent of how
/// replications are sharded across workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in the open interval (0,1): 53-bit mantissa offset by half a
    /// ulp, so inverse-CDF transforms never see 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Substream for one replication: the seed and index are pushed through the
/// SplitMix64 output function so neighboring indices land far apart.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x5851f42d4c957f2dULL * (index + 1)));
    return SplitMix64(mixer.next());
}

/// Standard normal variate by the inverse-CDF method (monotone in the
/// uniform, which keeps common-random-number couplings monotone too).
double standard_normal(SplitMix64& rng);

} // namespace gseq
