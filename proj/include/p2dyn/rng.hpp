#pragma once

#include <complex>
#include <cstdint>

namespace p2dyn {

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based generator keyed by (seed, stream ids). Every draw is a pure
/// function of the key and the draw counter, so parallel schedules cannot
/// change the stream.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
               std::uint64_t c = 0) {
        std::uint64_t h = detail::mix64(seed);
        h = detail::mix64(h ^ (a + 0x632be59bd9b4e019ULL));
        h = detail::mix64(h ^ (b + 0x9e3779b97f4a7c15ULL));
        h = detail::mix64(h ^ (c + 0xd1b54a32d192ed03ULL));
        state_ = h;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // multiply-shift; bias is negligible for the small n used here
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

    std::complex<double> uniform_complex(double lo, double hi) {
        double re = uniform(lo, hi);
        double im = uniform(lo, hi);
        return {re, im};
    }

  private:
    std::uint64_t state_;
};

}  // namespace p2dyn
