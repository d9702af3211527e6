#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace hawkes {

// Splittable counter-style random streams built on the splitmix64 mixer.
// Every (experiment, replica, node) tuple hashes to an independent stream,
// so replicated runs are reproducible and order-independent across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1]: never returns 0, so -log() is always finite.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0,1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Exponential waiting time; rate 0 yields +infinity (no event).
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform_pos()) / rate;
    }

    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Knuth product method; mean is halved recursively so the rejection
    // count stays bounded. Exact for any finite mean.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        if (mean == 0.0) return 0;
        std::uint64_t n = 0;
        while (mean > 30.0) {
            n += poisson(mean / 2.0);
            mean /= 2.0;
        }
        double limit = std::exp(-mean);
        double prod = uniform_pos();
        while (prod > limit) {
            ++n;
            prod *= uniform_pos();
        }
        return n;
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Hash a master seed with a path of stream labels into a fresh stream seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = detail::mix64(master + 0x9E3779B97F4A7C15ULL);
    for (std::uint64_t part : path) {
        h = detail::mix64(h ^ (part + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    }
    return h;
}

inline RngStream derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return RngStream(derive_seed(master, path));
}

}  // namespace hawkes

#endif
