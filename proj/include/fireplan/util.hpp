#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace fireplan {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// FNV-1a 64-bit, used for provenance digests of pipeline artifacts.
inline uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(std::string_view bytes);

// Shortest round-trip decimal representation (std::to_chars). Keeps text
// artifacts (LP files, CSV) byte-stable across runs.
std::string format_double(double v);

// splitmix64. Generators use this instead of <random> distributions so that
// equal seeds give identical output on every platform and stdlib.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive bounds.
    int uniform_int(int lo, int hi) {
        return lo + int(next() % uint64_t(hi - lo + 1));
    }

private:
    uint64_t state_;
};

} // namespace fireplan
