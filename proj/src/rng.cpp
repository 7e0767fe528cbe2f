#include "levydim/rng.hpp"

#include <cmath>
#include <numbers>

namespace levydim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_purpose(std::string_view purpose) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : purpose) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t shard,
                     std::uint64_t sub_shard)
    : engine_(mix64(mix64(mix64(mix64(seed) ^ hash_purpose(purpose)) ^ shard) ^ sub_shard)) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
    for (;;) {
        const double u = uniform();
        if (u > 0.0) return u; // u < 1 already holds
    }
}

double RngStream::normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::exponential() {
    return -std::log(uniform_open());
}

} // namespace levydim
