#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace levydim {

/// Deterministic RNG stream addressed by (seed, purpose, shard ids).
/// Identical addresses reproduce identical draws on every platform; distinct
/// addresses give independent streams. Distributions are generated from raw
/// 64-bit output (no std::*_distribution), so sequences are stable across
/// standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t shard = 0,
              std::uint64_t sub_shard = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform_open();

    /// Standard normal via Box-Muller (one value per two uniforms).
    double normal();

    /// Unit-mean exponential.
    double exponential();

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; also used to combine stream ids.
std::uint64_t mix64(std::uint64_t x);

} // namespace levydim
