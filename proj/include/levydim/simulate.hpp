#pragma once

#include "levydim/exponent.hpp"
#include "levydim/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace levydim {

/// One draw of a standard alpha-stable subordinator at unit time,
/// E exp(-lambda S) = exp(-lambda^alpha), via the Kanter transformation:
/// with V uniform on (0, pi) and W unit-mean exponential,
///   A(V) = sin(alpha V)^{alpha/(1-alpha)} sin((1-alpha)V) / sin(V)^{1/(1-alpha)},
///   S = (A(V) / W)^{(1-alpha)/alpha}.
/// Constant time per draw; no rejection.
double sample_positive_stable(double alpha, RngStream& rng);

/// Nondecreasing path of an alpha-stable subordinator on an increasing grid
/// starting from sigma_0 = 0; increments over dt are exact draws dt^{1/alpha} S.
struct SubordinatorPath {
    double alpha = 0.5;
    std::vector<double> t_grid;
    std::vector<double> values;
};

SubordinatorPath simulate_subordinator(double alpha, std::vector<double> t_grid, RngStream& rng);

/// One draw of the saturated additive alpha-stable subordinator at
/// t in R^N_+: coordinate l is sum_j t_j^{1/alpha} S_{j,l} from N^2
/// independent stable draws.
std::vector<double> simulate_saturated_subordinator(double alpha, int n, std::span<const double> t,
                                                    RngStream& rng);

/// Values of Z_t = sum_j X^j_{t_j} on the product grid {0, h, ..., T}^N.
/// Component paths use exact increment draws (no discretization error).
struct FieldSample {
    int param_dim = 1;  // N
    int value_dim = 1;  // d
    double horizon = 1.0;
    double mesh = 1.0;
    std::uint64_t steps = 0; // grid side = steps + 1
    std::uint64_t seed = 0;
    std::uint64_t spec_hash = 0;
    std::vector<double> values; // (steps+1)^N rows of d coordinates, first index slowest

    std::uint64_t node_count() const;
    std::span<const double> value_at(std::uint64_t flat_index) const;
};

/// True when every component is an exactly simulable leaf (Brownian with
/// drift, isotropic stable, or a stable-subordinator marginal).
bool is_simulable(const AdditiveProcessSpec& spec);

FieldSample simulate_field(const AdditiveProcessSpec& spec, double horizon, double mesh,
                           std::uint64_t seed);

/// i.i.d. draws of a random vector in R^dim, stored row-major.
struct SampleSet {
    int dim = 1;
    std::vector<double> values;
    std::size_t count() const { return values.size() / static_cast<std::size_t>(dim); }
};

/// n draws of Z composed with an independent saturated alpha-stable
/// subordinator, observed at parameter point t: each draw evaluates the
/// components at exact subordinated times tau_j = t_j^{1/alpha} S_j.
SampleSet sample_composed(const AdditiveProcessSpec& spec, double alpha, std::span<const double> t,
                          std::size_t n, RngStream& rng);

/// n draws of Z_t itself at parameter point t.
SampleSet sample_additive(const AdditiveProcessSpec& spec, std::span<const double> t, std::size_t n,
                          RngStream& rng);

struct CfEstimate {
    Complex value;
    double se; // jackknife standard error of the mean, combined over Re/Im
};

/// (1/n) sum exp(i xi . x_m) over the sample set; needs >= 1000 samples.
CfEstimate empirical_cf(const SampleSet& samples, std::span<const double> xi);

// --- on-disk formats (versioned; CSV and compact binary framing) ---

void write_field_csv(const std::filesystem::path& path, const FieldSample& field);
void write_field_binary(const std::filesystem::path& path, const FieldSample& field);
FieldSample read_field(const std::filesystem::path& path); // sniffs the framing

void write_subordinator_csv(const std::filesystem::path& path, const SubordinatorPath& path_data);
void write_subordinator_binary(const std::filesystem::path& path, const SubordinatorPath& path_data);
SubordinatorPath read_subordinator(const std::filesystem::path& path);

void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples);
SampleSet read_samples_csv(const std::filesystem::path& path);

} // namespace levydim
