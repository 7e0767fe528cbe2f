#pragma once

#include "levydim/exponent.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace levydim {

enum class IntegrandKind { Hitting, LevelSet, MultipleTime };

/// Nonnegative criterion integrand on R^D. Values lie in [0, 1], eval(0) = 1
/// and eval(-xi) = eval(xi) for every spec-derived integrand.
struct Integrand {
    IntegrandKind kind = IntegrandKind::Hitting;
    std::optional<double> beta;
    std::optional<AdditiveProcessSpec> source;
    int dim = 1;
    std::function<double(std::span<const double>)> eval;
};

/// prod_j Re(1 / (1 + Psi_j(xi))) on R^D.
Integrand hitting_integrand(const AdditiveProcessSpec& spec);

/// [Re(1 / (1 + sum_j [Psi_j(xi)]^{1 - beta/N}))]^N on R^D; pointwise equal
/// to hitting_integrand(level_set_family(spec, beta)).
Integrand level_set_integrand(const AdditiveProcessSpec& spec, double beta);

/// [Re(1 / (1 + sum_j [Psi_j(xi_j - xi_{j-1})]^{1 - beta/k}))]^k on
/// R^{d(k-1)} with xi_0 = xi_k = 0.
Integrand multiple_time_integrand(const std::vector<ExponentExpr>& psis, double beta);
Integrand multiple_time_integrand(const ExponentExpr& psi, int k, double beta);

struct ShellOptions {
    int m_lo = -10;
    int m_hi = 30;
    int samples_per_shell = 20000;
    std::uint64_t seed = 1;
    int shards = 4;   // fixed shard layout; part of the reproducibility contract
    int threads = 0;  // 0 = hardware concurrency
};

/// Per-shell Monte Carlo estimates S_m of the integral over the dyadic shell
/// {2^m <= |xi| < 2^{m+1}}, plus the head ball |xi| < 2^{m_lo}.
struct ShellProfile {
    int m_lo = 0;
    int m_hi = 0;
    int dim = 1;
    std::vector<double> shell_sums; // S_m, index m - m_lo
    std::vector<double> shell_se;
    double head = 0.0;
    double head_se = 0.0;
    int samples_per_shell = 0;
    std::uint64_t seed = 0;
};

/// Estimate every shell integral with points uniform in direction and
/// log-uniform in radius, weighted by the exact sampling density
/// (r^D ln 2 omega_{D-1}); each point is paired with its reflection, so the
/// profile of xi -> f(-xi) is bit-identical under the same seed.
/// Deterministic for fixed (seed, samples, shard layout).
ShellProfile shell_estimates(const Integrand& f, const ShellOptions& opts);

enum class VerdictKind { Converges, Diverges, Inconclusive };

/// Outcome of the integral-convergence test. Converges carries the total
/// estimate (head + shells + geometric tail extrapolation); Inconclusive
/// carries diagnostics.
struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double tail_slope = 0.0;
    double slope_se = 0.0;
    double ci_half_width = 0.0;
    std::optional<double> estimate;
    std::string reason;
};

struct ClassifyOptions {
    double slope_margin = 0.25; // delta
    int tail_window = 8;
};

/// Classify by the least-squares slope s of log2 S_m over the last
/// tail_window nonzero shells: Converges when s + 2 se < -delta, Diverges
/// when s - 2 se > -delta and the tail is not numerically negligible,
/// Inconclusive otherwise. Boundary decay (slope near zero, as in
/// logarithmic divergence) never classifies as Converges.
Verdict classify(const ShellProfile& profile, const ClassifyOptions& opts);

const char* to_string(VerdictKind k);

} // namespace levydim
