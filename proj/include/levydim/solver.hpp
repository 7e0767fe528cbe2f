#pragma once

#include "levydim/criteria.hpp"
#include "levydim/exponent.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace levydim {

/// User-asserted analytic hypotheses (positive q-potential densities). They
/// cannot be verified numerically; they gate nothing and are echoed into
/// every report so results are not over-claimed.
struct HypothesisFlags {
    bool q_potential_density_ae_positive = false;
    bool per_beta = false;
};

/// Either the zero set of an additive process or the k-multiple-time /
/// intersection-time set of k independent processes on R^d.
struct DimensionProblem {
    enum class Kind { LevelSet, MultipleTimes };

    Kind kind = Kind::LevelSet;
    AdditiveProcessSpec spec;          // LevelSet
    std::vector<ExponentExpr> psis;    // MultipleTimes: k exponents on R^d
    HypothesisFlags hypothesis_flags;

    static DimensionProblem level_set(AdditiveProcessSpec spec, HypothesisFlags flags = {});
    static DimensionProblem multiple_times(std::vector<ExponentExpr> psis, HypothesisFlags flags = {});
    static DimensionProblem multiple_times(const ExponentExpr& psi, int k, HypothesisFlags flags = {});

    /// Parameter count N (k for multiple times).
    int parameter_count() const;
    /// Integration dimension D (d(k-1) for multiple times).
    int integration_dim() const;
    /// Criterion integrand at subordination index beta.
    Integrand integrand(double beta) const;
    /// Hitting-test integrand (Converges <=> the set is nonempty with
    /// positive probability under the asserted hypotheses).
    Integrand hitting() const;
};

enum class SolveMethod { ClosedForm, Bisection };

struct TrailEntry {
    double beta;
    Verdict verdict;
};

struct DimensionResult {
    double beta_star = 0.0;
    SolveMethod method = SolveMethod::Bisection;
    std::pair<double, double> bracket{0.0, 0.0};
    std::vector<TrailEntry> trail;
    bool empty_at_criterion = false;
    /// Bisection midpoint when a closed form was returned with the
    /// cross-check enabled.
    std::optional<double> cross_check_beta;
    HypothesisFlags hypothesis_flags;
    bool inconclusive_band = false; // bisection halted inside the band
};

struct SolveOptions {
    double beta_tol = 0.02;
    ShellOptions shells;
    /// Slope margin used for beta probes. Tighter than the standalone
    /// classification default: the probe verdict flips where the tail slope
    /// crosses -margin, which biases the bracket by margin/degree, so a
    /// small margin keeps the bisection near the true critical beta.
    double probe_slope_margin = 0.04;
    int tail_window = 8;
    bool cross_check = true;
    int max_probes = 64;
};

/// Classify the hitting integrand of the problem.
Verdict hitting_test(const DimensionProblem& problem, const ShellOptions& shells = {},
                     const ClassifyOptions& classify_opts = {});

/// Closed form for structurally homogeneous, non-degenerate exponents of
/// common degree a: the criterion integrand decays like |xi|^{-a(N-beta)}
/// on R^D, so beta* = clamp(N - D/a, 0, N). Returns nullopt when
/// homogeneity or non-degeneracy cannot be established structurally.
std::optional<DimensionResult> critical_beta_homogeneous(const DimensionProblem& problem);

/// Thrown when the probe trail is non-monotone (a Converges above a
/// Diverges): the downward-closedness assumption failed and the result
/// cannot be trusted.
struct MonotonicityError : std::runtime_error {
    double beta_converges;
    double beta_diverges;
    MonotonicityError(double bc, double bd);
};

/// dim_H as the supremum over beta of the convergence region: closed form
/// when available (optionally cross-checked by bisection), otherwise
/// bisection on beta in (0, N) assuming the convergent set is a
/// downward-closed interval. Inconclusive probes shrink the step where
/// possible; when the whole bracket is inconclusive the loop halts and the
/// band is reported rather than forced.
DimensionResult solve_dimension(const DimensionProblem& problem, const SolveOptions& opts = {});

const char* to_string(SolveMethod m);

} // namespace levydim
