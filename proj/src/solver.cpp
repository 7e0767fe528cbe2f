#include "levydim/solver.hpp"

#include "levydim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levydim {

namespace {

constexpr double kDegreeTol = 1e-9;

// Base exponents whose non-degeneracy controls the tail comparability.
const std::vector<ExponentExpr>& base_exponents(const DimensionProblem& p) {
    return p.kind == DimensionProblem::Kind::LevelSet ? p.spec.exponents : p.psis;
}

std::optional<double> common_degree(const std::vector<ExponentExpr>& exps) {
    std::optional<double> deg;
    for (const auto& e : exps) {
        const auto a = e.homogeneity_degree();
        if (!a) return std::nullopt;
        if (!deg) {
            deg = a;
        } else if (std::abs(*deg - *a) > kDegreeTol) {
            return std::nullopt;
        }
    }
    return deg;
}

// Re Psi > 0 for xi != 0, probed at random directions plus the coordinate
// axes (the axes catch exponents that ignore a coordinate).
bool nondegenerate(const std::vector<ExponentExpr>& exps) {
    if (exps.empty()) return false;
    const int d = exps.front().dimension();
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < d; ++i) {
        std::vector<double> e(static_cast<size_t>(d), 0.0);
        e[static_cast<size_t>(i)] = 1.0;
        dirs.push_back(e);
    }
    RngStream rng(0x9d2c5680u, "nondegeneracy");
    for (int s = 0; s < 48; ++s) {
        std::vector<double> u(static_cast<size_t>(d));
        double n2 = 0.0;
        for (auto& x : u) {
            x = rng.normal();
            n2 += x * x;
        }
        if (n2 <= 1e-300) continue;
        for (auto& x : u) x /= std::sqrt(n2);
        dirs.push_back(std::move(u));
    }
    for (const auto& e : exps) {
        for (const auto& u : dirs) {
            const Complex v = e.evaluate(u);
            if (!(v.real() > 1e-12 * (1.0 + std::abs(v)))) return false;
        }
    }
    return true;
}

struct BisectionOutcome {
    double beta_star = 0.0;
    std::pair<double, double> bracket;
    std::vector<TrailEntry> trail;
    bool saw_converge = false;
    bool band_halt = false;
};

BisectionOutcome bisect_beta(const DimensionProblem& problem, const SolveOptions& opts) {
    const double n = problem.parameter_count();
    const ClassifyOptions copts{opts.probe_slope_margin, opts.tail_window};

    BisectionOutcome out;
    double lo = 0.0, hi = n;
    double max_conv = -1.0, min_div = n + 1.0;
    int probes = 0;

    auto probe = [&](double beta) {
        const Verdict v = classify(shell_estimates(problem.integrand(beta), opts.shells), copts);
        out.trail.push_back({beta, v});
        ++probes;
        if (v.kind == VerdictKind::Converges) {
            max_conv = std::max(max_conv, beta);
            out.saw_converge = true;
        } else if (v.kind == VerdictKind::Diverges) {
            min_div = std::min(min_div, beta);
        }
        if (max_conv >= min_div) throw MonotonicityError(max_conv, min_div);
        return v.kind;
    };

    while (hi - lo > opts.beta_tol && probes < opts.max_probes) {
        const double mid = 0.5 * (lo + hi);
        const VerdictKind k = probe(mid);
        if (k == VerdictKind::Converges) {
            lo = mid;
            continue;
        }
        if (k == VerdictKind::Diverges) {
            hi = mid;
            continue;
        }
        // Inconclusive midpoint: try to shrink from both quarters; if neither
        // side gives a definite verdict the bracket sits inside the band.
        bool progressed = false;
        const double q1 = lo + 0.25 * (hi - lo);
        if (q1 > lo && q1 < mid && probes < opts.max_probes) {
            const VerdictKind k1 = probe(q1);
            if (k1 == VerdictKind::Converges) {
                lo = q1;
                progressed = true;
            } else if (k1 == VerdictKind::Diverges) {
                hi = q1;
                progressed = true;
            }
        }
        const double q3 = hi - 0.25 * (hi - lo);
        if (!progressed && q3 > mid && q3 < hi && probes < opts.max_probes) {
            const VerdictKind k3 = probe(q3);
            if (k3 == VerdictKind::Converges) {
                lo = q3;
                progressed = true;
            } else if (k3 == VerdictKind::Diverges) {
                hi = q3;
                progressed = true;
            }
        }
        if (!progressed) {
            out.band_halt = true;
            break;
        }
    }
    out.bracket = {lo, hi};
    out.beta_star = 0.5 * (lo + hi);
    std::sort(out.trail.begin(), out.trail.end(),
              [](const TrailEntry& a, const TrailEntry& b) { return a.beta < b.beta; });
    return out;
}

} // namespace

MonotonicityError::MonotonicityError(double bc, double bd)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "non-monotone probe trail: Converges at beta=" << bc
             << " above Diverges at beta=" << bd;
          return os.str();
      }()),
      beta_converges(bc),
      beta_diverges(bd) {}

DimensionProblem DimensionProblem::level_set(AdditiveProcessSpec spec, HypothesisFlags flags) {
    DimensionProblem p;
    p.kind = Kind::LevelSet;
    p.spec = std::move(spec);
    p.hypothesis_flags = flags;
    return p;
}

DimensionProblem DimensionProblem::multiple_times(std::vector<ExponentExpr> psis, HypothesisFlags flags) {
    if (psis.size() < 2)
        throw std::invalid_argument("multiple_times: needs k >= 2 exponents");
    const int d = psis.front().dimension();
    for (const auto& e : psis)
        if (e.dimension() != d)
            throw std::invalid_argument("multiple_times: exponents must share one dimension");
    DimensionProblem p;
    p.kind = Kind::MultipleTimes;
    p.psis = std::move(psis);
    p.hypothesis_flags = flags;
    return p;
}

DimensionProblem DimensionProblem::multiple_times(const ExponentExpr& psi, int k, HypothesisFlags flags) {
    if (k < 2) throw std::invalid_argument("multiple_times: k must be >= 2");
    return multiple_times(std::vector<ExponentExpr>(static_cast<size_t>(k), psi), flags);
}

int DimensionProblem::parameter_count() const {
    return kind == Kind::LevelSet ? spec.parameter_count() : static_cast<int>(psis.size());
}

int DimensionProblem::integration_dim() const {
    if (kind == Kind::LevelSet) return spec.dimension();
    return psis.front().dimension() * (static_cast<int>(psis.size()) - 1);
}

Integrand DimensionProblem::integrand(double beta) const {
    if (kind == Kind::LevelSet) return level_set_integrand(spec, beta);
    return multiple_time_integrand(psis, beta);
}

Integrand DimensionProblem::hitting() const {
    if (kind == Kind::LevelSet) return hitting_integrand(spec);
    return hitting_integrand(difference_lift_spec(psis));
}

Verdict hitting_test(const DimensionProblem& problem, const ShellOptions& shells,
                     const ClassifyOptions& classify_opts) {
    return classify(shell_estimates(problem.hitting(), shells), classify_opts);
}

std::optional<DimensionResult> critical_beta_homogeneous(const DimensionProblem& problem) {
    const auto& bases = base_exponents(problem);
    const auto degree = common_degree(bases);
    if (!degree || !(*degree > 0.0)) return std::nullopt;
    if (!nondegenerate(bases)) return std::nullopt;

    const double n = problem.parameter_count();
    const double d = problem.integration_dim();
    const double raw = n - d / *degree;

    DimensionResult r;
    r.method = SolveMethod::ClosedForm;
    r.beta_star = std::clamp(raw, 0.0, n);
    r.empty_at_criterion = raw <= 0.0;
    r.bracket = {r.beta_star, r.beta_star};
    r.hypothesis_flags = problem.hypothesis_flags;
    return r;
}

DimensionResult solve_dimension(const DimensionProblem& problem, const SolveOptions& opts) {
    if (!(opts.beta_tol > 0.0))
        throw std::invalid_argument("solve_dimension: beta_tol must be positive");

    if (auto closed = critical_beta_homogeneous(problem)) {
        if (opts.cross_check) {
            BisectionOutcome bis = bisect_beta(problem, opts);
            closed->cross_check_beta = bis.beta_star;
            closed->bracket = bis.bracket;
            closed->trail = std::move(bis.trail);
            closed->inconclusive_band = bis.band_halt;
        }
        return *closed;
    }

    BisectionOutcome bis = bisect_beta(problem, opts);
    DimensionResult r;
    r.method = SolveMethod::Bisection;
    r.beta_star = bis.beta_star;
    r.bracket = bis.bracket;
    r.trail = std::move(bis.trail);
    r.empty_at_criterion = !bis.saw_converge;
    r.hypothesis_flags = problem.hypothesis_flags;
    r.inconclusive_band = bis.band_halt;
    return r;
}

const char* to_string(SolveMethod m) {
    return m == SolveMethod::ClosedForm ? "closed_form" : "bisection";
}

} // namespace levydim
