#include "levydim/criteria.hpp"

#include "levydim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace levydim {

namespace {

double re_reciprocal_one_plus(Complex psi) {
    const Complex w = 1.0 + psi;
    return w.real() / std::norm(w);
}

double pow_int(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

Integrand level_set_like(const AdditiveProcessSpec& spec, double beta, IntegrandKind kind) {
    const AdditiveProcessSpec family = level_set_family(spec, beta);
    const ExponentExpr component = family.exponents.front();
    const int n = spec.parameter_count();
    Integrand f;
    f.kind = kind;
    f.beta = beta;
    f.source = spec;
    f.dim = spec.dimension();
    f.eval = [component, n](std::span<const double> xi) {
        return pow_int(re_reciprocal_one_plus(component.evaluate(xi)), n);
    };
    return f;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; exceptions are
// rethrown on the caller. Work items write to disjoint slots, so the result
// does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < n; i += threads) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double unit_sphere_measure(int d) {
    return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

void draw_direction(RngStream& rng, std::span<double> out) {
    for (;;) {
        double norm2 = 0.0;
        for (double& x : out) {
            x = rng.normal();
            norm2 += x * x;
        }
        if (norm2 > 1e-300) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& x : out) x *= inv;
            return;
        }
    }
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;

    void add(double v) {
        if (!std::isfinite(v))
            throw std::runtime_error("shell_estimates: integrand produced a non-finite value");
        sum += v;
        sum_sq += v * v;
        ++count;
    }

    void merge(const Accumulator& other) {
        sum += other.sum;
        sum_sq += other.sum_sq;
        count += other.count;
    }

    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }

    double se() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        return std::sqrt(var / n);
    }
};

// n split across shards; shard s gets base + (s < remainder).
int shard_samples(int n, int shards, int shard) {
    const int base = n / shards;
    const int rem = n % shards;
    return base + (shard < rem ? 1 : 0);
}

struct FitResult {
    double slope = 0.0;
    double slope_se = 0.0;
};

// Least-squares slope of y vs x with per-point sigma; slope SE is the larger
// of the residual-based and noise-propagated estimates.
FitResult fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& sigma) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    FitResult r;
    r.slope = sxy / sxx;
    const double intercept = my - r.slope * mx;

    double rss = 0.0;
    double var_prop = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double res = y[i] - (intercept + r.slope * x[i]);
        rss += res * res;
        const double c = (x[i] - mx) / sxx;
        var_prop += c * c * sigma[i] * sigma[i];
    }
    const double var_res = n > 2 ? (rss / static_cast<double>(n - 2)) / sxx : 0.0;
    r.slope_se = std::sqrt(std::max(var_res, var_prop));
    return r;
}

} // namespace

const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Converges: return "converges";
        case VerdictKind::Diverges: return "diverges";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

Integrand hitting_integrand(const AdditiveProcessSpec& spec) {
    Integrand f;
    f.kind = IntegrandKind::Hitting;
    f.source = spec;
    f.dim = spec.dimension();
    f.eval = [exponents = spec.exponents](std::span<const double> xi) {
        double prod = 1.0;
        for (const auto& psi : exponents) prod *= re_reciprocal_one_plus(psi.evaluate(xi));
        return prod;
    };
    return f;
}

Integrand level_set_integrand(const AdditiveProcessSpec& spec, double beta) {
    return level_set_like(spec, beta, IntegrandKind::LevelSet);
}

Integrand multiple_time_integrand(const std::vector<ExponentExpr>& psis, double beta) {
    const int k = static_cast<int>(psis.size());
    if (k < 2) throw std::invalid_argument("multiple_time_integrand: k must be >= 2");
    if (!(beta > 0.0 && beta < k))
        throw std::invalid_argument("multiple_time_integrand: beta must lie in (0, k)");
    return level_set_like(difference_lift_spec(psis), beta, IntegrandKind::MultipleTime);
}

Integrand multiple_time_integrand(const ExponentExpr& psi, int k, double beta) {
    if (k < 2) throw std::invalid_argument("multiple_time_integrand: k must be >= 2");
    return multiple_time_integrand(std::vector<ExponentExpr>(static_cast<size_t>(k), psi), beta);
}

ShellProfile shell_estimates(const Integrand& f, const ShellOptions& opts) {
    if (opts.m_lo > opts.m_hi)
        throw std::invalid_argument("shell_estimates: m_lo must be <= m_hi");
    if (opts.samples_per_shell < 100)
        throw std::invalid_argument("shell_estimates: needs >= 100 samples per shell");
    if (opts.shards < 1) throw std::invalid_argument("shell_estimates: shards must be >= 1");
    const int d = f.dim;
    if (d < 1) throw std::invalid_argument("shell_estimates: integrand dimension must be >= 1");

    const int n_shells = opts.m_hi - opts.m_lo + 1;
    const double omega = unit_sphere_measure(d);
    const double ln2 = std::numbers::ln2;

    // task index: shells first (one task per (shell, shard)), then head shards
    const int shell_tasks = n_shells * opts.shards;
    std::vector<Accumulator> acc(static_cast<size_t>(shell_tasks + opts.shards));

    auto run_task = [&](int task) {
        std::vector<double> dir(static_cast<size_t>(d));
        std::vector<double> point(static_cast<size_t>(d));
        std::vector<double> reflected(static_cast<size_t>(d));
        Accumulator& a = acc[static_cast<size_t>(task)];
        if (task < shell_tasks) {
            const int shell = task / opts.shards;
            const int shard = task % opts.shards;
            const int m = opts.m_lo + shell;
            const int n = shard_samples(opts.samples_per_shell, opts.shards, shard);
            RngStream rng(opts.seed, "shell", static_cast<std::uint64_t>(static_cast<std::int64_t>(m)),
                          static_cast<std::uint64_t>(shard));
            for (int i = 0; i < n; ++i) {
                draw_direction(rng, dir);
                const double u = rng.uniform();
                const double r = std::exp2(m + u);
                for (int c = 0; c < d; ++c) {
                    point[static_cast<size_t>(c)] = r * dir[static_cast<size_t>(c)];
                    reflected[static_cast<size_t>(c)] = -point[static_cast<size_t>(c)];
                }
                const double pair = 0.5 * (f.eval(point) + f.eval(reflected));
                const double weight = std::pow(r, d) * ln2 * omega;
                a.add(weight * pair);
            }
        } else {
            const int shard = task - shell_tasks;
            const int n = shard_samples(opts.samples_per_shell, opts.shards, shard);
            const double radius = std::exp2(opts.m_lo);
            RngStream rng(opts.seed, "head", static_cast<std::uint64_t>(shard));
            for (int i = 0; i < n; ++i) {
                draw_direction(rng, dir);
                const double r = radius * std::pow(rng.uniform(), 1.0 / d);
                for (int c = 0; c < d; ++c) {
                    point[static_cast<size_t>(c)] = r * dir[static_cast<size_t>(c)];
                    reflected[static_cast<size_t>(c)] = -point[static_cast<size_t>(c)];
                }
                a.add(0.5 * (f.eval(point) + f.eval(reflected)));
            }
        }
    };

    parallel_for(shell_tasks + opts.shards, opts.threads, run_task);

    ShellProfile profile;
    profile.m_lo = opts.m_lo;
    profile.m_hi = opts.m_hi;
    profile.dim = d;
    profile.samples_per_shell = opts.samples_per_shell;
    profile.seed = opts.seed;
    profile.shell_sums.resize(static_cast<size_t>(n_shells));
    profile.shell_se.resize(static_cast<size_t>(n_shells));
    for (int shell = 0; shell < n_shells; ++shell) {
        Accumulator total;
        for (int shard = 0; shard < opts.shards; ++shard)
            total.merge(acc[static_cast<size_t>(shell * opts.shards + shard)]);
        profile.shell_sums[static_cast<size_t>(shell)] = total.mean();
        profile.shell_se[static_cast<size_t>(shell)] = total.se();
    }
    Accumulator head;
    for (int shard = 0; shard < opts.shards; ++shard)
        head.merge(acc[static_cast<size_t>(shell_tasks + shard)]);
    const double ball = unit_ball_volume(d) * std::pow(std::exp2(opts.m_lo), d);
    profile.head = ball * head.mean();
    profile.head_se = ball * head.se();
    return profile;
}

Verdict classify(const ShellProfile& profile, const ClassifyOptions& opts) {
    const int n_shells = static_cast<int>(profile.shell_sums.size());
    if (opts.tail_window < 3)
        throw std::invalid_argument("classify: tail_window must be >= 3");
    if (n_shells < opts.tail_window)
        throw std::invalid_argument("classify: profile has fewer shells than tail_window");
    if (!(opts.slope_margin > 0.0))
        throw std::invalid_argument("classify: slope margin must be positive");

    double total_shells = 0.0;
    for (double s : profile.shell_sums) total_shells += s;

    // last tail_window shells with nonzero estimates, ascending in m
    std::vector<double> xs, ys, sigmas;
    double last_nonzero_sum = 0.0;
    for (int i = n_shells - 1; i >= 0 && static_cast<int>(xs.size()) < opts.tail_window; --i) {
        const double s = profile.shell_sums[static_cast<size_t>(i)];
        if (s <= 0.0) continue;
        if (xs.empty()) last_nonzero_sum = s;
        xs.push_back(static_cast<double>(profile.m_lo + i));
        ys.push_back(std::log2(s));
        sigmas.push_back(profile.shell_se[static_cast<size_t>(i)] / (s * std::numbers::ln2));
    }

    Verdict v;
    if (xs.empty()) {
        // degenerate integrand: nothing outside the head ball
        v.kind = VerdictKind::Converges;
        v.tail_slope = 0.0;
        v.estimate = profile.head;
        v.reason = "all shell estimates zero";
        return v;
    }
    if (static_cast<int>(xs.size()) < opts.tail_window) {
        v.kind = VerdictKind::Inconclusive;
        v.tail_slope = std::numeric_limits<double>::quiet_NaN();
        v.ci_half_width = std::numeric_limits<double>::quiet_NaN();
        v.reason = "fewer nonzero shells than the tail window";
        return v;
    }

    std::reverse(xs.begin(), xs.end());
    std::reverse(ys.begin(), ys.end());
    std::reverse(sigmas.begin(), sigmas.end());
    const FitResult fit = fit_slope(xs, ys, sigmas);
    v.tail_slope = fit.slope;
    v.slope_se = fit.slope_se;
    v.ci_half_width = 2.0 * fit.slope_se;

    const double delta = opts.slope_margin;
    if (fit.slope + v.ci_half_width < -delta) {
        v.kind = VerdictKind::Converges;
        const double ratio = std::exp2(fit.slope);
        v.estimate = profile.head + total_shells + last_nonzero_sum * ratio / (1.0 - ratio);
        return v;
    }
    if (fit.slope - v.ci_half_width > -delta) {
        // guard against classifying numerical dust as a divergent tail
        const double scale = profile.head + total_shells;
        const double window_max = *std::max_element(ys.begin(), ys.end());
        if (std::exp2(window_max) > 1e-12 * std::max(scale, 1e-300)) {
            v.kind = VerdictKind::Diverges;
            return v;
        }
        v.kind = VerdictKind::Inconclusive;
        v.reason = "tail shells numerically negligible";
        return v;
    }
    v.kind = VerdictKind::Inconclusive;
    v.reason = "slope confidence interval straddles the margin";
    return v;
}

} // namespace levydim
