#include "levydim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace levydim {

namespace {

constexpr std::uint64_t kMaxFieldValues = 100'000'000;

// Exact draw of the leaf process at time tau >= 0, appended to out.
void sample_leaf_at(const ExponentExpr& expr, double tau, RngStream& rng, std::span<double> out) {
    if (tau < 0.0) throw std::invalid_argument("sample_leaf_at: negative time");
    if (const auto bm = expr.as_brownian_drift()) {
        const int d = bm->d;
        const double root = std::sqrt(tau);
        std::vector<double> g(static_cast<size_t>(d));
        for (auto& x : g) x = rng.normal();
        for (int i = 0; i < d; ++i) {
            double v = tau * bm->b[static_cast<size_t>(i)];
            for (int j = 0; j <= i; ++j)
                v += root * bm->chol[static_cast<size_t>(i) * d + j] * g[static_cast<size_t>(j)];
            out[static_cast<size_t>(i)] = v;
        }
        return;
    }
    if (const auto iso = expr.as_isotropic_stable()) {
        // Psi = |xi|^alpha. alpha = 2 is Gaussian with covariance 2 tau I;
        // alpha < 2 subordinates that Gaussian by an (alpha/2)-stable clock,
        // giving ((|xi|^2))^{alpha/2}.
        const int d = iso->d;
        double variance = 2.0 * tau;
        if (iso->alpha < 2.0) {
            const double clock =
                tau > 0.0 ? std::pow(tau, 2.0 / iso->alpha) * sample_positive_stable(iso->alpha / 2.0, rng)
                          : 0.0;
            variance = 2.0 * clock;
        }
        const double root = std::sqrt(variance);
        for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = root * rng.normal();
        return;
    }
    if (const auto sub = expr.as_stable_subordinator()) {
        out[0] = tau > 0.0 ? std::pow(tau, 1.0 / sub->alpha) * sample_positive_stable(sub->alpha, rng)
                           : 0.0;
        return;
    }
    throw std::invalid_argument("unsupported exponent for simulation: " + expr.describe());
}

bool leaf_simulable(const ExponentExpr& e) {
    return e.as_brownian_drift() || e.as_isotropic_stable() || e.as_stable_subordinator();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_raw(std::ofstream& os, const void* data, std::size_t bytes) {
    os.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

template <class T>
void write_pod(std::ofstream& os, const T& v) {
    write_raw(os, &v, sizeof(T));
}

template <class T>
T read_pod(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated binary sample file");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("malformed number in sample file: " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::runtime_error("malformed integer in sample file: " + s);
    return v;
}

std::string expect_kv(std::ifstream& is, const std::string& key) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("truncated sample file header");
    const auto parts = split_csv(line);
    if (parts.size() != 2 || parts[0] != key)
        throw std::runtime_error("sample file header: expected '" + key + "' line");
    return parts[1];
}

} // namespace

double sample_positive_stable(double alpha, RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("sample_positive_stable: alpha must lie in (0, 1)");
    const double v = std::numbers::pi * rng.uniform_open();
    const double w = rng.exponential();
    const double log_a = (alpha / (1.0 - alpha)) * std::log(std::sin(alpha * v)) +
                         std::log(std::sin((1.0 - alpha) * v)) -
                         (1.0 / (1.0 - alpha)) * std::log(std::sin(v));
    return std::exp(((1.0 - alpha) / alpha) * (log_a - std::log(w)));
}

SubordinatorPath simulate_subordinator(double alpha, std::vector<double> t_grid, RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("simulate_subordinator: alpha must lie in (0, 1)");
    if (t_grid.empty() || t_grid.front() < 0.0)
        throw std::invalid_argument("simulate_subordinator: grid must start at t >= 0");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("simulate_subordinator: grid must be strictly increasing");

    SubordinatorPath path;
    path.alpha = alpha;
    path.values.reserve(t_grid.size());
    double prev_t = 0.0;
    double value = 0.0;
    for (double t : t_grid) {
        const double dt = t - prev_t;
        if (dt > 0.0) value += std::pow(dt, 1.0 / alpha) * sample_positive_stable(alpha, rng);
        path.values.push_back(value);
        prev_t = t;
    }
    path.t_grid = std::move(t_grid);
    return path;
}

std::vector<double> simulate_saturated_subordinator(double alpha, int n, std::span<const double> t,
                                                    RngStream& rng) {
    if (n < 1) throw std::invalid_argument("simulate_saturated_subordinator: N must be >= 1");
    if (static_cast<int>(t.size()) != n)
        throw std::invalid_argument("simulate_saturated_subordinator: t must have N coordinates");
    for (double tj : t)
        if (!(tj >= 0.0)) throw std::invalid_argument("simulate_saturated_subordinator: t must be >= 0");

    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double scale = t[static_cast<size_t>(j)] > 0.0
                                 ? std::pow(t[static_cast<size_t>(j)], 1.0 / alpha)
                                 : 0.0;
        for (int l = 0; l < n; ++l) {
            // all N^2 draws are consumed even at t_j = 0 so the draw layout
            // does not depend on the evaluation point
            const double s = sample_positive_stable(alpha, rng);
            if (scale > 0.0) out[static_cast<size_t>(l)] += scale * s;
        }
    }
    return out;
}

std::uint64_t FieldSample::node_count() const {
    std::uint64_t n = 1;
    for (int j = 0; j < param_dim; ++j) n *= steps + 1;
    return n;
}

std::span<const double> FieldSample::value_at(std::uint64_t flat_index) const {
    return std::span<const double>(values).subspan(flat_index * static_cast<std::uint64_t>(value_dim),
                                                   static_cast<std::uint64_t>(value_dim));
}

bool is_simulable(const AdditiveProcessSpec& spec) {
    return std::all_of(spec.exponents.begin(), spec.exponents.end(), leaf_simulable);
}

FieldSample simulate_field(const AdditiveProcessSpec& spec, double horizon, double mesh,
                           std::uint64_t seed) {
    if (!(horizon > 0.0) || !(mesh > 0.0) || mesh > horizon)
        throw std::invalid_argument("simulate_field: need 0 < mesh <= T");
    if (!is_simulable(spec))
        throw std::invalid_argument("simulate_field: spec contains an unsupported exponent");

    const int n = spec.parameter_count();
    const int d = spec.dimension();
    const auto steps = static_cast<std::uint64_t>(std::llround(horizon / mesh));
    if (steps < 1) throw std::invalid_argument("simulate_field: grid has no steps");

    FieldSample field;
    field.param_dim = n;
    field.value_dim = d;
    field.horizon = horizon;
    field.mesh = mesh;
    field.steps = steps;
    field.seed = seed;
    field.spec_hash = fnv1a64(spec.describe());
    const std::uint64_t nodes = field.node_count();
    if (nodes * static_cast<std::uint64_t>(d) > kMaxFieldValues)
        throw std::invalid_argument("simulate_field: grid too large");

    // one-parameter component paths, each from its own derived stream
    std::vector<std::vector<double>> paths(static_cast<size_t>(n));
    std::vector<double> increment(static_cast<size_t>(d));
    for (int j = 0; j < n; ++j) {
        RngStream rng(seed, "field", static_cast<std::uint64_t>(j));
        auto& path = paths[static_cast<size_t>(j)];
        path.assign((steps + 1) * static_cast<std::uint64_t>(d), 0.0);
        for (std::uint64_t i = 1; i <= steps; ++i) {
            sample_leaf_at(spec.exponents[static_cast<size_t>(j)], mesh, rng, increment);
            for (int c = 0; c < d; ++c)
                path[i * d + static_cast<std::uint64_t>(c)] =
                    path[(i - 1) * d + static_cast<std::uint64_t>(c)] + increment[static_cast<size_t>(c)];
        }
    }

    field.values.assign(nodes * static_cast<std::uint64_t>(d), 0.0);
    if (n == 1) {
        field.values = std::move(paths[0]);
        return field;
    }
    const std::uint64_t side = steps + 1;
    for (std::uint64_t flat = 0; flat < nodes; ++flat) {
        std::uint64_t rest = flat;
        // first parameter index is the slowest
        for (int j = n - 1; j >= 0; --j) {
            const std::uint64_t idx = rest % side;
            rest /= side;
            const auto& path = paths[static_cast<size_t>(j)];
            for (int c = 0; c < d; ++c)
                field.values[flat * d + static_cast<std::uint64_t>(c)] +=
                    path[idx * d + static_cast<std::uint64_t>(c)];
        }
    }
    return field;
}

SampleSet sample_composed(const AdditiveProcessSpec& spec, double alpha, std::span<const double> t,
                          std::size_t n, RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("sample_composed: alpha must lie in (0, 1)");
    if (static_cast<int>(t.size()) != spec.parameter_count())
        throw std::invalid_argument("sample_composed: t must have N coordinates");
    if (!is_simulable(spec))
        throw std::invalid_argument("sample_composed: spec contains an unsupported exponent");

    const int d = spec.dimension();
    SampleSet out;
    out.dim = d;
    out.values.assign(n * static_cast<std::size_t>(d), 0.0);
    std::vector<double> part(static_cast<size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < spec.parameter_count(); ++j) {
            const double tj = t[static_cast<size_t>(j)];
            const double tau =
                tj > 0.0 ? std::pow(tj, 1.0 / alpha) * sample_positive_stable(alpha, rng) : 0.0;
            sample_leaf_at(spec.exponents[static_cast<size_t>(j)], tau, rng, part);
            for (int c = 0; c < d; ++c)
                out.values[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] +=
                    part[static_cast<size_t>(c)];
        }
    }
    return out;
}

SampleSet sample_additive(const AdditiveProcessSpec& spec, std::span<const double> t, std::size_t n,
                          RngStream& rng) {
    if (static_cast<int>(t.size()) != spec.parameter_count())
        throw std::invalid_argument("sample_additive: t must have N coordinates");
    if (!is_simulable(spec))
        throw std::invalid_argument("sample_additive: spec contains an unsupported exponent");
    const int d = spec.dimension();
    SampleSet out;
    out.dim = d;
    out.values.assign(n * static_cast<std::size_t>(d), 0.0);
    std::vector<double> part(static_cast<size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < spec.parameter_count(); ++j) {
            sample_leaf_at(spec.exponents[static_cast<size_t>(j)], t[static_cast<size_t>(j)], rng, part);
            for (int c = 0; c < d; ++c)
                out.values[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] +=
                    part[static_cast<size_t>(c)];
        }
    }
    return out;
}

CfEstimate empirical_cf(const SampleSet& samples, std::span<const double> xi) {
    const std::size_t n = samples.count();
    if (n < 1000) throw std::invalid_argument("empirical_cf: needs at least 1000 samples");
    if (static_cast<int>(xi.size()) != samples.dim)
        throw std::invalid_argument("empirical_cf: frequency dimension mismatch");

    double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0, sum_im2 = 0.0;
    const int d = samples.dim;
    for (std::size_t i = 0; i < n; ++i) {
        double phase = 0.0;
        for (int c = 0; c < d; ++c)
            phase += xi[static_cast<size_t>(c)] *
                     samples.values[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
        const double re = std::cos(phase);
        const double im = std::sin(phase);
        sum_re += re;
        sum_im += im;
        sum_re2 += re * re;
        sum_im2 += im * im;
    }
    const double nn = static_cast<double>(n);
    const double mean_re = sum_re / nn;
    const double mean_im = sum_im / nn;
    // jackknife variance of the mean reduces to sum (x_i - mean)^2 / (n(n-1))
    const double var_re = std::max(0.0, (sum_re2 - nn * mean_re * mean_re) / (nn * (nn - 1.0)));
    const double var_im = std::max(0.0, (sum_im2 - nn * mean_im * mean_im) / (nn * (nn - 1.0)));
    return {Complex{mean_re, mean_im}, std::sqrt(var_re + var_im)};
}

// --- file formats ---

namespace {
constexpr char kFieldMagic[4] = {'L', 'V', 'D', 'F'};
constexpr char kSubMagic[4] = {'L', 'V', 'D', 'S'};
constexpr std::uint32_t kFormatVersion = 1;
} // namespace

void write_field_csv(const std::filesystem::path& path, const FieldSample& field) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "levydim-field,v" << kFormatVersion << "\n";
    os << "spec_hash," << field.spec_hash << "\n";
    os << "seed," << field.seed << "\n";
    os << "N," << field.param_dim << "\n";
    os << "d," << field.value_dim << "\n";
    os << "T," << fmt_double(field.horizon) << "\n";
    os << "mesh," << fmt_double(field.mesh) << "\n";
    os << "steps," << field.steps << "\n";
    const std::uint64_t nodes = field.node_count();
    const std::uint64_t side = field.steps + 1;
    std::vector<std::uint64_t> idx(static_cast<size_t>(field.param_dim));
    for (std::uint64_t flat = 0; flat < nodes; ++flat) {
        std::uint64_t rest = flat;
        for (int j = field.param_dim - 1; j >= 0; --j) {
            idx[static_cast<size_t>(j)] = rest % side;
            rest /= side;
        }
        for (int j = 0; j < field.param_dim; ++j) {
            if (j) os << ',';
            os << idx[static_cast<size_t>(j)];
        }
        for (int c = 0; c < field.value_dim; ++c)
            os << ',' << fmt_double(field.values[flat * field.value_dim + static_cast<std::uint64_t>(c)]);
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_field_binary(const std::filesystem::path& path, const FieldSample& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_raw(os, kFieldMagic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, static_cast<std::uint32_t>(field.param_dim));
    write_pod(os, static_cast<std::uint32_t>(field.value_dim));
    write_pod(os, field.horizon);
    write_pod(os, field.mesh);
    write_pod(os, field.steps);
    write_pod(os, field.seed);
    write_pod(os, field.spec_hash);
    write_raw(os, field.values.data(), field.values.size() * sizeof(double));
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

namespace {

FieldSample read_field_binary(std::ifstream& is) {
    (void)read_pod<std::uint32_t>(is); // magic already consumed by the sniffer
    FieldSample f;
    f.param_dim = static_cast<int>(read_pod<std::uint32_t>(is));
    f.value_dim = static_cast<int>(read_pod<std::uint32_t>(is));
    f.horizon = read_pod<double>(is);
    f.mesh = read_pod<double>(is);
    f.steps = read_pod<std::uint64_t>(is);
    f.seed = read_pod<std::uint64_t>(is);
    f.spec_hash = read_pod<std::uint64_t>(is);
    if (f.param_dim < 1 || f.value_dim < 1) throw std::runtime_error("corrupt field file header");
    const std::uint64_t count = f.node_count() * static_cast<std::uint64_t>(f.value_dim);
    if (count > kMaxFieldValues) throw std::runtime_error("field file larger than the size guard");
    f.values.resize(count);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw std::runtime_error("truncated field file");
    return f;
}

FieldSample read_field_csv(std::ifstream& is) {
    FieldSample f;
    f.spec_hash = parse_u64(expect_kv(is, "spec_hash"));
    f.seed = parse_u64(expect_kv(is, "seed"));
    f.param_dim = static_cast<int>(parse_u64(expect_kv(is, "N")));
    f.value_dim = static_cast<int>(parse_u64(expect_kv(is, "d")));
    f.horizon = parse_double(expect_kv(is, "T"));
    f.mesh = parse_double(expect_kv(is, "mesh"));
    f.steps = parse_u64(expect_kv(is, "steps"));
    if (f.param_dim < 1 || f.value_dim < 1) throw std::runtime_error("corrupt field file header");
    const std::uint64_t nodes = f.node_count();
    const std::uint64_t count = nodes * static_cast<std::uint64_t>(f.value_dim);
    if (count > kMaxFieldValues) throw std::runtime_error("field file larger than the size guard");
    f.values.assign(count, 0.0);
    const std::uint64_t side = f.steps + 1;
    std::string line;
    std::uint64_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != static_cast<size_t>(f.param_dim + f.value_dim))
            throw std::runtime_error("field file row has wrong arity");
        std::uint64_t flat = 0;
        for (int j = 0; j < f.param_dim; ++j) {
            const std::uint64_t idx = parse_u64(cells[static_cast<size_t>(j)]);
            if (idx >= side) throw std::runtime_error("field file index out of range");
            flat = flat * side + idx;
        }
        for (int c = 0; c < f.value_dim; ++c)
            f.values[flat * f.value_dim + static_cast<std::uint64_t>(c)] =
                parse_double(cells[static_cast<size_t>(f.param_dim + c)]);
        ++rows;
    }
    if (rows != nodes) throw std::runtime_error("field file row count does not match the grid");
    return f;
}

} // namespace

FieldSample read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    char magic[4] = {};
    is.read(magic, 4);
    if (!is) throw std::runtime_error("file too short: " + path.string());
    if (std::memcmp(magic, kFieldMagic, 4) == 0) return read_field_binary(is);

    is.close();
    std::ifstream text(path);
    std::string first;
    if (!std::getline(text, first)) throw std::runtime_error("file too short: " + path.string());
    const auto parts = split_csv(first);
    if (parts.size() != 2 || parts[0] != "levydim-field" || parts[1] != "v1")
        throw std::runtime_error("not a levydim field file: " + path.string());
    return read_field_csv(text);
}

void write_subordinator_csv(const std::filesystem::path& path, const SubordinatorPath& p) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "levydim-subordinator,v" << kFormatVersion << "\n";
    os << "alpha," << fmt_double(p.alpha) << "\n";
    os << "count," << p.t_grid.size() << "\n";
    for (size_t i = 0; i < p.t_grid.size(); ++i)
        os << fmt_double(p.t_grid[i]) << ',' << fmt_double(p.values[i]) << '\n';
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_subordinator_binary(const std::filesystem::path& path, const SubordinatorPath& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_raw(os, kSubMagic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, p.alpha);
    write_pod(os, static_cast<std::uint64_t>(p.t_grid.size()));
    write_raw(os, p.t_grid.data(), p.t_grid.size() * sizeof(double));
    write_raw(os, p.values.data(), p.values.size() * sizeof(double));
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "levydim-samples,v" << kFormatVersion << "\n";
    os << "dim," << samples.dim << "\n";
    os << "count," << samples.count() << "\n";
    for (std::size_t i = 0; i < samples.count(); ++i) {
        for (int c = 0; c < samples.dim; ++c) {
            if (c) os << ',';
            os << fmt_double(samples.values[i * static_cast<std::size_t>(samples.dim) +
                                            static_cast<std::size_t>(c)]);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::string first;
    if (!std::getline(is, first)) throw std::runtime_error("file too short: " + path.string());
    const auto parts = split_csv(first);
    if (parts.size() != 2 || parts[0] != "levydim-samples" || parts[1] != "v1")
        throw std::runtime_error("not a levydim samples file: " + path.string());
    SampleSet out;
    out.dim = static_cast<int>(parse_u64(expect_kv(is, "dim")));
    const std::uint64_t count = parse_u64(expect_kv(is, "count"));
    if (out.dim < 1) throw std::runtime_error("corrupt samples file header");
    out.values.reserve(count * static_cast<std::size_t>(out.dim));
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != static_cast<size_t>(out.dim))
            throw std::runtime_error("samples file row has wrong arity");
        for (const auto& c : cells) out.values.push_back(parse_double(c));
    }
    if (out.count() != count) throw std::runtime_error("samples file row count does not match header");
    return out;
}

SubordinatorPath read_subordinator(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    char magic[4] = {};
    is.read(magic, 4);
    if (!is) throw std::runtime_error("file too short: " + path.string());
    if (std::memcmp(magic, kSubMagic, 4) == 0) {
        (void)read_pod<std::uint32_t>(is);
        SubordinatorPath p;
        p.alpha = read_pod<double>(is);
        const auto count = read_pod<std::uint64_t>(is);
        if (count > kMaxFieldValues) throw std::runtime_error("subordinator file too large");
        p.t_grid.resize(count);
        p.values.resize(count);
        is.read(reinterpret_cast<char*>(p.t_grid.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        is.read(reinterpret_cast<char*>(p.values.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        if (!is) throw std::runtime_error("truncated subordinator file");
        return p;
    }

    is.close();
    std::ifstream text(path);
    std::string first;
    if (!std::getline(text, first)) throw std::runtime_error("file too short: " + path.string());
    const auto parts = split_csv(first);
    if (parts.size() != 2 || parts[0] != "levydim-subordinator" || parts[1] != "v1")
        throw std::runtime_error("not a levydim subordinator file: " + path.string());
    SubordinatorPath p;
    p.alpha = parse_double(expect_kv(text, "alpha"));
    const std::uint64_t count = parse_u64(expect_kv(text, "count"));
    std::string line;
    while (std::getline(text, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 2) throw std::runtime_error("subordinator file row has wrong arity");
        p.t_grid.push_back(parse_double(cells[0]));
        p.values.push_back(parse_double(cells[1]));
    }
    if (p.t_grid.size() != count)
        throw std::runtime_error("subordinator file row count does not match header");
    return p;
}

} // namespace levydim
