#include "levydim/config.hpp"

#include <fstream>
#include <stdexcept>

namespace levydim {

namespace {

void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const char* context) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " + context);
    }
}

double get_num(const Json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string("config: '") + key + "' must be a number");
    return v.get<double>();
}

int get_int(const Json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("config: '") + key + "' must be an integer");
    return v.get<int>();
}

std::vector<double> get_vector(const Json& arr, const char* context) {
    if (!arr.is_array()) throw std::invalid_argument(std::string("config: ") + context + " must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw std::invalid_argument(std::string("config: ") + context + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<ExponentExpr> exponents_from_array(const Json& arr, const char* context) {
    if (!arr.is_array() || arr.empty())
        throw std::invalid_argument(std::string("config: ") + context + " must be a nonempty array");
    std::vector<ExponentExpr> out;
    for (const auto& node : arr) out.push_back(exponent_from_json(node));
    return out;
}

DimensionProblem problem_from_json(const Json& j, HypothesisFlags flags) {
    if (!j.is_object()) throw std::invalid_argument("config: 'problem' must be an object");
    const std::string type = j.at("type").get<std::string>();
    if (type == "level_set") {
        require_keys(j, {"type", "exponents"}, "problem");
        return DimensionProblem::level_set(
            AdditiveProcessSpec(exponents_from_array(j.at("exponents"), "problem.exponents")), flags);
    }
    if (type == "multiple_times") {
        require_keys(j, {"type", "k", "exponent", "exponents"}, "problem");
        if (j.contains("exponents")) {
            auto psis = exponents_from_array(j.at("exponents"), "problem.exponents");
            if (j.contains("k") && get_int(j, "k") != static_cast<int>(psis.size()))
                throw std::invalid_argument("config: problem.k disagrees with the exponent list");
            return DimensionProblem::multiple_times(std::move(psis), flags);
        }
        const int k = get_int(j, "k");
        return DimensionProblem::multiple_times(exponent_from_json(j.at("exponent")), k, flags);
    }
    throw std::invalid_argument("config: problem.type must be 'level_set' or 'multiple_times'");
}

} // namespace

ExponentExpr exponent_from_json(const Json& node) {
    if (!node.is_object()) throw std::invalid_argument("config: exponent node must be an object");
    const std::string kind = node.at("kind").get<std::string>();
    if (kind == "isotropic_stable") {
        require_keys(node, {"kind", "alpha", "d"}, "isotropic_stable");
        return ExponentExpr::isotropic_stable(get_num(node, "alpha"), get_int(node, "d"));
    }
    if (kind == "brownian_drift") {
        require_keys(node, {"kind", "q", "b"}, "brownian_drift");
        const auto b = get_vector(node.at("b"), "brownian_drift.b");
        const auto& qj = node.at("q");
        if (!qj.is_array() || qj.size() != b.size())
            throw std::invalid_argument("config: brownian_drift.q must be a d x d array of rows");
        std::vector<double> q;
        for (const auto& row : qj) {
            const auto r = get_vector(row, "brownian_drift.q row");
            if (r.size() != b.size())
                throw std::invalid_argument("config: brownian_drift.q must be a d x d array of rows");
            q.insert(q.end(), r.begin(), r.end());
        }
        return ExponentExpr::brownian_drift(std::move(q), b);
    }
    if (kind == "stable_subordinator") {
        require_keys(node, {"kind", "alpha"}, "stable_subordinator");
        return ExponentExpr::stable_subordinator(get_num(node, "alpha"));
    }
    if (kind == "sum") {
        require_keys(node, {"kind", "terms"}, "sum");
        return ExponentExpr::sum(exponents_from_array(node.at("terms"), "sum.terms"));
    }
    if (kind == "fractional_power") {
        require_keys(node, {"kind", "base", "gamma"}, "fractional_power");
        return ExponentExpr::fractional_power(exponent_from_json(node.at("base")), get_num(node, "gamma"));
    }
    if (kind == "product_lift") {
        require_keys(node, {"kind", "components"}, "product_lift");
        return ExponentExpr::product_lift(exponents_from_array(node.at("components"), "product_lift.components"));
    }
    if (kind == "difference_lift") {
        require_keys(node, {"kind", "base", "slot", "k"}, "difference_lift");
        return ExponentExpr::difference_lift(exponent_from_json(node.at("base")), get_int(node, "slot"),
                                             get_int(node, "k"));
    }
    throw std::invalid_argument("config: unknown exponent kind '" + kind + "'");
}

ShellOptions RunParams::shell_options() const {
    ShellOptions s;
    s.m_lo = shell_lo;
    s.m_hi = shell_hi;
    s.samples_per_shell = samples;
    s.seed = seed;
    s.shards = shards;
    s.threads = threads;
    return s;
}

SolveOptions RunParams::solve_options() const {
    SolveOptions s;
    s.beta_tol = beta_tol;
    s.shells = shell_options();
    s.probe_slope_margin = probe_slope_margin;
    s.tail_window = tail_window;
    s.cross_check = cross_check;
    return s;
}

RunConfig RunConfig::parse(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    require_keys(j, {"problem", "params", "hypothesis_flags", "output"}, "config");

    RunConfig cfg;
    cfg.raw = j;

    if (j.contains("hypothesis_flags")) {
        const auto& f = j.at("hypothesis_flags");
        require_keys(f, {"q_potential_density_ae_positive", "per_beta"}, "hypothesis_flags");
        if (f.contains("q_potential_density_ae_positive"))
            cfg.hypothesis_flags.q_potential_density_ae_positive =
                f.at("q_potential_density_ae_positive").get<bool>();
        if (f.contains("per_beta")) cfg.hypothesis_flags.per_beta = f.at("per_beta").get<bool>();
    }

    if (j.contains("problem")) cfg.problem = problem_from_json(j.at("problem"), cfg.hypothesis_flags);

    if (j.contains("params")) {
        const auto& p = j.at("params");
        require_keys(p,
                     {"seed", "beta_tol", "shells", "samples", "shards", "threads", "slope_margin",
                      "probe_slope_margin", "tail_window", "cross_check", "target", "format",
                      "mesh_level", "horizon", "alpha", "saturated_n", "t", "n_samples", "eps_c",
                      "eps_exponent", "level_lo", "level_hi", "estimate_mode", "inputs", "dim_report"},
                     "params");
        auto& out = cfg.params;
        if (p.contains("seed")) out.seed = p.at("seed").get<std::uint64_t>();
        if (p.contains("beta_tol")) out.beta_tol = get_num(p, "beta_tol");
        if (p.contains("shells")) {
            const auto& s = p.at("shells");
            require_keys(s, {"lo", "hi"}, "params.shells");
            out.shell_lo = get_int(s, "lo");
            out.shell_hi = get_int(s, "hi");
        }
        if (p.contains("samples")) out.samples = get_int(p, "samples");
        if (p.contains("shards")) out.shards = get_int(p, "shards");
        if (p.contains("threads")) out.threads = get_int(p, "threads");
        if (p.contains("slope_margin")) out.slope_margin = get_num(p, "slope_margin");
        if (p.contains("probe_slope_margin")) out.probe_slope_margin = get_num(p, "probe_slope_margin");
        if (p.contains("tail_window")) out.tail_window = get_int(p, "tail_window");
        if (p.contains("cross_check")) out.cross_check = p.at("cross_check").get<bool>();
        if (p.contains("target")) out.target = p.at("target").get<std::string>();
        if (p.contains("format")) out.format = p.at("format").get<std::string>();
        if (p.contains("mesh_level")) out.mesh_level = get_int(p, "mesh_level");
        if (p.contains("horizon")) out.horizon = get_num(p, "horizon");
        if (p.contains("alpha")) out.alpha = get_num(p, "alpha");
        if (p.contains("saturated_n")) out.saturated_n = get_int(p, "saturated_n");
        if (p.contains("t")) out.t_point = get_vector(p.at("t"), "params.t");
        if (p.contains("n_samples")) out.n_samples = p.at("n_samples").get<std::uint64_t>();
        if (p.contains("eps_c")) out.eps_c = get_num(p, "eps_c");
        if (p.contains("eps_exponent") && !p.at("eps_exponent").is_null())
            out.eps_exponent = get_num(p, "eps_exponent");
        if (p.contains("level_lo")) out.level_lo = get_int(p, "level_lo");
        if (p.contains("level_hi")) out.level_hi = get_int(p, "level_hi");
        if (p.contains("estimate_mode")) out.estimate_mode = p.at("estimate_mode").get<std::string>();
        if (p.contains("inputs"))
            for (const auto& v : p.at("inputs")) out.inputs.push_back(v.get<std::string>());
        if (p.contains("dim_report") && !p.at("dim_report").is_null())
            out.dim_report = p.at("dim_report").get<std::string>();
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        require_keys(o, {"dir"}, "output");
        if (o.contains("dir")) cfg.out_dir = o.at("dir").get<std::string>();
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path.string());
    Json j;
    is >> j;
    return parse(j);
}

std::string RunConfig::emit() const { return raw.dump(2); }

std::uint64_t RunConfig::config_hash() const { return fnv1a64(raw.dump()); }

} // namespace levydim
