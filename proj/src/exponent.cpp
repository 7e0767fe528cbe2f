#include "levydim/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace levydim {

namespace {

constexpr double kDegreeTol = 1e-9;

struct IsotropicStable {
    double alpha;
    int d;
};

struct BrownianDrift {
    int d;
    std::vector<double> q;    // row-major d x d, symmetric PSD
    std::vector<double> chol; // lower-triangular L with Q = L L^T
    std::vector<double> b;
    bool has_q = false; // any nonzero entry in Q
    bool has_b = false;
};

struct StableSubordinatorMarginal {
    double alpha;
    double theta; // tan(alpha pi / 2)
};

struct Custom {
    ExponentExpr::CustomFn fn;
    int d;
    std::optional<double> degree;
};

struct FractionalPower {
    ExponentExpr base;
    double gamma;
};

struct Sum {
    std::vector<ExponentExpr> terms;
};

struct ProductLift {
    std::vector<ExponentExpr> components;
};

struct DifferenceLift {
    ExponentExpr base;
    int slot; // 1-based, 1..k
    int k;
};

void check_finite(std::span<const double> xi) {
    for (double x : xi)
        if (!std::isfinite(x))
            throw std::domain_error("exponent evaluated at non-finite frequency");
}

double squared_norm(std::span<const double> xi) {
    double s = 0.0;
    for (double x : xi) s += x * x;
    return s;
}

// Cholesky of a symmetric PSD matrix with zero-pivot tolerance. Throws on a
// substantially negative pivot or asymmetry.
std::vector<double> cholesky_psd(const std::vector<double>& q, int d) {
    double max_diag = 0.0;
    for (int i = 0; i < d; ++i) max_diag = std::max(max_diag, std::abs(q[i * d + i]));
    const double tol = 1e-9 * std::max(1.0, max_diag);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(q[i * d + j] - q[j * d + i]) > tol)
                throw std::invalid_argument("brownian_drift: Q is not symmetric");

    std::vector<double> l(static_cast<size_t>(d) * d, 0.0);
    for (int j = 0; j < d; ++j) {
        double diag = q[j * d + j];
        for (int k = 0; k < j; ++k) diag -= l[j * d + k] * l[j * d + k];
        if (diag < -tol)
            throw std::invalid_argument("brownian_drift: Q is not positive semidefinite");
        diag = std::max(diag, 0.0);
        const double pivot = std::sqrt(diag);
        l[j * d + j] = pivot;
        for (int i = j + 1; i < d; ++i) {
            double off = q[i * d + j];
            for (int k = 0; k < j; ++k) off -= l[i * d + k] * l[j * d + k];
            if (pivot > 0.0) {
                l[i * d + j] = off / pivot;
            } else if (std::abs(off) > tol) {
                throw std::invalid_argument("brownian_drift: Q is not positive semidefinite");
            }
        }
    }
    return l;
}

} // namespace

struct ExponentExpr::Node {
    std::variant<IsotropicStable, BrownianDrift, StableSubordinatorMarginal, Custom,
                 FractionalPower, Sum, ProductLift, DifferenceLift>
        payload;
    int dim;
};

Complex principal_power(Complex base, double gamma) {
    double re = base.real();
    if (re < 0.0) {
        if (re < -kReTolerance)
            throw std::domain_error("fractional power of a value with negative real part (invalid exponent)");
        re = 0.0;
    }
    const Complex clamped(re, base.imag());
    if (clamped == Complex{0.0, 0.0}) return {0.0, 0.0};
    if (gamma == 1.0) return clamped;
    return std::pow(clamped, gamma);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

Complex eval_node(const ExponentExpr::Node& node, std::span<const double> xi);

Complex eval_payload(const IsotropicStable& p, std::span<const double> xi) {
    const double n2 = squared_norm(xi);
    if (n2 == 0.0) return {0.0, 0.0};
    return {std::pow(n2, p.alpha / 2.0), 0.0};
}

Complex eval_payload(const BrownianDrift& p, std::span<const double> xi) {
    // xi.Q xi = |L^T xi|^2, exact nonnegativity even for near-singular Q.
    const int d = p.d;
    double quad = 0.0;
    if (p.has_q) {
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int i = j; i < d; ++i) s += p.chol[i * d + j] * xi[i];
            quad += s * s;
        }
    }
    double drift = 0.0;
    if (p.has_b)
        for (int i = 0; i < d; ++i) drift += p.b[i] * xi[i];
    return {0.5 * quad, -drift};
}

Complex eval_payload(const StableSubordinatorMarginal& p, std::span<const double> xi) {
    const double l = xi[0];
    if (l == 0.0) return {0.0, 0.0};
    const double mag = std::pow(std::abs(l), p.alpha);
    const double sgn = l > 0.0 ? 1.0 : -1.0;
    return {mag, -mag * sgn * p.theta};
}

Complex eval_payload(const Custom& p, std::span<const double> xi) {
    const Complex v = p.fn(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("custom exponent returned a non-finite value");
    if (v.real() < -kReTolerance)
        throw std::domain_error("custom exponent has negative real part");
    return v;
}

Complex eval_payload(const FractionalPower& p, std::span<const double> xi) {
    return principal_power(eval_node(p.base.node(), xi), p.gamma);
}

Complex eval_payload(const Sum& p, std::span<const double> xi) {
    Complex acc{0.0, 0.0};
    for (const auto& t : p.terms) acc += eval_node(t.node(), xi);
    return acc;
}

Complex eval_payload(const ProductLift& p, std::span<const double> xi) {
    Complex acc{0.0, 0.0};
    for (size_t l = 0; l < p.components.size(); ++l)
        acc += eval_node(p.components[l].node(), xi.subspan(l, 1));
    return acc;
}

Complex eval_payload(const DifferenceLift& p, std::span<const double> xi) {
    const int d = p.base.dimension();
    double small[64];
    std::vector<double> heap;
    double* diff = d <= 64 ? small : (heap.resize(d), heap.data());

    // xi packs (xi_1, ..., xi_{k-1}); slot j sees xi_j - xi_{j-1} with
    // xi_0 = xi_k = 0.
    const int j = p.slot;
    if (j == 1) {
        for (int i = 0; i < d; ++i) diff[i] = xi[i];
    } else if (j == p.k) {
        const size_t off = static_cast<size_t>(p.k - 2) * d;
        for (int i = 0; i < d; ++i) diff[i] = -xi[off + i];
    } else {
        const size_t cur = static_cast<size_t>(j - 1) * d;
        const size_t prev = static_cast<size_t>(j - 2) * d;
        for (int i = 0; i < d; ++i) diff[i] = xi[cur + i] - xi[prev + i];
    }
    return eval_node(p.base.node(), std::span<const double>(diff, static_cast<size_t>(d)));
}

Complex eval_node(const ExponentExpr::Node& node, std::span<const double> xi) {
    return std::visit([&](const auto& p) { return eval_payload(p, xi); }, node.payload);
}

std::optional<double> degree_node(const ExponentExpr::Node& node);

std::optional<double> common_degree(const std::vector<ExponentExpr>& parts) {
    std::optional<double> deg;
    for (const auto& p : parts) {
        const auto d = p.homogeneity_degree();
        if (!d) return std::nullopt;
        if (!deg) {
            deg = d;
        } else if (std::abs(*deg - *d) > kDegreeTol) {
            return std::nullopt;
        }
    }
    return deg;
}

std::optional<double> degree_node(const ExponentExpr::Node& node) {
    struct Visitor {
        std::optional<double> operator()(const IsotropicStable& p) const { return p.alpha; }
        std::optional<double> operator()(const BrownianDrift& p) const {
            if (p.has_q && p.has_b) return std::nullopt;
            if (p.has_q) return 2.0;
            if (p.has_b) return 1.0;
            return std::nullopt; // zero exponent: degree undetermined
        }
        std::optional<double> operator()(const StableSubordinatorMarginal& p) const { return p.alpha; }
        std::optional<double> operator()(const Custom& p) const { return p.degree; }
        std::optional<double> operator()(const FractionalPower& p) const {
            const auto base = p.base.homogeneity_degree();
            if (!base) return std::nullopt;
            return p.gamma * *base;
        }
        std::optional<double> operator()(const Sum& p) const { return common_degree(p.terms); }
        std::optional<double> operator()(const ProductLift& p) const { return common_degree(p.components); }
        std::optional<double> operator()(const DifferenceLift& p) const { return p.base.homogeneity_degree(); }
    };
    return std::visit(Visitor{}, node.payload);
}

std::string describe_node(const ExponentExpr::Node& node);

std::string describe_list(const std::vector<ExponentExpr>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i].describe();
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string describe_node(const ExponentExpr::Node& node) {
    struct Visitor {
        std::string operator()(const IsotropicStable& p) const {
            return "isotropic_stable(alpha=" + fmt(p.alpha) + ",d=" + std::to_string(p.d) + ")";
        }
        std::string operator()(const BrownianDrift& p) const {
            std::string out = "brownian_drift(d=" + std::to_string(p.d) + ",Q=[";
            for (size_t i = 0; i < p.q.size(); ++i) {
                if (i) out += ",";
                out += fmt(p.q[i]);
            }
            out += "],b=[";
            for (size_t i = 0; i < p.b.size(); ++i) {
                if (i) out += ",";
                out += fmt(p.b[i]);
            }
            return out + "])";
        }
        std::string operator()(const StableSubordinatorMarginal& p) const {
            return "stable_subordinator(alpha=" + fmt(p.alpha) + ")";
        }
        std::string operator()(const Custom& p) const {
            return "custom(d=" + std::to_string(p.d) + ")";
        }
        std::string operator()(const FractionalPower& p) const {
            return "fractional_power(" + p.base.describe() + ",gamma=" + fmt(p.gamma) + ")";
        }
        std::string operator()(const Sum& p) const { return "sum(" + describe_list(p.terms) + ")"; }
        std::string operator()(const ProductLift& p) const {
            return "product_lift(" + describe_list(p.components) + ")";
        }
        std::string operator()(const DifferenceLift& p) const {
            return "difference_lift(" + p.base.describe() + ",slot=" + std::to_string(p.slot) +
                   ",k=" + std::to_string(p.k) + ")";
        }
    };
    return std::visit(Visitor{}, node.payload);
}

} // namespace

ExponentExpr ExponentExpr::wrap(Node&& n) {
    return ExponentExpr(std::make_shared<const Node>(std::move(n)));
}

ExponentExpr ExponentExpr::isotropic_stable(double alpha, int d) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::invalid_argument("isotropic_stable: alpha must lie in (0, 2]");
    if (d < 1) throw std::invalid_argument("isotropic_stable: d must be >= 1");
    return wrap({IsotropicStable{alpha, d}, d});
}

ExponentExpr ExponentExpr::brownian_drift(std::vector<double> q, std::vector<double> b) {
    const int d = static_cast<int>(b.size());
    if (d < 1) throw std::invalid_argument("brownian_drift: dimension must be >= 1");
    if (q.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("brownian_drift: Q must be d x d");
    BrownianDrift p;
    p.d = d;
    p.chol = cholesky_psd(q, d);
    p.q = std::move(q);
    p.b = std::move(b);
    p.has_q = std::any_of(p.q.begin(), p.q.end(), [](double v) { return v != 0.0; });
    p.has_b = std::any_of(p.b.begin(), p.b.end(), [](double v) { return v != 0.0; });
    return wrap({std::move(p), d});
}

ExponentExpr ExponentExpr::brownian(int d) {
    if (d < 1) throw std::invalid_argument("brownian: d must be >= 1");
    std::vector<double> q(static_cast<size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) q[i * d + i] = 1.0;
    return brownian_drift(std::move(q), std::vector<double>(d, 0.0));
}

ExponentExpr ExponentExpr::stable_subordinator(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("stable_subordinator: alpha must lie in (0, 1)");
    return wrap({StableSubordinatorMarginal{alpha, std::tan(alpha * std::numbers::pi / 2.0)}, 1});
}

ExponentExpr ExponentExpr::custom(CustomFn fn, int d, std::optional<double> asserted_homogeneity) {
    if (!fn) throw std::invalid_argument("custom: evaluator must be callable");
    if (d < 1) throw std::invalid_argument("custom: d must be >= 1");
    return wrap({Custom{std::move(fn), d, asserted_homogeneity}, d});
}

ExponentExpr ExponentExpr::fractional_power(ExponentExpr base, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("fractional_power: gamma must lie in (0, 1]");
    const int d = base.dimension();
    return wrap({FractionalPower{std::move(base), gamma}, d});
}

ExponentExpr ExponentExpr::sum(std::vector<ExponentExpr> terms) {
    if (terms.empty()) throw std::invalid_argument("sum: needs at least one term");
    const int d = terms.front().dimension();
    for (const auto& t : terms)
        if (t.dimension() != d) throw std::invalid_argument("sum: terms must share one dimension");
    return wrap({Sum{std::move(terms)}, d});
}

ExponentExpr ExponentExpr::product_lift(std::vector<ExponentExpr> components) {
    if (components.empty()) throw std::invalid_argument("product_lift: needs at least one component");
    for (const auto& c : components)
        if (c.dimension() != 1)
            throw std::invalid_argument("product_lift: components must be one-dimensional");
    const int d = static_cast<int>(components.size());
    return wrap({ProductLift{std::move(components)}, d});
}

ExponentExpr ExponentExpr::difference_lift(ExponentExpr base, int slot, int k) {
    if (k < 2) throw std::invalid_argument("difference_lift: k must be >= 2");
    if (slot < 1 || slot > k) throw std::invalid_argument("difference_lift: slot must lie in 1..k");
    const int d = base.dimension() * (k - 1);
    return wrap({DifferenceLift{std::move(base), slot, k}, d});
}

int ExponentExpr::dimension() const { return node_->dim; }

Complex ExponentExpr::evaluate(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != node_->dim)
        throw std::invalid_argument("evaluate: frequency dimension mismatch (expected " +
                                    std::to_string(node_->dim) + ", got " + std::to_string(xi.size()) + ")");
    check_finite(xi);
    Complex v = eval_node(*node_, xi);
    double re = v.real();
    if (re < 0.0) {
        if (re < -kReTolerance)
            throw std::domain_error("exponent value has negative real part: " + describe());
        re = 0.0;
    }
    return {re, v.imag()};
}

Complex ExponentExpr::evaluate(std::initializer_list<double> xi) const {
    return evaluate(std::span<const double>(xi.begin(), xi.size()));
}

std::optional<double> ExponentExpr::homogeneity_degree() const { return degree_node(*node_); }

std::optional<ExponentExpr::IsotropicStableView> ExponentExpr::as_isotropic_stable() const {
    if (const auto* p = std::get_if<IsotropicStable>(&node_->payload))
        return IsotropicStableView{p->alpha, p->d};
    return std::nullopt;
}

std::optional<ExponentExpr::BrownianDriftView> ExponentExpr::as_brownian_drift() const {
    if (const auto* p = std::get_if<BrownianDrift>(&node_->payload))
        return BrownianDriftView{p->d, p->q, p->chol, p->b};
    return std::nullopt;
}

std::optional<ExponentExpr::StableSubordinatorView> ExponentExpr::as_stable_subordinator() const {
    if (const auto* p = std::get_if<StableSubordinatorMarginal>(&node_->payload))
        return StableSubordinatorView{p->alpha};
    return std::nullopt;
}

std::string ExponentExpr::describe() const { return describe_node(*node_); }

AdditiveProcessSpec::AdditiveProcessSpec(std::vector<ExponentExpr> exps) : exponents(std::move(exps)) {
    if (exponents.empty())
        throw std::invalid_argument("additive process spec needs at least one exponent");
    const int d = exponents.front().dimension();
    for (const auto& e : exponents)
        if (e.dimension() != d)
            throw std::invalid_argument("additive process spec: exponents must share one dimension");
}

int AdditiveProcessSpec::dimension() const { return exponents.front().dimension(); }

std::string AdditiveProcessSpec::describe() const {
    std::string out = "additive(";
    for (size_t i = 0; i < exponents.size(); ++i) {
        if (i) out += ";";
        out += exponents[i].describe();
    }
    return out + ")";
}

ExponentExpr subordinate(const ExponentExpr& psi, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("subordinate: alpha must lie in (0, 1)");
    return ExponentExpr::fractional_power(psi, alpha);
}

AdditiveProcessSpec level_set_family(const AdditiveProcessSpec& spec, double beta) {
    const int n = spec.parameter_count();
    if (!(beta > 0.0 && beta < n))
        throw std::invalid_argument("level_set_family: beta must lie in (0, N)");
    const double gamma = 1.0 - beta / n;
    std::vector<ExponentExpr> terms;
    terms.reserve(spec.exponents.size());
    for (const auto& psi : spec.exponents)
        terms.push_back(ExponentExpr::fractional_power(psi, gamma));
    const ExponentExpr component = ExponentExpr::sum(std::move(terms));
    return AdditiveProcessSpec(std::vector<ExponentExpr>(n, component));
}

AdditiveProcessSpec difference_lift_spec(const ExponentExpr& psi, int k) {
    if (k < 2) throw std::invalid_argument("difference_lift_spec: k must be >= 2");
    return difference_lift_spec(std::vector<ExponentExpr>(k, psi));
}

AdditiveProcessSpec difference_lift_spec(const std::vector<ExponentExpr>& psis) {
    const int k = static_cast<int>(psis.size());
    if (k < 2) throw std::invalid_argument("difference_lift_spec: k must be >= 2");
    const int d = psis.front().dimension();
    for (const auto& p : psis)
        if (p.dimension() != d)
            throw std::invalid_argument("difference_lift_spec: exponents must share one dimension");
    std::vector<ExponentExpr> lifted;
    lifted.reserve(psis.size());
    for (int j = 1; j <= k; ++j)
        lifted.push_back(ExponentExpr::difference_lift(psis[j - 1], j, k));
    return AdditiveProcessSpec(std::move(lifted));
}

} // namespace levydim
