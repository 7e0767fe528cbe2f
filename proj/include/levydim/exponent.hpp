#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levydim {

using Complex = std::complex<double>;

/// Dual variable xi in R^D. Dimension D >= 1, all coordinates finite.
using Frequency = std::vector<double>;

/// Real parts of exponent values in [-kReTolerance, 0) are treated as
/// round-off and clamped to 0; anything below is a hard error.
inline constexpr double kReTolerance = 1e-12;

/// Immutable expression tree denoting a Levy exponent Psi: R^D -> C with
/// Psi(0) = 0, Re Psi >= 0 and Psi(-xi) = conj(Psi(xi)).
///
/// Leaves are classical processes; inner nodes are the fractional power
/// (stable subordination), sums, and the two coordinate lifts used to build
/// level-set and multiple-time criteria. Nodes are shared and reference
/// counted; evaluation is pure, so expressions can be used concurrently.
class ExponentExpr {
public:
    using CustomFn = std::function<Complex(std::span<const double>)>;

    /// Psi(xi) = |xi|^alpha on R^d, alpha in (0,2].
    static ExponentExpr isotropic_stable(double alpha, int d);

    /// Psi(xi) = 1/2 xi.Q xi - i b.xi; Q must be symmetric PSD (d x d,
    /// row-major). The quadratic form is evaluated through the Cholesky
    /// factor so it is exactly nonnegative.
    static ExponentExpr brownian_drift(std::vector<double> q, std::vector<double> b);

    /// Standard Brownian motion on R^d: Q = I, b = 0 (Psi = |xi|^2 / 2).
    static ExponentExpr brownian(int d);

    /// One-dimensional marginal of a standard alpha-stable subordinator,
    /// alpha in (0,1): Psi(l) = |l|^alpha (1 - i sgn(l) tan(alpha pi/2)).
    static ExponentExpr stable_subordinator(double alpha);

    /// Opaque evaluator. The dimension must be declared; homogeneity may be
    /// asserted (it is never sniffed numerically). The evaluator must be a
    /// valid Levy exponent: Re >= 0 is checked wherever values are consumed.
    static ExponentExpr custom(CustomFn fn, int d, std::optional<double> asserted_homogeneity = std::nullopt);

    /// [base]^gamma with the principal branch, gamma in (0,1]. Legal because
    /// Re base >= 0 keeps the argument inside (-pi/2, pi/2].
    static ExponentExpr fractional_power(ExponentExpr base, double gamma);

    /// Sum of exponents of equal dimension.
    static ExponentExpr sum(std::vector<ExponentExpr> terms);

    /// Psi(xi) = sum_l psi_l(xi_l) from one-dimensional components;
    /// output dimension = component count.
    static ExponentExpr product_lift(std::vector<ExponentExpr> components);

    /// On R^{d(k-1)}: evaluates base at xi_j - xi_{j-1} with xi_0 = xi_k = 0,
    /// where xi packs (xi_1, ..., xi_{k-1}) slot-major (coordinates of xi_1
    /// first). slot is 1-based in 1..k, k >= 2.
    static ExponentExpr difference_lift(ExponentExpr base, int slot, int k);

    /// Frequency-space dimension D.
    int dimension() const;

    /// Psi(xi). Throws on dimension mismatch, non-finite input, or a base
    /// value with Re < -kReTolerance (an invalid custom exponent). The
    /// returned real part is clamped into [0, inf).
    Complex evaluate(std::span<const double> xi) const;
    Complex evaluate(std::initializer_list<double> xi) const;

    /// Structural homogeneity: a with Psi(c xi) = c^a Psi(xi) for c > 0, or
    /// nullopt when the tree does not force a single degree.
    std::optional<double> homogeneity_degree() const;

    /// Canonical one-line description (stable across runs; hashed into
    /// data-file headers).
    std::string describe() const;

    // Leaf views for the samplers; nullopt when the node is something else.
    struct IsotropicStableView {
        double alpha;
        int d;
    };
    struct BrownianDriftView {
        int d;
        std::span<const double> q;
        std::span<const double> chol; // lower-triangular L with Q = L L^T
        std::span<const double> b;
    };
    struct StableSubordinatorView {
        double alpha;
    };
    std::optional<IsotropicStableView> as_isotropic_stable() const;
    std::optional<BrownianDriftView> as_brownian_drift() const;
    std::optional<StableSubordinatorView> as_stable_subordinator() const;

    struct Node;
    const Node& node() const { return *node_; }

private:
    explicit ExponentExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static ExponentExpr wrap(Node&& n);
    std::shared_ptr<const Node> node_;
};

/// N independent one-parameter components on a common frequency space R^D,
/// representing Z_t = sum_j X^j_{t_j}.
struct AdditiveProcessSpec {
    std::vector<ExponentExpr> exponents;

    AdditiveProcessSpec() = default;
    explicit AdditiveProcessSpec(std::vector<ExponentExpr> exps);

    int parameter_count() const { return static_cast<int>(exponents.size()); }
    int dimension() const;
    std::string describe() const;
};

/// Exponent of X composed with an independent standard alpha-stable
/// subordinator (Laplace exponent lambda^alpha), alpha in (0,1):
/// [Psi]^alpha with the principal branch.
ExponentExpr subordinate(const ExponentExpr& psi, double alpha);

/// Spec of Z composed with the saturated additive (1 - beta/N)-stable
/// subordinator: every component becomes sum_j [Psi_j]^{1-beta/N}, so the
/// N components are identical. beta in (0, N).
AdditiveProcessSpec level_set_family(const AdditiveProcessSpec& spec, double beta);

/// k-parameter spec on R^{d(k-1)} whose j-th component is
/// psi_j(xi_j - xi_{j-1}) with xi_0 = xi_k = 0. Supply one exponent for
/// i.i.d. copies or k exponents for distinct slots.
AdditiveProcessSpec difference_lift_spec(const ExponentExpr& psi, int k);
AdditiveProcessSpec difference_lift_spec(const std::vector<ExponentExpr>& psis);

/// Principal-branch power of an exponent value: clamps Re in
/// [-kReTolerance, 0) to 0 and throws below the tolerance.
Complex principal_power(Complex base, double gamma);

/// 64-bit FNV-1a; used for spec and config hashes.
std::uint64_t fnv1a64(std::string_view text);

} // namespace levydim
