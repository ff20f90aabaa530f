#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "germinate/cantor.hpp"
#include "germinate/poly.hpp"

namespace germinate {

/// One axis worth of interpolation nodes.
struct NodePlan {
    enum class Scheme { NonarchSubtree, ArchRootsOfUnity, Explicit };

    Scheme scheme = Scheme::Explicit;
    FieldDesc desc;
    std::vector<Value> nodes;  // pairwise distinct

    // NonarchSubtree metadata
    std::shared_ptr<const SpreadEmbedding> embedding;
    std::vector<BitString> prefixes;  // the selected branch representatives
    std::uint32_t level_m = 0;
    mpq_class mu_est = 0;

    // ArchRootsOfUnity metadata
    std::uint32_t total_roots = 0;
    double radius = 0;
    double rotation = 0;
    double t = 0;  // n / total_roots

    std::size_t count() const { return nodes.size(); }

    static NodePlan explicit_nodes(FieldDesc desc, std::vector<Value> nodes);
    /// Chebyshev nodes cos(j pi / n) on [-1, 1], j = 0..n (n+1 nodes, real).
    static NodePlan chebyshev(std::uint32_t n);
    /// Integer nodes 0..n embedded into the field (exact kinds).
    static NodePlan integer_nodes(const FieldDesc& desc, std::uint32_t n);
};

using MemberFn = std::function<bool(const Value&)>;
MemberFn member_all();

/// Picks n+1 nodes in pairwise distinct level-m subtrees, m minimal with
/// 2^m mu_est > n, raising m until enough member-occupied subtrees exist.
/// Within each subtree the lexicographically smallest member-satisfying word
/// (at the embedding's truncation depth) is taken, so planning is
/// deterministic. Throws insufficient_subtrees when the depth is exhausted.
NodePlan select_nodes_nonarch(std::shared_ptr<const SpreadEmbedding> e, const MemberFn& member,
                              std::uint32_t n, const mpq_class& mu_est);

/// n+1 of the N-th roots of unity scaled by r and rotated, N = ceil(n/(1-eps)).
/// Records t = n/N. Throws too_few_nodes when N <= n.
NodePlan select_nodes_arch(std::uint32_t n, double eps, double r, double rotation = 0.0);

/// Unique interpolant of degree <= n through (nodes_i, values_i), via the
/// product form. Exact in exact field kinds.
MultiPoly lagrange_univariate(std::span<const Value> nodes, std::span<const Value> values);

/// Row-major tensor of values; axis 0 is the slowest index.
struct TensorGrid {
    std::vector<std::size_t> extents;
    std::vector<Value> data;

    std::size_t flat_size() const;
    std::size_t index(std::span<const std::size_t> idx) const;
};

/// Values of f at the tensor grid of the plans' leading nodes.
TensorGrid evaluate_on_grid(const MultiPoly& f, std::span<const NodePlan> plans,
                            std::span<const std::size_t> extents);

/// Nested univariate Lagrange interpolation along axis 0 with coefficient
/// polynomials in the remaining variables. The base case d = 0 returns the
/// single grid value as a constant. P-adic kinds are computed with guard
/// digits and truncated back to the descriptor precision.
MultiPoly tensor_interpolate(const TensorGrid& grid, std::span<const NodePlan> plans);

/// The proof-side worst-case average of -log2 d(x_i, x_j) over nodes in
/// distinct level-m subtrees, and the product bound it certifies.
struct SeparationBound {
    mpq_class avg_bound;                           // S(m, n), exact
    double log2_product_bound;                     // n log2 C - gamma n S
    std::optional<mpq_class> valuation_sum_bound;  // nonarch: sum of pi-valuations <= this
};
SeparationBound separation_lower_bound(const NodePlan& plan);

/// Measured counterparts on the plan's actual nodes.
struct SeparationMeasurement {
    double min_log2_product;                      // min over i of log2 prod_{j!=i} |rho_i - rho_j|
    std::optional<mpq_class> max_valuation_sum;   // nonarch: max over i of sum of pi-valuations
};
SeparationMeasurement measure_separation(const NodePlan& plan);

/// One conditioning trial: ratio = coeff_norm / sup_norm at a given degree.
struct TrialRecord {
    std::uint32_t degree = 0;
    std::uint32_t trial = 0;
    double log2_ratio = 0;
};

/// Envelope witness: ||h|| <= A B^deg ||h||_X for every recorded trial.
struct ConditioningReport {
    double A = 1;
    double B = 1;
    std::optional<mpq_class> A_exact, B_exact;  // set when every ratio was exact
    std::uint32_t degree_lo = 0, degree_hi = 0;
    std::uint32_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
    std::string worst_poly_id;  // trial attaining the intercept A
    std::vector<TrialRecord> records;
    std::vector<double> max_log2_ratio;  // per degree, index degree - degree_lo
};

/// Random-trial conditioning over an explicit sample. Coefficients are drawn
/// uniformly on the unit ball of the field; each trial has exact degree.
ConditioningReport conditioning_estimate(const SamplePointSet& X, std::uint32_t degree_lo,
                                         std::uint32_t degree_hi, std::uint32_t trials,
                                         std::uint64_t seed);
/// Same, over the node set of a plan.
ConditioningReport conditioning_estimate(const NodePlan& plan, std::uint32_t degree_lo,
                                         std::uint32_t degree_hi, std::uint32_t trials,
                                         std::uint64_t seed);
/// Envelope fit for a fixed family of polynomials (trial index = position).
ConditioningReport conditioning_from_family(std::span<const MultiPoly> family,
                                            const SamplePointSet& X);

/// Quadrature for the roots-of-unity proof bounds:
///   lower_integral = (1/2t) int_{-t}^{t} log|1 - e^{i pi theta}| dtheta
///   upper          = (1/2t) int_{-t}^{t} log|1 - e^{i pi (1+theta)}| dtheta
/// (natural logs; `lower` adds the log r term from the proof).
struct ArchIntegralBound {
    double lower_integral = 0;
    double lower = 0;  // lower_integral + log(r)
    double upper = 0;
};
ArchIntegralBound arch_integral_bound(double t, double r, double tol = 1e-10);

/// One refinement step of a perfect-interpolation experiment.
struct PerfectInterpStep {
    std::uint32_t index = 0;
    std::string label;
    double A = 1;
    double B = 1;
    std::size_t sample_size = 0;
};

/// Runs conditioning with a shared trial set over a nested sequence of
/// samples and reports the (A_i, B_i) trend. Verifies nesting.
std::vector<PerfectInterpStep> perfect_interp_check(std::span<const SamplePointSet> nested,
                                                    std::span<const std::string> labels,
                                                    std::uint32_t degree_lo, std::uint32_t degree_hi,
                                                    std::uint32_t trials, std::uint64_t seed);

/// count equally spaced points on the circle |z| = r (complex plane).
SamplePointSet circle_sample(double r, std::size_t count, double rotation = 0.0);

/// ((z - 3z^3)/2)^n over exact rationals.
MultiPoly counterexample_poly(std::uint32_t n);

/// Exact data for one member of the counterexample family.
struct CounterexampleRecord {
    std::uint32_t n = 0;
    mpq_class coeff_z3n;      // (-3/2)^n
    mpq_class real_norm;      // (3/2)^n
    mpq_class two_adic_norm;  // 2^n
    double sup_real_sample = 0;
    double sup_z2_sample = 0;
    bool sup_real_leq_one = false;  // exact certificate on the sampled grid
    bool sup_z2_leq_one = false;
    std::uint32_t grid_points = 0;
    std::uint32_t z2_residues = 0;
};

/// Expands the family member exactly, extracts the z^{3n} coefficient and its
/// two norms, and certifies |q_n| <= 1 on a dyadic grid in [-1, 1) and on all
/// residues mod 2^z2_depth (exact integer evaluation throughout).
CounterexampleRecord counterexample_family(std::uint32_t n, std::uint32_t grid_points = 4096,
                                           std::uint32_t z2_depth = 12);

/// Envelope certificates extracted from the family: exact coefficient-norm
/// growth against a unit sup bound, plus the fitted envelope base over the
/// family index n (deg q_n = 3n).
struct CounterexampleEnvelope {
    std::vector<CounterexampleRecord> records;
    double fitted_B_real = 1;   // hull slope base over (n, ||q_n||)
    double fitted_B_2adic = 1;  // same with the 2-adic coefficient norm
    bool b_real_at_least_3_2 = false;     // exact comparison of the fitted base
    bool b_2adic_at_least_2 = false;
    bool growth_certified_real = false;   // all n: ||q_n|| >= (3/2)^n and sup <= 1
    bool growth_certified_2adic = false;  // all n: ||q_n||_2 >= 2^n and sup <= 1
};
CounterexampleEnvelope counterexample_envelope(std::uint32_t n_max, std::uint32_t grid_points = 4096,
                                               std::uint32_t z2_depth = 12);

/// Trial-polynomial generators (deterministic given the rng state).
MultiPoly random_poly_total_degree(const FieldDesc& d, std::uint32_t arity, std::uint32_t degree,
                                   Rng& rng);
MultiPoly random_poly_box_degree(const FieldDesc& d, std::uint32_t arity,
                                 std::span<const std::uint32_t> per_axis, Rng& rng);

}  // namespace germinate
