#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "germinate/interp.hpp"
#include "germinate/poly.hpp"

namespace germinate {

/// Per-direction univariate coefficient stream: coefficient(x, n) is the
/// n-th coefficient of z -> f(z x).
class SliceOracle {
  public:
    using EvalFn = std::function<Value(std::span<const Value>, std::uint32_t)>;

    SliceOracle(FieldDesc desc, std::uint32_t arity, std::uint32_t max_n, EvalFn eval);

    Value coefficient(std::span<const Value> x, std::uint32_t n) const;

    const FieldDesc& descriptor() const { return desc_; }
    std::uint32_t arity() const { return arity_; }
    std::uint32_t max_n() const { return max_n_; }

    /// Oracle backed by a polynomial: coefficient(x, n) = h_n(x).
    static SliceOracle from_poly(const MultiPoly& f, std::uint32_t max_n);
    /// f = 1 / (1 - <w, x>): coefficient(x, n) = <w, x>^n.
    static SliceOracle geometric(std::vector<Value> w, std::uint32_t max_n);
    /// f = prod_i 1 / (1 - x_i): coefficients are the complete homogeneous
    /// symmetric sums.
    static SliceOracle product_geometric(const FieldDesc& d, std::uint32_t arity,
                                         std::uint32_t max_n);

  private:
    FieldDesc desc_;
    std::uint32_t arity_;
    std::uint32_t max_n_;
    EvalFn eval_;
};

/// Reconstructed homogeneous components h_0..h_N with the plans used.
struct SeriesRecon {
    FieldDesc desc;
    std::uint32_t arity = 1;
    std::uint32_t N = 0;
    std::vector<MultiPoly> components;  // size N+1, component n homogeneous of degree n
    double max_residual = 0;            // consistency residual on the chart grid (0 in exact mode)
    std::vector<NodePlan> plans;        // d-1 axis plans
};

/// Reconstructs h_n for n = 0..N from chart slices (1, t_2, ..., t_d):
/// evaluates the oracle on the plan grid, tensor-interpolates the
/// dehomogenized g_n, and rehomogenizes. Plans must supply N+1 nodes per
/// axis; per degree the leading n+1 nodes are used.
SeriesRecon reconstruct_series(const SliceOracle& o, std::uint32_t N,
                               std::span<const NodePlan> axis_plans);

/// Growth-rate radius proxy over a trailing window: r_est is the reciprocal
/// of the geometric-mean growth of ||h_n|| between the window's first and
/// last nonvanishing degrees, exact (r_exact set) when the norms are exact
/// and the root is a perfect power. +infinity when every windowed component
/// vanishes.
struct RadiusEstimate {
    double r_est = 0;
    std::optional<mpq_class> r_exact;
    std::uint32_t window_lo = 0, window_hi = 0;
    std::vector<Norm> per_degree_norms;  // ||h_n|| for n in [window_lo, window_hi]
};
RadiusEstimate estimate_radius(const SeriesRecon& rec, std::uint32_t window_lo,
                               std::uint32_t window_hi);

/// Slice-wise analogue on |coefficient(x, n)|.
double directional_radius(const SliceOracle& o, std::span<const Value> x, std::uint32_t window_lo,
                          std::uint32_t window_hi);

struct PolydiskReport {
    RadiusEstimate radius;
    double min_directional_radius = 0;
    std::size_t directions = 0;
    std::uint32_t N = 0;
};

/// Verifies every sampled direction has windowed radius >= 1 - tol (else
/// throws slice_divergent), reconstructs on default plans for the field, and
/// reports the radius estimate.
PolydiskReport polydisk_check(const SliceOracle& o, const SamplePointSet& directions,
                              std::uint32_t N, std::uint32_t window_lo, std::uint32_t window_hi,
                              double tol = 0.05, std::span<const NodePlan> plans = {});

struct StressReport {
    double min_r_est = 0;
    std::size_t binding_index = 0;
    std::vector<double> r_values;
    std::string plan_echo;  // spread constants of the plans, for reproducibility
};

/// Empirical stand-in for the quantitative constant: gates every oracle on
/// the plan directions, reconstructs, and reports the minimal r_est.
StressReport quantitative_stress(std::span<const SliceOracle> family,
                                 std::span<const NodePlan> plans, std::uint32_t N,
                                 std::uint32_t window_lo, std::uint32_t window_hi,
                                 double tol = 0.05);

/// Default reconstruction plans per field kind: Chebyshev nodes over the
/// reals, scaled roots of unity over the complex numbers, integer nodes for
/// the exact kinds. d-1 axes with N+1 nodes each.
std::vector<NodePlan> default_axis_plans(const FieldDesc& d, std::uint32_t arity, std::uint32_t N);

}  // namespace germinate
