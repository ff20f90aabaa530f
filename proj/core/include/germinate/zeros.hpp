#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "germinate/poly.hpp"

namespace germinate {

/// Lower convex hull of (i, v(c_i)) for a univariate nonarchimedean
/// polynomial. Slopes are strictly increasing; segment lengths sum to
/// deg - (vanishing order at 0). Valuations are in pi-units over k.
struct NewtonPolygon {
    struct Vertex {
        std::int64_t i = 0;
        Valuation v;
    };
    struct Segment {
        mpq_class slope;  // in p-valuation units: roots have |z| = p^slope
        std::uint64_t length = 0;
    };
    std::vector<Vertex> vertices;
    std::vector<Segment> segments;
    std::uint64_t vanishing_order = 0;
};

NewtonPolygon newton_polygon(const MultiPoly& q);

/// Root norms with multiplicities read off the Newton polygon; norm-0
/// entries account for the vanishing order at zero.
struct RootNormMultiset {
    struct Entry {
        Norm norm;
        std::uint64_t multiplicity = 0;
    };
    std::vector<Entry> entries;  // ascending by norm
};
RootNormMultiset root_norms_nonarch(const MultiPoly& q);

/// Minimal modulus over all complex roots, by Aberth-Ehrlich simultaneous
/// iteration with a backward-error certificate of backward_tol relative on
/// the coefficients. +infinity for nonzero constants.
double smallest_root_modulus_arch(const MultiPoly& q, double backward_tol = 1e-10);

/// All complex roots (archimedean kinds), certification as above.
std::vector<std::complex<double>> complex_roots(const MultiPoly& q, double backward_tol = 1e-10);

/// Largest r such that p(u + z v) has no root with |z| < r: the smallest
/// root norm of the slice; 0 when p(u) = 0, +infinity when the slice is a
/// nonzero constant.
double zero_free_slice_radius(const MultiPoly& p, std::span<const Value> u,
                              std::span<const Value> v);

enum class Trit { False, True, Undecided };

/// Does q split into linear factors over its coefficient field?
/// Complex: always true. Real: certified from the root finder's imaginary
/// parts. P-adic kinds: false on non-integral Newton slopes or a squarefree
/// residue that provably fails to split; true when strong Hensel lifting
/// certifies a full set of simple roots; undecided otherwise (repeated
/// residue factors at the working precision).
Trit is_F_rooted(const MultiPoly& q);

/// Linear factor <a, x> + b.
struct LinearFactor {
    std::vector<Value> a;
    Value b;
};

struct FactoredPoly {
    FieldDesc desc;
    std::uint32_t arity = 0;
    std::vector<LinearFactor> factors;

    MultiPoly expand() const;
    void validate() const;
};

/// Zero-geometry certificate at a point: s_u is the infimum of zero-free
/// slice radii over the sampled directions, d_uZ the distance to the zero
/// set (exact for factored input, sampled otherwise).
struct ZeroGeometryReport {
    double s_u = 0;
    double d_uZ = 0;
    double ratio = 1;  // d_uZ / s_u (1 when both vanish)
    std::size_t directions_used = 0;
    bool d_exact = false;             // factored-input closed form
    bool sampled_fallback = false;    // warning: d_uZ estimated from slices
};

/// Factored input: exact point-to-hyperplane distances (Euclidean, over the
/// archimedean kinds).
ZeroGeometryReport hyperbolic_distance_bound(const FactoredPoly& p, std::span<const Value> u,
                                             const SamplePointSet& X);
/// General input: d_uZ falls back to the sampled slice estimate and the
/// report carries a warning flag.
ZeroGeometryReport hyperbolic_distance_bound(const MultiPoly& p, std::span<const Value> u,
                                             const SamplePointSet& X);

struct EmpiricalC {
    double c_min = 0;
    std::size_t binding_family = 0;
    std::size_t binding_point = 0;
    std::vector<double> ratios;  // family-major order
};

/// min over (family x points) of d_uZ / s_u for a fixed direction sample.
EmpiricalC empirical_C(std::span<const FactoredPoly> family,
                       std::span<const std::vector<Value>> points, const SamplePointSet& X);

}  // namespace germinate
