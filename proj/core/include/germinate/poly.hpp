#pragma once

#include <map>
#include <span>
#include <vector>

#include "germinate/fields.hpp"

namespace germinate {

using Exponents = std::vector<std::uint32_t>;

/// Explicit finite stand-in for the sample set X.
struct SamplePointSet {
    FieldDesc desc;
    std::uint32_t arity = 1;
    std::vector<std::vector<Value>> points;  // each of length `arity`

    void validate() const;  // nonempty, consistent descriptor and arity
};

/// Sparse multivariate polynomial: exponent vector -> nonzero coefficient.
/// Inexact-zero p-adic coefficients are retained (their norm is undecidable),
/// exact zeros are never stored.
class MultiPoly {
  public:
    MultiPoly() : desc_(FieldDesc::real()), arity_(1) {}
    MultiPoly(FieldDesc desc, std::uint32_t arity) : desc_(std::move(desc)), arity_(arity) {}

    static MultiPoly constant(const FieldDesc& d, std::uint32_t arity, const Value& c);
    static MultiPoly monomial(const FieldDesc& d, Exponents e, const Value& c);
    /// The variable x_i (0-based) in `arity` variables.
    static MultiPoly variable(const FieldDesc& d, std::uint32_t arity, std::uint32_t i);

    const FieldDesc& descriptor() const { return desc_; }
    std::uint32_t arity() const { return arity_; }
    const std::map<Exponents, Value>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Max total degree of stored terms; -1 for the zero polynomial.
    std::int64_t degree() const;
    /// Coefficient of e (zero Value if absent).
    Value coeff(const Exponents& e) const;

    void add_term(const Exponents& e, const Value& c);

    MultiPoly add(const MultiPoly& g) const;
    MultiPoly sub(const MultiPoly& g) const;
    MultiPoly mul(const MultiPoly& g) const;
    MultiPoly scale(const Value& c) const;
    MultiPoly pow(std::uint32_t e) const;

    Value evaluate(std::span<const Value> point) const;

    /// Sum of coefficient norms; exact rational for exact kinds with
    /// integral valuations.
    Norm coeff_norm() const;
    /// Max |h(x)| over the sample; throws arity_mismatch / degenerate input.
    Norm sup_norm_on_sample(const SamplePointSet& X) const;

    /// p(u + z v) as a univariate polynomial in z, computed in the
    /// coefficient field.
    MultiPoly restrict_slice(std::span<const Value> u, std::span<const Value> v) const;

    /// Sets x_1 = 1 and drops the first variable.
    MultiPoly dehomogenize() const;
    /// Inverse on homogeneous data: pads each term with x_1^(n - total deg).
    /// Throws degree_overflow when deg exceeds n.
    MultiPoly rehomogenize(std::uint32_t n) const;

    bool operator==(const MultiPoly&) const;

  private:
    FieldDesc desc_;
    std::uint32_t arity_;
    std::map<Exponents, Value> terms_;
};

inline MultiPoly operator+(const MultiPoly& f, const MultiPoly& g) { return f.add(g); }
inline MultiPoly operator-(const MultiPoly& f, const MultiPoly& g) { return f.sub(g); }
inline MultiPoly operator*(const MultiPoly& f, const MultiPoly& g) { return f.mul(g); }

/// Degree-n part of a truncated series.
struct HomogeneousComponent {
    std::uint32_t degree = 0;
    MultiPoly poly;
};

/// Splits f into homogeneous components h_0..h_N (terms of degree > N are
/// ignored). Summing the components reproduces every stored coefficient of
/// degree <= N exactly.
std::vector<HomogeneousComponent> homogeneous_parts(const MultiPoly& f, std::uint32_t N);

/// Equality that treats inexact-zero coefficients as matching absent terms;
/// used when comparing p-adic reconstructions against exact references.
bool window_equal(const MultiPoly& f, const MultiPoly& g);

}  // namespace germinate
