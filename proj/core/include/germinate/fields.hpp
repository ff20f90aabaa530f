#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "germinate/errors.hpp"
#include "germinate/util.hpp"

namespace germinate {

enum class FieldKind { Real, Complex, Padic, RamifiedPadic, ExactRational };

/// Norm carried by an ExactRational descriptor.
enum class RationalNorm { Archimedean, Padic };

/// Identifies one of the supported complete normed fields together with the
/// working precision of its representation.
struct FieldDesc {
    FieldKind kind = FieldKind::Real;
    std::uint32_t p = 0;          // prime, nonarchimedean kinds only
    std::uint32_t k = 1;          // ramification index, value group (1/k)Z
    std::uint32_t precision = 64; // retained uniformizer digits
    RationalNorm rnorm = RationalNorm::Archimedean;

    static FieldDesc real();
    static FieldDesc complex_plane();
    static FieldDesc padic(std::uint32_t p, std::uint32_t precision = 64);
    static FieldDesc ramified(std::uint32_t p, std::uint32_t k, std::uint32_t precision = 64);
    static FieldDesc rational();  // exact Q with the archimedean norm
    static FieldDesc rational_padic(std::uint32_t p);

    bool nonarchimedean() const;
    /// True when arithmetic in this kind is exact (possibly truncated but
    /// with tracked error position).
    bool exact_kind() const;
    bool padic_like() const { return kind == FieldKind::Padic || kind == FieldKind::RamifiedPadic; }
    std::string str() const;
    bool operator==(const FieldDesc&) const = default;
    /// Same field, ignoring the retained digit count.
    bool same_field(const FieldDesc& o) const {
        return kind == o.kind && p == o.p && k == o.k && rnorm == o.rnorm;
    }
};

/// Exact valuation v = num/k in (1/k)Z, or +infinity for the zero element.
struct Valuation {
    std::int64_t num = 0;
    std::uint32_t k = 1;
    bool infinite = false;

    static Valuation infinity() { return Valuation{0, 1, true}; }
    double approx() const;
    mpq_class rational() const;  // throws internal_error when infinite
    bool operator==(const Valuation&) const = default;
};
bool valuation_less(const Valuation& a, const Valuation& b);

/// Finite pi-adic expansion sum_i digits[i] * pi^(v+i) with pi^k = p. `err`
/// is the earliest pi-power at which the true value is unknown; nullopt means
/// the stored sum is exact. Canonical form: leading digit nonzero, at most
/// `precision` digits, zero is the empty digit vector with v = 0.
struct PadicPayload {
    std::int64_t v = 0;
    std::vector<std::uint32_t> digits;
    std::optional<std::int64_t> err;

    bool window_empty() const { return digits.empty(); }
    bool operator==(const PadicPayload&) const = default;
};

/// |x| of a field element. Carries the exact rational magnitude whenever the
/// representation allows it, and the exact valuation for nonarchimedean
/// kinds; `value()` is always available as binary64.
class Norm {
  public:
    Norm() : approx_(0), zero_(true) {}

    static Norm from_double(double a);
    static Norm from_exact(const mpq_class& magnitude);
    static Norm from_valuation(std::uint32_t p, const Valuation& v);

    double value() const { return approx_; }
    bool is_zero() const { return zero_; }
    const std::optional<mpq_class>& exact() const { return exact_; }
    const std::optional<Valuation>& valuation() const { return valuation_; }
    std::uint32_t prime() const { return p_; }

    /// log2 of the magnitude; -inf for zero. Exact-path aware.
    double log2() const;

    Norm plus(const Norm& other) const;
    static bool less(const Norm& a, const Norm& b);
    bool leq_exact_one() const;  // |x| <= 1 decided exactly where possible

  private:
    double approx_ = 0;
    bool zero_ = false;
    std::optional<mpq_class> exact_;
    std::optional<Valuation> valuation_;
    std::uint32_t p_ = 0;
};

/// A value in one of the supported fields, tagged with its descriptor.
/// Values are immutable after construction.
class Value {
  public:
    Value() : desc_(FieldDesc::real()), pay_(0.0) {}

    static Value zero(const FieldDesc& d);
    static Value one(const FieldDesc& d);
    static Value from_int(const FieldDesc& d, long n);
    /// Embeds a rational into the field (digit expansion for p-adic kinds).
    static Value from_rational(const FieldDesc& d, const mpq_class& q);
    static Value real(double x);
    static Value complex_value(std::complex<double> z);
    static Value rational(const mpq_class& q, RationalNorm rn = RationalNorm::Archimedean,
                          std::uint32_t p = 0);
    static Value padic(const FieldDesc& d, PadicPayload payload);
    /// pi^n where pi = p^(1/k); throws unsupported_field for archimedean kinds.
    static Value uniformizer_power(const FieldDesc& d, std::int64_t n);

    const FieldDesc& descriptor() const { return desc_; }
    /// True only for the exact zero element.
    bool is_zero() const;
    /// P-adic kinds: an empty digit window with a finite error position,
    /// i.e. a value known only to be O(pi^err). Norms of such values cannot
    /// be certified and throw precision_exhausted.
    bool is_inexact_zero() const;

    Value add(const Value& y) const;
    Value sub(const Value& y) const;
    Value mul(const Value& y) const;
    Value div(const Value& y) const;
    Value negate() const;
    Value pow(std::uint64_t e) const;

    Norm norm() const;
    /// Valuation for nonarchimedean kinds (throws unsupported_field otherwise).
    Valuation valuation() const;

    /// Representational equality (same descriptor, same canonical payload).
    bool same_value(const Value& y) const;
    /// Deterministic total order on payloads, used for sorting and dedup.
    static bool order_less(const Value& a, const Value& b);

    double as_double() const;                  // Real only
    std::complex<double> as_complex() const;   // Real or Complex
    const mpq_class& as_rational() const;      // ExactRational only
    const PadicPayload& payload() const;       // p-adic kinds only
    /// Exact rational equal to the stored finite expansion, when one exists.
    std::optional<mpq_class> to_rational() const;

    /// Same element re-expressed at a different digit precision (p-adic
    /// kinds); used by interpolation kernels that need guard digits.
    Value with_precision(std::uint32_t precision) const;

    std::string str() const;

  private:
    FieldDesc desc_;
    std::variant<double, std::complex<double>, PadicPayload, mpq_class> pay_;
};

inline Value operator+(const Value& a, const Value& b) { return a.add(b); }
inline Value operator-(const Value& a, const Value& b) { return a.sub(b); }
inline Value operator*(const Value& a, const Value& b) { return a.mul(b); }
inline Value operator/(const Value& a, const Value& b) { return a.div(b); }
inline Value operator-(const Value& a) { return a.negate(); }

/// Random element with |c| <= 1 (uniform interval / disk / digit string /
/// dyadic rational depending on the kind).
Value random_unit_value(const FieldDesc& d, Rng& rng);
/// Same, conditioned on being nonzero.
Value random_unit_nonzero(const FieldDesc& d, Rng& rng);

}  // namespace germinate
