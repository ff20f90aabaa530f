#include "germinate/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace germinate {

namespace {

constexpr std::int64_t kNoErr = std::numeric_limits<std::int64_t>::max();

std::int64_t err_or_inf(const std::optional<std::int64_t>& e) {
    return e ? *e : kNoErr;
}

// Element of Z[pi]/(pi^k - p) scaled by pi^shift. Arithmetic on stored
// finite expansions is exact here; truncation happens only when converting
// back to a canonical digit window.
struct Tup {
    std::int64_t shift = 0;
    std::vector<mpz_class> c;  // size k

    bool all_zero() const {
        return std::all_of(c.begin(), c.end(), [](const mpz_class& z) { return z == 0; });
    }
};

Tup tup_zero(std::uint32_t k) {
    Tup t;
    t.c.assign(k, mpz_class(0));
    return t;
}

Tup from_payload(const PadicPayload& x, std::uint32_t k, std::uint32_t p) {
    Tup t = tup_zero(k);
    t.shift = x.v;
    mpz_class pz(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < x.digits.size(); ++i) {
        if (x.digits[i] == 0) continue;
        const std::size_t j = i % k;
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(i / k));
        t.c[j] += pw * x.digits[i];
    }
    return t;
}

// Re-expresses t with the smaller shift `target` (target <= t.shift).
void lower_shift(Tup& t, std::int64_t target, std::uint32_t k, std::uint32_t p) {
    const std::int64_t delta = t.shift - target;
    if (delta == 0) return;
    std::vector<mpz_class> out(k, mpz_class(0));
    mpz_class pz(static_cast<unsigned long>(p));
    for (std::uint32_t j = 0; j < k; ++j) {
        if (t.c[j] == 0) continue;
        const std::int64_t pos = j + delta;
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(pos / k));
        out[static_cast<std::size_t>(pos % k)] += t.c[j] * pw;
    }
    t.c = std::move(out);
    t.shift = target;
}

Tup tup_add(Tup a, Tup b, std::uint32_t k, std::uint32_t p, bool subtract) {
    const std::int64_t sh = std::min(a.shift, b.shift);
    lower_shift(a, sh, k, p);
    lower_shift(b, sh, k, p);
    for (std::uint32_t j = 0; j < k; ++j) {
        if (subtract) {
            a.c[j] -= b.c[j];
        } else {
            a.c[j] += b.c[j];
        }
    }
    return a;
}

Tup tup_mul(const Tup& a, const Tup& b, std::uint32_t k, std::uint32_t p) {
    Tup r = tup_zero(k);
    r.shift = a.shift + b.shift;
    std::vector<mpz_class> conv(2 * k, mpz_class(0));
    for (std::uint32_t i = 0; i < k; ++i) {
        if (a.c[i] == 0) continue;
        for (std::uint32_t j = 0; j < k; ++j) {
            if (b.c[j] == 0) continue;
            conv[i + j] += a.c[i] * b.c[j];
        }
    }
    for (std::uint32_t j = 0; j < k; ++j) r.c[j] = conv[j];
    for (std::uint32_t j = k; j < 2 * k; ++j) {
        if (conv[j] != 0) r.c[j - k] += conv[j] * p;  // pi^k = p
    }
    return r;
}

// Extracts the digit at pi^0 of the (shift-ignored) tuple and divides by pi.
std::uint32_t extract_digit(Tup& t, std::uint32_t k, std::uint32_t p) {
    const std::uint32_t d =
        static_cast<std::uint32_t>(mpz_fdiv_ui(t.c[0].get_mpz_t(), static_cast<unsigned long>(p)));
    t.c[0] -= d;
    mpz_class head;
    mpz_divexact_ui(head.get_mpz_t(), t.c[0].get_mpz_t(), static_cast<unsigned long>(p));
    for (std::uint32_t j = 0; j + 1 < k; ++j) t.c[j] = t.c[j + 1];
    t.c[k - 1] = head;
    return d;
}

std::int64_t leading_scan_cap(const Tup& t, std::uint32_t k, std::uint32_t p) {
    std::size_t bits = 1;
    for (const auto& z : t.c) {
        if (z != 0) bits = std::max(bits, mpz_sizeinbase(z.get_mpz_t(), 2));
    }
    const double per_digit = std::log2(static_cast<double>(p));
    return static_cast<std::int64_t>(k) * (static_cast<std::int64_t>(bits / per_digit) + 2) + k;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldDesc

FieldDesc FieldDesc::real() { return FieldDesc{FieldKind::Real, 0, 1, 64, RationalNorm::Archimedean}; }

FieldDesc FieldDesc::complex_plane() {
    return FieldDesc{FieldKind::Complex, 0, 1, 64, RationalNorm::Archimedean};
}

static void check_prime(std::uint32_t p) {
    if (!is_prime(p)) throw input_error("p = " + std::to_string(p) + " is not prime");
}

FieldDesc FieldDesc::padic(std::uint32_t p, std::uint32_t precision) {
    check_prime(p);
    if (precision < 1) throw input_error("precision must be >= 1");
    return FieldDesc{FieldKind::Padic, p, 1, precision, RationalNorm::Padic};
}

FieldDesc FieldDesc::ramified(std::uint32_t p, std::uint32_t k, std::uint32_t precision) {
    check_prime(p);
    if (k < 1) throw input_error("ramification index must be >= 1");
    if (precision < 1) throw input_error("precision must be >= 1");
    return FieldDesc{FieldKind::RamifiedPadic, p, k, precision, RationalNorm::Padic};
}

FieldDesc FieldDesc::rational() {
    return FieldDesc{FieldKind::ExactRational, 0, 1, 64, RationalNorm::Archimedean};
}

FieldDesc FieldDesc::rational_padic(std::uint32_t p) {
    check_prime(p);
    return FieldDesc{FieldKind::ExactRational, p, 1, 64, RationalNorm::Padic};
}

bool FieldDesc::nonarchimedean() const {
    return padic_like() || (kind == FieldKind::ExactRational && rnorm == RationalNorm::Padic);
}

bool FieldDesc::exact_kind() const {
    return padic_like() || kind == FieldKind::ExactRational;
}

std::string FieldDesc::str() const {
    switch (kind) {
        case FieldKind::Real: return "real";
        case FieldKind::Complex: return "complex";
        case FieldKind::Padic: return "padic(p=" + std::to_string(p) + ",prec=" + std::to_string(precision) + ")";
        case FieldKind::RamifiedPadic:
            return "ramified(p=" + std::to_string(p) + ",k=" + std::to_string(k) +
                   ",prec=" + std::to_string(precision) + ")";
        case FieldKind::ExactRational:
            return rnorm == RationalNorm::Archimedean ? "rational"
                                                      : "rational(|.|_" + std::to_string(p) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Valuation

double Valuation::approx() const {
    if (infinite) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num) / static_cast<double>(k);
}

mpq_class Valuation::rational() const {
    if (infinite) throw internal_error("rational() on infinite valuation");
    return make_rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<unsigned long>(k)));
}

bool valuation_less(const Valuation& a, const Valuation& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    // num_a/k_a < num_b/k_b
    return static_cast<std::int64_t>(a.num) * b.k < static_cast<std::int64_t>(b.num) * a.k;
}

// ---------------------------------------------------------------------------
// Norm

Norm Norm::from_double(double a) {
    Norm n;
    n.approx_ = std::fabs(a);
    n.zero_ = (a == 0.0);
    return n;
}

Norm Norm::from_exact(const mpq_class& magnitude) {
    Norm n;
    mpq_class m = magnitude >= 0 ? magnitude : mpq_class(-magnitude);
    n.zero_ = (m == 0);
    n.approx_ = n.zero_ ? 0.0 : std::exp2(rational_log2(m));
    n.exact_ = m;
    return n;
}

Norm Norm::from_valuation(std::uint32_t p, const Valuation& v) {
    Norm n;
    n.p_ = p;
    n.valuation_ = v;
    if (v.infinite) {
        n.zero_ = true;
        n.approx_ = 0.0;
        n.exact_ = mpq_class(0);
        return n;
    }
    n.zero_ = false;
    n.approx_ = std::exp2(-v.approx() * std::log2(static_cast<double>(p)));
    if (v.num % static_cast<std::int64_t>(v.k) == 0) {
        n.exact_ = rational_pow(mpq_class(static_cast<unsigned long>(p)),
                                static_cast<long>(-v.num / static_cast<std::int64_t>(v.k)));
    }
    return n;
}

double Norm::log2() const {
    if (zero_) return -std::numeric_limits<double>::infinity();
    if (valuation_) return -valuation_->approx() * std::log2(static_cast<double>(p_));
    if (exact_) return rational_log2(*exact_);
    return std::log2(approx_);
}

Norm Norm::plus(const Norm& other) const {
    if (zero_) return other;
    if (other.zero_) return *this;
    if (exact_ && other.exact_) {
        return Norm::from_exact(mpq_class(*exact_ + *other.exact_));
    }
    return Norm::from_double(approx_ + other.approx_);
}

bool Norm::less(const Norm& a, const Norm& b) {
    if (a.zero_) return !b.zero_;
    if (b.zero_) return false;
    if (a.exact_ && b.exact_) return *a.exact_ < *b.exact_;
    if (a.valuation_ && b.valuation_ && a.p_ == b.p_) {
        return valuation_less(b.valuation_.value(), a.valuation_.value());
    }
    return a.approx_ < b.approx_;
}

bool Norm::leq_exact_one() const {
    if (zero_) return true;
    if (exact_) return *exact_ <= 1;
    if (valuation_) return valuation_->infinite || valuation_->num >= 0;
    return approx_ <= 1.0;
}

// ---------------------------------------------------------------------------
// Value construction

namespace {

void validate_payload(const PadicPayload& x, const FieldDesc& d) {
    if (x.digits.empty()) return;  // exact zero, or inexact zero O(pi^err)
    if (x.digits.front() == 0) throw internal_error("p-adic payload with zero leading digit");
    if (x.digits.back() == 0) throw internal_error("p-adic payload with trailing zero digit");
    if (x.digits.size() > d.precision) throw internal_error("p-adic payload exceeds precision");
    for (auto dig : x.digits) {
        if (dig >= d.p) throw internal_error("p-adic digit out of range");
    }
    if (x.err && *x.err < x.v + static_cast<std::int64_t>(x.digits.size()))
        throw internal_error("p-adic error position inside digit window");
}

// Canonicalizes a tuple into a digit window, truncating at the descriptor
// precision and at the propagated error position. When cancellation consumes
// every reliable digit the result is an inexact zero O(pi^err): an empty
// window whose error position records what is still known.
PadicPayload canonicalize(Tup t, const FieldDesc& d, std::int64_t propagated_err) {
    PadicPayload out;
    if (t.all_zero()) {
        if (propagated_err != kNoErr) out.err = propagated_err;
        return out;
    }
    // scan for the leading nonzero digit
    const std::int64_t cap = t.shift + leading_scan_cap(t, d.k, d.p);
    std::int64_t pos = t.shift;
    std::uint32_t lead_digit = 0;
    while (true) {
        if (pos >= propagated_err) {
            out.err = propagated_err;  // inexact zero
            return out;
        }
        lead_digit = extract_digit(t, d.k, d.p);
        if (lead_digit != 0) break;
        ++pos;
        if (pos > cap) throw internal_error("leading-digit scan exceeded bound");
    }
    out.v = pos;
    out.digits.push_back(lead_digit);
    const std::int64_t max_end =
        std::min(propagated_err, out.v + static_cast<std::int64_t>(d.precision));
    std::int64_t next = pos + 1;
    bool remainder_nonzero = true;
    while (next < max_end) {
        if (t.all_zero()) {
            remainder_nonzero = false;
            break;
        }
        out.digits.push_back(extract_digit(t, d.k, d.p));
        ++next;
    }
    if (remainder_nonzero && t.all_zero()) remainder_nonzero = false;
    std::int64_t err = propagated_err;
    if (remainder_nonzero) err = std::min(err, next);
    while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
    if (err != kNoErr) out.err = err;
    return out;
}

PadicPayload payload_from_rational(const FieldDesc& d, const mpq_class& q) {
    PadicPayload out;
    if (q == 0) return out;
    const long vp = rational_valuation(q, d.p);
    mpz_class pz(static_cast<unsigned long>(d.p));
    mpz_class num = q.get_num(), den = q.get_den(), tmp;
    mpz_remove(tmp.get_mpz_t(), num.get_mpz_t(), pz.get_mpz_t());
    num = tmp;
    mpz_remove(tmp.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    den = tmp;
    // digit expansion of the unit num/den: p-digits sit at pi-positions k*j
    const std::int64_t lead = static_cast<std::int64_t>(vp) * d.k;
    out.v = lead;
    mpz_class den_inv;
    if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw internal_error("unit denominator not invertible mod p");
    std::int64_t j = 0;
    bool exact = false;
    while (static_cast<std::int64_t>(d.k) * j < static_cast<std::int64_t>(d.precision)) {
        if (num == 0) {
            exact = true;
            break;
        }
        mpz_class r = num % pz;
        if (r < 0) r += pz;
        mpz_class dig = (r * den_inv) % pz;
        const std::uint32_t digit = static_cast<std::uint32_t>(dig.get_ui());
        if (digit != 0) {
            const std::size_t idx = static_cast<std::size_t>(d.k) * j;
            if (out.digits.size() <= idx) out.digits.resize(idx + 1, 0);
            out.digits[idx] = digit;
        }
        num = (num - dig * den) / pz;
        ++j;
    }
    if (!exact && num != 0) out.err = lead + static_cast<std::int64_t>(d.k) * j;
    if (out.digits.empty() || out.digits.front() == 0)
        throw internal_error("rational unit produced a zero leading digit");
    while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
    return out;
}

}  // namespace

Value Value::zero(const FieldDesc& d) {
    switch (d.kind) {
        case FieldKind::Real: return real(0.0);
        case FieldKind::Complex: return complex_value({0.0, 0.0});
        case FieldKind::ExactRational: return rational(mpq_class(0), d.rnorm, d.p);
        default: return padic(d, PadicPayload{});
    }
}

Value Value::one(const FieldDesc& d) { return from_int(d, 1); }

Value Value::from_int(const FieldDesc& d, long n) {
    return from_rational(d, mpq_class(n));
}

Value Value::from_rational(const FieldDesc& d, const mpq_class& q) {
    switch (d.kind) {
        case FieldKind::Real: return real(q.get_d());
        case FieldKind::Complex: return complex_value({q.get_d(), 0.0});
        case FieldKind::ExactRational: return rational(q, d.rnorm, d.p);
        default: return padic(d, payload_from_rational(d, q));
    }
}

Value Value::real(double x) {
    Value v;
    v.desc_ = FieldDesc::real();
    v.pay_ = x;
    return v;
}

Value Value::complex_value(std::complex<double> z) {
    Value v;
    v.desc_ = FieldDesc::complex_plane();
    v.pay_ = z;
    return v;
}

Value Value::rational(const mpq_class& q, RationalNorm rn, std::uint32_t p) {
    Value v;
    v.desc_ = rn == RationalNorm::Archimedean ? FieldDesc::rational() : FieldDesc::rational_padic(p);
    v.pay_ = q;
    return v;
}

Value Value::padic(const FieldDesc& d, PadicPayload payload) {
    if (!d.padic_like()) throw internal_error("padic payload on non-p-adic descriptor");
    validate_payload(payload, d);
    Value v;
    v.desc_ = d;
    v.pay_ = std::move(payload);
    return v;
}

Value Value::uniformizer_power(const FieldDesc& d, std::int64_t n) {
    if (!d.padic_like())
        throw unsupported_field("uniformizer_power requires a p-adic descriptor, got " + d.str());
    PadicPayload pl;
    pl.v = n;
    pl.digits = {1};
    return padic(d, std::move(pl));
}

bool Value::is_zero() const {
    switch (desc_.kind) {
        case FieldKind::Real: return std::get<double>(pay_) == 0.0;
        case FieldKind::Complex: return std::get<std::complex<double>>(pay_) == std::complex<double>(0.0, 0.0);
        case FieldKind::ExactRational: return std::get<mpq_class>(pay_) == 0;
        default: {
            const auto& pl = std::get<PadicPayload>(pay_);
            return pl.window_empty() && !pl.err;
        }
    }
}

bool Value::is_inexact_zero() const {
    if (!desc_.padic_like()) return false;
    const auto& pl = std::get<PadicPayload>(pay_);
    return pl.window_empty() && pl.err.has_value();
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

void require_same(const FieldDesc& a, const FieldDesc& b) {
    if (!(a == b)) throw descriptor_mismatch(a.str() + " vs " + b.str());
}

}  // namespace

Value Value::add(const Value& y) const {
    require_same(desc_, y.desc_);
    switch (desc_.kind) {
        case FieldKind::Real: return real(std::get<double>(pay_) + std::get<double>(y.pay_));
        case FieldKind::Complex:
            return complex_value(std::get<std::complex<double>>(pay_) + std::get<std::complex<double>>(y.pay_));
        case FieldKind::ExactRational:
            return rational(mpq_class(std::get<mpq_class>(pay_) + std::get<mpq_class>(y.pay_)), desc_.rnorm,
                            desc_.p);
        default: break;
    }
    const auto& a = std::get<PadicPayload>(pay_);
    const auto& b = std::get<PadicPayload>(y.pay_);
    if (a.window_empty() && !a.err) return y;
    if (b.window_empty() && !b.err) return *this;
    Tup t = tup_add(from_payload(a, desc_.k, desc_.p), from_payload(b, desc_.k, desc_.p), desc_.k,
                    desc_.p, false);
    const std::int64_t err = std::min(err_or_inf(a.err), err_or_inf(b.err));
    return padic(desc_, canonicalize(std::move(t), desc_, err));
}

Value Value::sub(const Value& y) const {
    require_same(desc_, y.desc_);
    switch (desc_.kind) {
        case FieldKind::Real: return real(std::get<double>(pay_) - std::get<double>(y.pay_));
        case FieldKind::Complex:
            return complex_value(std::get<std::complex<double>>(pay_) - std::get<std::complex<double>>(y.pay_));
        case FieldKind::ExactRational:
            return rational(mpq_class(std::get<mpq_class>(pay_) - std::get<mpq_class>(y.pay_)), desc_.rnorm,
                            desc_.p);
        default: break;
    }
    const auto& a = std::get<PadicPayload>(pay_);
    const auto& b = std::get<PadicPayload>(y.pay_);
    if (b.window_empty() && !b.err) return *this;
    Tup t = tup_add(from_payload(a, desc_.k, desc_.p), from_payload(b, desc_.k, desc_.p), desc_.k,
                    desc_.p, true);
    const std::int64_t err = std::min(err_or_inf(a.err), err_or_inf(b.err));
    return padic(desc_, canonicalize(std::move(t), desc_, err));
}

Value Value::negate() const {
    switch (desc_.kind) {
        case FieldKind::Real: return real(-std::get<double>(pay_));
        case FieldKind::Complex: return complex_value(-std::get<std::complex<double>>(pay_));
        case FieldKind::ExactRational:
            return rational(mpq_class(-std::get<mpq_class>(pay_)), desc_.rnorm, desc_.p);
        default: return Value::zero(desc_).sub(*this);
    }
}

Value Value::mul(const Value& y) const {
    require_same(desc_, y.desc_);
    switch (desc_.kind) {
        case FieldKind::Real: return real(std::get<double>(pay_) * std::get<double>(y.pay_));
        case FieldKind::Complex:
            return complex_value(std::get<std::complex<double>>(pay_) * std::get<std::complex<double>>(y.pay_));
        case FieldKind::ExactRational:
            return rational(mpq_class(std::get<mpq_class>(pay_) * std::get<mpq_class>(y.pay_)), desc_.rnorm,
                            desc_.p);
        default: break;
    }
    const auto& a = std::get<PadicPayload>(pay_);
    const auto& b = std::get<PadicPayload>(y.pay_);
    if ((a.window_empty() && !a.err) || (b.window_empty() && !b.err)) return Value::zero(desc_);
    if (a.window_empty() || b.window_empty()) {
        // product with an inexact zero: O(pi^(err + v)) with v bounded below
        // by the other operand's leading position (or its own error bound)
        const std::int64_t va = a.window_empty() ? *a.err : a.v;
        const std::int64_t vb = b.window_empty() ? *b.err : b.v;
        std::int64_t err = kNoErr;
        if (a.window_empty()) err = std::min(err, *a.err + vb);
        if (b.window_empty()) err = std::min(err, *b.err + va);
        PadicPayload out;
        out.err = err;
        return padic(desc_, std::move(out));
    }
    Tup t = tup_mul(from_payload(a, desc_.k, desc_.p), from_payload(b, desc_.k, desc_.p), desc_.k, desc_.p);
    // err(xy) = min(err_x + v(y), err_y + v(x))
    std::int64_t err = kNoErr;
    if (a.err) err = std::min(err, *a.err + b.v);
    if (b.err) err = std::min(err, *b.err + a.v);
    return padic(desc_, canonicalize(std::move(t), desc_, err));
}

Value Value::div(const Value& y) const {
    require_same(desc_, y.desc_);
    if (y.is_zero()) throw division_by_zero();
    switch (desc_.kind) {
        case FieldKind::Real: return real(std::get<double>(pay_) / std::get<double>(y.pay_));
        case FieldKind::Complex:
            return complex_value(std::get<std::complex<double>>(pay_) / std::get<std::complex<double>>(y.pay_));
        case FieldKind::ExactRational:
            return rational(mpq_class(std::get<mpq_class>(pay_) / std::get<mpq_class>(y.pay_)), desc_.rnorm,
                            desc_.p);
        default: break;
    }
    const auto& a = std::get<PadicPayload>(pay_);
    const auto& b = std::get<PadicPayload>(y.pay_);
    if (b.window_empty())
        throw precision_exhausted("division by a value indistinguishable from zero");
    if (a.window_empty()) {
        if (!a.err) return *this;  // exact zero
        PadicPayload out;
        out.err = *a.err - b.v;
        return padic(desc_, std::move(out));
    }
    const std::uint32_t k = desc_.k, p = desc_.p;
    // digit-by-digit long division of the unit parts
    Tup r = from_payload(a, k, p);
    r.shift = 0;  // unit part of a (the true lead is a.v)
    Tup u = from_payload(b, k, p);
    u.shift = 0;
    mpz_class d0y(static_cast<unsigned long>(b.digits.front())), pz(static_cast<unsigned long>(p)), inv;
    if (mpz_invert(inv.get_mpz_t(), d0y.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw internal_error("leading digit not invertible");
    const std::uint32_t d0y_inv = static_cast<std::uint32_t>(inv.get_ui());

    const std::int64_t rel_a = a.err ? *a.err - a.v : kNoErr;
    const std::int64_t rel_b = b.err ? *b.err - b.v : kNoErr;
    const std::int64_t rel_limit =
        std::min({rel_a, rel_b, static_cast<std::int64_t>(desc_.precision)});

    // Both operands are units here, so the quotient's first digit is nonzero.
    PadicPayload out;
    out.v = a.v - b.v;
    std::int64_t i = 0;
    bool remainder_nonzero = true;
    while (i < rel_limit) {
        if (r.all_zero()) {
            remainder_nonzero = false;
            break;
        }
        const std::uint32_t dr =
            static_cast<std::uint32_t>(mpz_fdiv_ui(r.c[0].get_mpz_t(), static_cast<unsigned long>(p)));
        const std::uint32_t qd = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(dr) * d0y_inv) % p);
        if (qd != 0) {
            const std::size_t idx = static_cast<std::size_t>(i);
            if (out.digits.size() <= idx) out.digits.resize(idx + 1, 0);
            out.digits[idx] = qd;
            for (std::uint32_t j = 0; j < k; ++j) r.c[j] -= u.c[j] * qd;
        }
        (void)extract_digit(r, k, p);  // now divisible; shifts r by pi^-1
        ++i;
    }
    if (out.digits.empty() || out.digits.front() == 0)
        throw internal_error("unit quotient lost its leading digit");
    std::int64_t err = kNoErr;
    if (remainder_nonzero) err = out.v + i;
    if (rel_a != kNoErr) err = std::min(err, out.v + rel_a);
    if (rel_b != kNoErr) err = std::min(err, out.v + rel_b);
    while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
    if (err != kNoErr) out.err = err;
    return padic(desc_, std::move(out));
}

Value Value::pow(std::uint64_t e) const {
    Value result = Value::one(desc_);
    Value base = *this;
    while (e > 0) {
        if (e & 1) result = result.mul(base);
        base = (e >>= 1) ? base.mul(base) : base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Norms, valuations, accessors

Norm Value::norm() const {
    switch (desc_.kind) {
        case FieldKind::Real: return Norm::from_double(std::get<double>(pay_));
        case FieldKind::Complex: return Norm::from_double(std::abs(std::get<std::complex<double>>(pay_)));
        case FieldKind::ExactRational: {
            const auto& q = std::get<mpq_class>(pay_);
            if (desc_.rnorm == RationalNorm::Archimedean) return Norm::from_exact(abs(q));
            if (q == 0) return Norm::from_valuation(desc_.p, Valuation::infinity());
            return Norm::from_valuation(desc_.p, Valuation{rational_valuation(q, desc_.p), 1, false});
        }
        default: break;
    }
    const auto& pl = std::get<PadicPayload>(pay_);
    if (pl.window_empty()) {
        if (pl.err)
            throw precision_exhausted("norm of a value known only to be O(pi^" +
                                      std::to_string(*pl.err) + ")");
        return Norm::from_valuation(desc_.p, Valuation::infinity());
    }
    return Norm::from_valuation(desc_.p, Valuation{pl.v, desc_.k, false});
}

Valuation Value::valuation() const {
    if (!desc_.nonarchimedean())
        throw unsupported_field("valuation on archimedean field " + desc_.str());
    if (desc_.kind == FieldKind::ExactRational) {
        const auto& q = std::get<mpq_class>(pay_);
        if (q == 0) return Valuation::infinity();
        return Valuation{rational_valuation(q, desc_.p), 1, false};
    }
    const auto& pl = std::get<PadicPayload>(pay_);
    if (pl.window_empty()) {
        if (pl.err)
            throw precision_exhausted("valuation of a value known only to be O(pi^" +
                                      std::to_string(*pl.err) + ")");
        return Valuation::infinity();
    }
    return Valuation{pl.v, desc_.k, false};
}

bool Value::same_value(const Value& y) const {
    if (!(desc_ == y.desc_)) return false;
    switch (desc_.kind) {
        case FieldKind::Real: return std::get<double>(pay_) == std::get<double>(y.pay_);
        case FieldKind::Complex:
            return std::get<std::complex<double>>(pay_) == std::get<std::complex<double>>(y.pay_);
        case FieldKind::ExactRational: return std::get<mpq_class>(pay_) == std::get<mpq_class>(y.pay_);
        default: {
            const auto& a = std::get<PadicPayload>(pay_);
            const auto& b = std::get<PadicPayload>(y.pay_);
            // canonical windows only; the error position is metadata
            if (a.window_empty() || b.window_empty()) return a.window_empty() == b.window_empty();
            return a.v == b.v && a.digits == b.digits;
        }
    }
    return false;
}

bool Value::order_less(const Value& a, const Value& b) {
    if (a.desc_.kind != b.desc_.kind) return a.desc_.kind < b.desc_.kind;
    switch (a.desc_.kind) {
        case FieldKind::Real: return std::get<double>(a.pay_) < std::get<double>(b.pay_);
        case FieldKind::Complex: {
            const auto& x = std::get<std::complex<double>>(a.pay_);
            const auto& y = std::get<std::complex<double>>(b.pay_);
            if (x.real() != y.real()) return x.real() < y.real();
            return x.imag() < y.imag();
        }
        case FieldKind::ExactRational:
            return std::get<mpq_class>(a.pay_) < std::get<mpq_class>(b.pay_);
        default: {
            const auto& x = std::get<PadicPayload>(a.pay_);
            const auto& y = std::get<PadicPayload>(b.pay_);
            if (x.window_empty() != y.window_empty()) return x.window_empty();
            if (x.v != y.v) return x.v < y.v;
            return x.digits < y.digits;
        }
    }
}

double Value::as_double() const {
    if (desc_.kind == FieldKind::Real) return std::get<double>(pay_);
    if (desc_.kind == FieldKind::ExactRational) return std::get<mpq_class>(pay_).get_d();
    throw internal_error("as_double on " + desc_.str());
}

std::complex<double> Value::as_complex() const {
    if (desc_.kind == FieldKind::Complex) return std::get<std::complex<double>>(pay_);
    if (desc_.kind == FieldKind::Real) return {std::get<double>(pay_), 0.0};
    if (desc_.kind == FieldKind::ExactRational) return {std::get<mpq_class>(pay_).get_d(), 0.0};
    throw internal_error("as_complex on " + desc_.str());
}

const mpq_class& Value::as_rational() const {
    if (desc_.kind != FieldKind::ExactRational) throw internal_error("as_rational on " + desc_.str());
    return std::get<mpq_class>(pay_);
}

const PadicPayload& Value::payload() const {
    if (!desc_.padic_like()) throw internal_error("payload on " + desc_.str());
    return std::get<PadicPayload>(pay_);
}

std::optional<mpq_class> Value::to_rational() const {
    switch (desc_.kind) {
        case FieldKind::ExactRational: return std::get<mpq_class>(pay_);
        case FieldKind::Padic:
        case FieldKind::RamifiedPadic: {
            const auto& pl = std::get<PadicPayload>(pay_);
            if (pl.window_empty()) {
                if (pl.err) return std::nullopt;
                return mpq_class(0);
            }
            mpq_class sum(0);
            for (std::size_t i = 0; i < pl.digits.size(); ++i) {
                if (pl.digits[i] == 0) continue;
                const std::int64_t pos = pl.v + static_cast<std::int64_t>(i);
                if (pos % static_cast<std::int64_t>(desc_.k) != 0) return std::nullopt;
                sum += pl.digits[i] * rational_pow(mpq_class(static_cast<unsigned long>(desc_.p)),
                                                   static_cast<long>(pos / desc_.k));
            }
            return sum;
        }
        default: return std::nullopt;
    }
}

Value Value::with_precision(std::uint32_t precision) const {
    if (!desc_.padic_like()) return *this;
    FieldDesc nd = desc_;
    nd.precision = precision;
    PadicPayload pl = std::get<PadicPayload>(pay_);
    if (pl.digits.size() > precision) {
        pl.digits.resize(precision);
        const std::int64_t cut = pl.v + static_cast<std::int64_t>(precision);
        pl.err = pl.err ? std::min(*pl.err, cut) : cut;
        while (!pl.digits.empty() && pl.digits.back() == 0) pl.digits.pop_back();
        if (pl.digits.empty())
            throw precision_exhausted("window vanished while reducing precision");
    }
    return padic(nd, std::move(pl));
}

std::string Value::str() const {
    std::ostringstream os;
    switch (desc_.kind) {
        case FieldKind::Real: os << std::get<double>(pay_); break;
        case FieldKind::Complex: {
            const auto& z = std::get<std::complex<double>>(pay_);
            os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
            break;
        }
        case FieldKind::ExactRational: os << rational_str(std::get<mpq_class>(pay_)); break;
        default: {
            const auto& pl = std::get<PadicPayload>(pay_);
            if (pl.window_empty()) {
                os << "0";
                if (pl.err) os << "+O(pi^" << *pl.err << ")";
            } else {
                os << "pi^" << pl.v << "*(";
                for (std::size_t i = 0; i < pl.digits.size(); ++i) {
                    if (i) os << ",";
                    os << pl.digits[i];
                }
                os << ")";
                if (pl.err) os << "+O(pi^" << *pl.err << ")";
            }
            break;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Random draws

Value random_unit_value(const FieldDesc& d, Rng& rng) {
    switch (d.kind) {
        case FieldKind::Real: return Value::real(rng.uniform_signed());
        case FieldKind::Complex: {
            const double r = std::sqrt(rng.uniform());
            const double theta = 2.0 * std::numbers::pi * rng.uniform();
            return Value::complex_value({r * std::cos(theta), r * std::sin(theta)});
        }
        case FieldKind::ExactRational: {
            const std::uint64_t bits = rng.next_u64();
            mpz_class num(static_cast<unsigned long>(bits >> 11));
            if (bits & 1) num = -num;
            return Value::rational(make_rational(num, mpz_class(1) << 53), d.rnorm, d.p);
        }
        default: {
            PadicPayload pl;
            std::vector<std::uint32_t> digits(d.precision);
            for (auto& dig : digits) dig = static_cast<std::uint32_t>(rng.below(d.p));
            std::size_t lead = 0;
            while (lead < digits.size() && digits[lead] == 0) ++lead;
            if (lead == digits.size()) return Value::zero(d);
            pl.v = static_cast<std::int64_t>(lead);
            pl.digits.assign(digits.begin() + static_cast<long>(lead), digits.end());
            while (!pl.digits.empty() && pl.digits.back() == 0) pl.digits.pop_back();
            return Value::padic(d, std::move(pl));
        }
    }
}

Value random_unit_nonzero(const FieldDesc& d, Rng& rng) {
    for (int tries = 0; tries < 256; ++tries) {
        Value v = random_unit_value(d, rng);
        if (!v.is_zero()) return v;
    }
    throw internal_error("random_unit_nonzero failed to produce a nonzero value");
}

}  // namespace germinate
