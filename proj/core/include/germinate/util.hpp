#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace germinate {

/// Deterministic xoshiro256** generator. Distribution helpers are pinned to
/// explicit bit manipulations so that streams are reproducible across
/// platforms and standard library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [-1, 1].
    double uniform_signed();
    /// Uniform integer in [0, bound), rejection sampled.
    std::uint64_t below(std::uint64_t bound);

  private:
    std::uint64_t s_[4];
};

/// splitmix64 step, used for seeding independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Canonicalized rational from a numerator/denominator pair.
mpq_class make_rational(const mpz_class& num, const mpz_class& den);

/// q^e for signed integer exponents (q != 0 when e < 0).
mpq_class rational_pow(const mpq_class& q, long e);

/// Exact p-adic valuation of a nonzero rational.
long rational_valuation(const mpq_class& q, unsigned long p);

/// log2 |q| for q != 0, robust to rationals far outside double range.
double rational_log2(const mpq_class& q);

/// Exact m-th root when |q| is a perfect m-th power of a rational.
std::optional<mpq_class> rational_root_exact(const mpq_class& q, unsigned long m);

/// Renders "num/den" ("num" when den == 1).
std::string rational_str(const mpq_class& q);
/// Parses "num", "num/den"; throws input_error on malformed text.
mpq_class parse_rational(const std::string& text);

/// Deterministic Miller-Rabin style primality via GMP.
bool is_prime(std::uint64_t n);

}  // namespace germinate
