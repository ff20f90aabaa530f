#include "germinate/util.hpp"

#include <cmath>
#include <stdexcept>

#include "germinate/errors.hpp"

namespace germinate {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
    for (auto& s : s_) s = splitmix64(sm);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_signed() {
    // 54-bit signed dyadic in [-1, 1]
    const std::uint64_t bits = next_u64();
    const double mag = static_cast<double>((bits >> 11)) * 0x1.0p-53;
    return (bits & 1) ? -mag : mag;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw input_error("Rng::below: zero bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

mpq_class make_rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw input_error("rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

mpq_class rational_pow(const mpq_class& q, long e) {
    if (e == 0) return mpq_class(1);
    mpq_class base = q;
    if (e < 0) {
        if (q == 0) throw division_by_zero();
        base = mpq_class(q.get_den(), q.get_num());
        base.canonicalize();
        e = -e;
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    return make_rational(num, den);
}

long rational_valuation(const mpq_class& q, unsigned long p) {
    if (q == 0) throw input_error("valuation of zero");
    mpz_class pz(static_cast<unsigned long>(p)), tmp;
    const long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), q.get_num().get_mpz_t(), pz.get_mpz_t()));
    const long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), q.get_den().get_mpz_t(), pz.get_mpz_t()));
    return vn - vd;
}

static double log2_mpz_abs(const mpz_class& z) {
    signed long exp = 0;
    const double d = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(std::fabs(d)) + static_cast<double>(exp);
}

double rational_log2(const mpq_class& q) {
    if (q == 0) throw input_error("log2 of zero");
    return log2_mpz_abs(mpz_class(q.get_num())) - log2_mpz_abs(mpz_class(q.get_den()));
}

std::optional<mpq_class> rational_root_exact(const mpq_class& q, unsigned long m) {
    if (m == 0) throw input_error("zeroth root");
    if (q < 0) return std::nullopt;
    if (q == 0) return mpq_class(0);
    mpz_class rn, rd;
    const bool exact_num = mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), m) != 0;
    const bool exact_den = mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), m) != 0;
    if (!exact_num || !exact_den) return std::nullopt;
    return make_rational(rn, rd);
}

std::string rational_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(const std::string& text) {
    if (text.empty()) throw input_error("empty rational literal");
    try {
        mpq_class q(text, 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw input_error("malformed rational literal: '" + text + "'");
    }
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    mpz_class z(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

}  // namespace germinate
