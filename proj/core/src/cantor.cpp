#include "germinate/cantor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace germinate {

BitString BitString::parse(std::string_view text) {
    BitString b;
    b.bits.reserve(text.size());
    for (char c : text) {
        if (c == '0') {
            b.bits.push_back(0);
        } else if (c == '1') {
            b.bits.push_back(1);
        } else {
            throw input_error("bitstring may contain only '0'/'1', got '" + std::string(1, c) + "'");
        }
    }
    return b;
}

std::string BitString::str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

BitString BitString::child(std::uint8_t bit) const {
    BitString c = *this;
    c.bits.push_back(bit ? 1 : 0);
    return c;
}

std::optional<std::uint32_t> branch_agreement(const BitString& a, const BitString& b) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t x = i < a.size() ? a.bits[i] : 0;
        const std::uint8_t y = i < b.size() ? b.bits[i] : 0;
        if (x != y) return static_cast<std::uint32_t>(i);
    }
    return std::nullopt;
}

double cantor_distance(const BitString& a, const BitString& b) {
    const auto n = branch_agreement(a, b);
    if (!n) return 0.0;
    return std::exp2(-static_cast<double>(*n));
}

mpq_class cylinder_measure(const BitString& prefix) {
    return make_rational(mpz_class(1), mpz_class(1) << prefix.size());
}

// ---------------------------------------------------------------------------
// SpreadEmbedding

SpreadEmbedding SpreadEmbedding::middle_thirds(std::uint32_t depth, FieldDesc desc) {
    if (desc.kind != FieldKind::Real &&
        !(desc.kind == FieldKind::ExactRational && desc.rnorm == RationalNorm::Archimedean))
        throw input_error("middle-thirds embedding targets the reals or exact rationals");
    SpreadEmbedding e;
    e.scheme_ = Scheme::MiddleThirdsReal;
    e.desc_ = desc;
    e.depth_ = depth;
    e.label_ = "middle-thirds";
    e.coeff_.reserve(depth);
    mpq_class c(2, 3);
    for (std::uint32_t i = 1; i <= depth; ++i) {
        e.coeff_.push_back(Value::from_rational(desc, c));
        c /= 3;
    }
    return e;
}

SpreadEmbedding SpreadEmbedding::padic_binary(Value q, std::uint32_t depth) {
    const Norm nq = q.norm();
    if (!Norm::less(nq, Norm::from_exact(mpq_class(1, 2))))
        throw invalid_base("padic-binary base must satisfy |q| < 1/2, got |q| = " +
                           std::to_string(nq.value()));
    SpreadEmbedding e;
    e.scheme_ = Scheme::PadicBinary;
    e.desc_ = q.descriptor();
    e.depth_ = depth;
    e.label_ = "padic-binary(q=" + q.str() + ")";
    e.coeff_.reserve(depth);
    Value pw = q;
    for (std::uint32_t i = 1; i <= depth; ++i) {
        e.coeff_.push_back(pw);
        if (i < depth) pw = pw.mul(q);
    }
    return e;
}

SpreadEmbedding SpreadEmbedding::spk(std::uint32_t p, std::uint32_t k, std::uint32_t depth,
                                     std::uint32_t precision) {
    const FieldDesc desc = k == 1 ? FieldDesc::padic(p, precision) : FieldDesc::ramified(p, k, precision);
    SpreadEmbedding e;
    e.scheme_ = Scheme::Spk;
    e.desc_ = desc;
    e.depth_ = depth;
    e.label_ = "S(p=" + std::to_string(p) + ",k=" + std::to_string(k) + ")";
    e.coeff_.reserve(depth);
    for (std::uint32_t i = 1; i <= depth; ++i)
        e.coeff_.push_back(Value::uniformizer_power(desc, static_cast<std::int64_t>(i)));
    return e;
}

SpreadEmbedding SpreadEmbedding::custom(FieldDesc desc, std::uint32_t depth,
                                        std::function<Value(std::uint32_t)> coefficient,
                                        std::string label) {
    SpreadEmbedding e;
    e.scheme_ = Scheme::Custom;
    e.desc_ = desc;
    e.depth_ = depth;
    e.label_ = std::move(label);
    e.coeff_.reserve(depth);
    for (std::uint32_t i = 1; i <= depth; ++i) {
        Value c = coefficient(i);
        if (!(c.descriptor() == desc)) throw descriptor_mismatch("custom coefficient " + std::to_string(i));
        e.coeff_.push_back(std::move(c));
    }
    return e;
}

Value SpreadEmbedding::embed(const BitString& b) const {
    if (b.size() > depth_)
        throw depth_exceeded("bitstring of length " + std::to_string(b.size()) +
                             " exceeds truncation depth " + std::to_string(depth_));
    Value sum = Value::zero(desc_);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.bits[i]) sum = sum.add(coeff_[i]);
    }
    return sum;
}

namespace {

BitString word_from_mask(std::uint64_t mask, std::uint32_t depth) {
    BitString b;
    b.bits.resize(depth);
    for (std::uint32_t i = 0; i < depth; ++i)
        b.bits[i] = static_cast<std::uint8_t>((mask >> (depth - 1 - i)) & 1u);
    return b;
}

std::vector<Value> embed_all(const SpreadEmbedding& e, std::uint32_t depth) {
    if (depth > 20) throw input_error("exhaustive embedding beyond depth 20 is not supported");
    const std::uint64_t n = 1ULL << depth;
    std::vector<Value> vals;
    vals.reserve(n);
    for (std::uint64_t mask = 0; mask < n; ++mask) vals.push_back(e.embed(word_from_mask(mask, depth)));
    return vals;
}

}  // namespace

void SpreadEmbedding::verify_injective(std::uint32_t depth) const {
    if (depth > depth_) throw depth_exceeded("injectivity depth exceeds truncation depth");
    auto vals = embed_all(*this, depth);
    std::vector<std::size_t> idx(vals.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return Value::order_less(vals[a], vals[b]); });
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (vals[idx[i - 1]].same_value(vals[idx[i]])) {
            throw not_injective(label_ + " maps " + word_from_mask(idx[i - 1], depth).str() + " and " +
                                word_from_mask(idx[i], depth).str() + " to the same value");
        }
    }
}

std::optional<double> SpreadEmbedding::analytic_gamma() const {
    switch (scheme_) {
        case Scheme::MiddleThirdsReal: return std::log2(3.0);
        case Scheme::Spk: return std::log2(static_cast<double>(desc_.p)) / desc_.k;
        case Scheme::PadicBinary: return -coeff_[0].norm().log2();
        case Scheme::Custom: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> SpreadEmbedding::analytic_C() const {
    // Largest C valid at every depth: the binding pairs differ in exactly one
    // leading coefficient, giving C = |c_{a+1}| / d^gamma = |base|.
    switch (scheme_) {
        case Scheme::MiddleThirdsReal: return 1.0 / 3.0;  // infimum over depths
        case Scheme::Spk: return std::exp2(-std::log2(static_cast<double>(desc_.p)) / desc_.k);
        case Scheme::PadicBinary: return coeff_[0].norm().value();
        case Scheme::Custom: return std::nullopt;
    }
    return std::nullopt;
}

SpreadEstimate estimate_spread_constants(const SpreadEmbedding& e, std::uint32_t depth) {
    if (depth < 2) throw input_error("spread estimation needs depth >= 2");
    e.verify_injective(depth);
    const auto vals = embed_all(e, depth);
    const std::uint64_t n = vals.size();
    const bool real_fast = e.descriptor().kind == FieldKind::Real;
    std::vector<double> dv;
    if (real_fast) {
        dv.reserve(n);
        for (const auto& v : vals) dv.push_back(v.as_double());
    }

    // per-agreement-depth minimum of log2 d(iota(x), iota(y)), plus the
    // least-squares accumulators for the gamma fit
    std::vector<double> min_log2(depth, std::numeric_limits<double>::infinity());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> argmin(depth);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::uint64_t pairs = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = i + 1; j < n; ++j) {
            const std::uint64_t x = i ^ j;
            const std::uint32_t agree = depth - static_cast<std::uint32_t>(std::bit_width(x));
            double lg;
            if (real_fast) {
                lg = std::log2(std::fabs(dv[i] - dv[j]));
            } else {
                lg = vals[i].sub(vals[j]).norm().log2();
            }
            if (lg < min_log2[agree]) {
                min_log2[agree] = lg;
                argmin[agree] = {i, j};
            }
            const double lx = -static_cast<double>(agree);
            sx += lx;
            sy += lg;
            sxx += lx * lx;
            sxy += lx * lg;
            ++pairs;
        }
    }

    SpreadEstimate est;
    est.depth = depth;
    const auto ag = e.analytic_gamma();
    if (ag) {
        est.gamma = *ag;
        est.analytic = true;
    } else {
        const double denom = sxx - sx * sx / static_cast<double>(pairs);
        est.gamma = denom > 0 ? (sxy - sx * sy / static_cast<double>(pairs)) / denom : 1.0;
    }
    // minimal ratio d(iota(x),iota(y)) / d(x,y)^gamma at the fitted gamma
    double worst = std::numeric_limits<double>::infinity();
    std::uint32_t worst_agree = 0;
    for (std::uint32_t a = 0; a < depth; ++a) {
        if (!std::isfinite(min_log2[a])) continue;
        const double ratio = std::exp2(min_log2[a] + est.gamma * static_cast<double>(a));
        if (ratio < worst) {
            worst = ratio;
            worst_agree = a;
        }
    }
    est.worst_ratio = worst;
    est.worst_pair = {word_from_mask(argmin[worst_agree].first, depth),
                      word_from_mask(argmin[worst_agree].second, depth)};
    const auto ac = e.analytic_C();
    if (ac) {
        est.C = *ac;
        if (est.worst_ratio < est.C * (1.0 - 1e-9))
            throw internal_error("analytic spread constant violated by a scanned pair");
    } else {
        est.C = worst;
    }
    return est;
}

mpq_class outer_measure(const std::function<bool(std::span<const Value>)>& member,
                        std::span<const SpreadEmbedding> embeddings, std::uint32_t depth) {
    const std::size_t d = embeddings.size();
    if (d == 0) throw input_error("outer_measure needs at least one embedding");
    if (d * depth > 26) throw input_error("cylinder grid 2^(d*depth) too large");
    std::vector<std::vector<Value>> axis;
    axis.reserve(d);
    for (const auto& e : embeddings) axis.push_back(embed_all(e, depth));
    const std::uint64_t per_axis = 1ULL << depth;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= per_axis;

    std::uint64_t count = 0;
    std::vector<Value> point(d, Value::zero(embeddings[0].descriptor()));
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t rem = t;
        for (std::size_t ax = 0; ax < d; ++ax) {
            point[ax] = axis[ax][rem % per_axis];
            rem /= per_axis;
        }
        if (member(point)) ++count;
    }
    mpz_class denom = 1;
    denom <<= d * depth;
    return make_rational(mpz_class(static_cast<unsigned long>(count)), denom);
}

}  // namespace germinate
