#include "germinate/poly.hpp"

#include <algorithm>
#include <numeric>

namespace germinate {

void SamplePointSet::validate() const {
    if (points.empty()) throw input_error("sample point set is empty");
    for (const auto& pt : points) {
        if (pt.size() != arity) throw arity_mismatch("sample point arity");
        for (const auto& v : pt) {
            if (!(v.descriptor() == desc)) throw descriptor_mismatch("sample point coordinate");
        }
    }
}

MultiPoly MultiPoly::constant(const FieldDesc& d, std::uint32_t arity, const Value& c) {
    MultiPoly f(d, arity);
    f.add_term(Exponents(arity, 0), c);
    return f;
}

MultiPoly MultiPoly::monomial(const FieldDesc& d, Exponents e, const Value& c) {
    MultiPoly f(d, static_cast<std::uint32_t>(e.size()));
    f.add_term(e, c);
    return f;
}

MultiPoly MultiPoly::variable(const FieldDesc& d, std::uint32_t arity, std::uint32_t i) {
    if (i >= arity) throw input_error("variable index out of range");
    Exponents e(arity, 0);
    e[i] = 1;
    return monomial(d, std::move(e), Value::one(d));
}

std::int64_t MultiPoly::degree() const {
    std::int64_t deg = -1;
    for (const auto& [e, c] : terms_) {
        const std::int64_t total = std::accumulate(e.begin(), e.end(), std::int64_t{0});
        deg = std::max(deg, total);
    }
    return deg;
}

Value MultiPoly::coeff(const Exponents& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Value::zero(desc_) : it->second;
}

void MultiPoly::add_term(const Exponents& e, const Value& c) {
    if (e.size() != arity_) throw arity_mismatch("exponent vector length");
    if (!(c.descriptor() == desc_)) throw descriptor_mismatch("coefficient");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        Value sum = it->second.add(c);
        if (sum.is_zero()) {
            terms_.erase(it);
        } else {
            it->second = std::move(sum);
        }
    }
}

MultiPoly MultiPoly::add(const MultiPoly& g) const {
    if (arity_ != g.arity_) throw arity_mismatch("polynomial addition");
    MultiPoly out = *this;
    for (const auto& [e, c] : g.terms_) out.add_term(e, c);
    return out;
}

MultiPoly MultiPoly::sub(const MultiPoly& g) const {
    if (arity_ != g.arity_) throw arity_mismatch("polynomial subtraction");
    MultiPoly out = *this;
    for (const auto& [e, c] : g.terms_) out.add_term(e, c.negate());
    return out;
}

MultiPoly MultiPoly::mul(const MultiPoly& g) const {
    if (arity_ != g.arity_) throw arity_mismatch("polynomial multiplication");
    MultiPoly out(desc_, arity_);
    Exponents e(arity_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : g.terms_) {
            for (std::uint32_t i = 0; i < arity_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca.mul(cb));
        }
    }
    return out;
}

MultiPoly MultiPoly::scale(const Value& c) const {
    MultiPoly out(desc_, arity_);
    for (const auto& [e, coeff] : terms_) out.add_term(e, coeff.mul(c));
    return out;
}

MultiPoly MultiPoly::pow(std::uint32_t e) const {
    MultiPoly result = constant(desc_, arity_, Value::one(desc_));
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1) result = result.mul(base);
        e >>= 1;
        if (e) base = base.mul(base);
    }
    return result;
}

Value MultiPoly::evaluate(std::span<const Value> point) const {
    if (point.size() != arity_) throw arity_mismatch("evaluation point");
    // power cache per variable up to the max exponent present
    std::vector<std::uint32_t> max_e(arity_, 0);
    for (const auto& [e, c] : terms_) {
        for (std::uint32_t i = 0; i < arity_; ++i) max_e[i] = std::max(max_e[i], e[i]);
    }
    std::vector<std::vector<Value>> pows(arity_);
    for (std::uint32_t i = 0; i < arity_; ++i) {
        pows[i].reserve(max_e[i] + 1);
        pows[i].push_back(Value::one(desc_));
        for (std::uint32_t j = 1; j <= max_e[i]; ++j) pows[i].push_back(pows[i].back().mul(point[i]));
    }
    Value sum = Value::zero(desc_);
    for (const auto& [e, c] : terms_) {
        Value t = c;
        for (std::uint32_t i = 0; i < arity_; ++i) {
            if (e[i]) t = t.mul(pows[i][e[i]]);
        }
        sum = sum.add(t);
    }
    return sum;
}

Norm MultiPoly::coeff_norm() const {
    Norm sum;  // zero
    for (const auto& [e, c] : terms_) sum = sum.plus(c.norm());
    return sum;
}

Norm MultiPoly::sup_norm_on_sample(const SamplePointSet& X) const {
    X.validate();
    if (X.arity != arity_) throw arity_mismatch("sup norm sample");
    Norm best;  // zero
    for (const auto& pt : X.points) {
        const Norm n = evaluate(pt).norm();
        if (Norm::less(best, n)) best = n;
    }
    return best;
}

MultiPoly MultiPoly::restrict_slice(std::span<const Value> u, std::span<const Value> v) const {
    if (u.size() != arity_ || v.size() != arity_) throw arity_mismatch("slice point/direction");
    MultiPoly out(desc_, 1);
    // per-variable expansions of (u_i + z v_i)^e via repeated multiplication
    for (const auto& [e, c] : terms_) {
        std::vector<Value> acc{c};  // univariate coefficients, degree ascending
        for (std::uint32_t i = 0; i < arity_; ++i) {
            for (std::uint32_t rep = 0; rep < e[i]; ++rep) {
                std::vector<Value> next(acc.size() + 1, Value::zero(desc_));
                for (std::size_t j = 0; j < acc.size(); ++j) {
                    next[j] = next[j].add(acc[j].mul(u[i]));
                    next[j + 1] = next[j + 1].add(acc[j].mul(v[i]));
                }
                acc = std::move(next);
            }
        }
        for (std::size_t j = 0; j < acc.size(); ++j)
            out.add_term(Exponents{static_cast<std::uint32_t>(j)}, acc[j]);
    }
    return out;
}

MultiPoly MultiPoly::dehomogenize() const {
    if (arity_ < 1) throw input_error("dehomogenize needs at least one variable");
    MultiPoly out(desc_, arity_ - 1);
    for (const auto& [e, c] : terms_) {
        Exponents f(e.begin() + 1, e.end());
        out.add_term(f, c);
    }
    return out;
}

MultiPoly MultiPoly::rehomogenize(std::uint32_t n) const {
    MultiPoly out(desc_, arity_ + 1);
    for (const auto& [e, c] : terms_) {
        const std::uint64_t total = std::accumulate(e.begin(), e.end(), std::uint64_t{0});
        if (total > n)
            throw degree_overflow("term of degree " + std::to_string(total) +
                                  " cannot be homogenized to degree " + std::to_string(n));
        Exponents f;
        f.reserve(arity_ + 1);
        f.push_back(static_cast<std::uint32_t>(n - total));
        f.insert(f.end(), e.begin(), e.end());
        out.add_term(f, c);
    }
    return out;
}

bool MultiPoly::operator==(const MultiPoly& g) const {
    if (arity_ != g.arity_ || !(desc_ == g.desc_) || terms_.size() != g.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = g.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (it->first != jt->first || !it->second.same_value(jt->second)) return false;
    }
    return true;
}

std::vector<HomogeneousComponent> homogeneous_parts(const MultiPoly& f, std::uint32_t N) {
    std::vector<HomogeneousComponent> parts;
    parts.reserve(N + 1);
    for (std::uint32_t n = 0; n <= N; ++n)
        parts.push_back({n, MultiPoly(f.descriptor(), f.arity())});
    for (const auto& [e, c] : f.terms()) {
        const std::uint64_t total = std::accumulate(e.begin(), e.end(), std::uint64_t{0});
        if (total <= N) parts[total].poly.add_term(e, c);
    }
    return parts;
}

bool window_equal(const MultiPoly& f, const MultiPoly& g) {
    if (f.arity() != g.arity()) return false;
    auto essential = [](const MultiPoly& h) {
        std::map<Exponents, Value> out;
        for (const auto& [e, c] : h.terms()) {
            if (!c.is_inexact_zero()) out.emplace(e, c);
        }
        return out;
    };
    const auto a = essential(f), b = essential(g);
    if (a.size() != b.size()) return false;
    auto it = a.begin();
    auto jt = b.begin();
    for (; it != a.end(); ++it, ++jt) {
        if (it->first != jt->first || !it->second.same_value(jt->second)) return false;
    }
    return true;
}

}  // namespace germinate
