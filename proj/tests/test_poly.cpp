#include <doctest.h>

#include <cmath>

#include "germinate/poly.hpp"

using namespace germinate;

namespace {

MultiPoly counterexample_base(const FieldDesc& d) {
    // (z - 3z^3)/2
    MultiPoly h(d, 1);
    h.add_term(Exponents{1}, Value::from_rational(d, mpq_class(1, 2)));
    h.add_term(Exponents{3}, Value::from_rational(d, mpq_class(-3, 2)));
    return h;
}

}  // namespace

TEST_CASE("coefficient norm examples") {
    const auto q = FieldDesc::rational();
    const MultiPoly z = MultiPoly::variable(q, 1, 0);
    CHECK(*z.coeff_norm().exact() == 1);

    const MultiPoly h = counterexample_base(q);
    CHECK(*h.coeff_norm().exact() == 2);  // |1/2| + |3/2|

    const MultiPoly h2 = counterexample_base(FieldDesc::rational_padic(2));
    CHECK(*h2.coeff_norm().exact() == 4);  // |1/2|_2 + |3/2|_2 = 2 + 2

    CHECK(MultiPoly(q, 1).coeff_norm().is_zero());
}

TEST_CASE("sup norm on samples") {
    const auto r = FieldDesc::real();
    SamplePointSet X;
    X.desc = r;
    X.arity = 1;
    X.points = {{Value::real(0.5)}};
    const MultiPoly z = MultiPoly::variable(r, 1, 0);
    CHECK(z.sup_norm_on_sample(X).value() == doctest::Approx(0.5));

    // calculus oracle: critical values of (z-3z^3)/2 are 1 at z = +-1 and
    // 1/9 at z = +-1/3, so the sup on [-1,1] is 1
    SamplePointSet grid;
    grid.desc = r;
    grid.arity = 1;
    for (int i = 0; i < 4096; ++i)
        grid.points.push_back({Value::real(-1.0 + 2.0 * i / 4095.0)});
    const MultiPoly h = counterexample_base(r);
    CHECK(h.sup_norm_on_sample(grid).value() == doctest::Approx(1.0).epsilon(1e-9));

    const MultiPoly c = MultiPoly::constant(r, 1, Value::real(-2.5));
    CHECK(c.sup_norm_on_sample(X).value() == doctest::Approx(2.5));

    SamplePointSet bad;
    bad.desc = r;
    bad.arity = 2;
    bad.points = {{Value::real(0), Value::real(0)}};
    CHECK_THROWS_AS(z.sup_norm_on_sample(bad), arity_mismatch);
}

TEST_CASE("homogeneous parts decompose and recompose") {
    const auto q = FieldDesc::rational();
    MultiPoly f(q, 2);
    f.add_term(Exponents{0, 0}, Value::from_int(q, 1));
    f.add_term(Exponents{1, 0}, Value::from_int(q, 1));
    f.add_term(Exponents{0, 1}, Value::from_int(q, 1));
    f.add_term(Exponents{2, 0}, Value::from_int(q, 1));
    const auto parts = homogeneous_parts(f, 2);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].poly.terms().size() == 1);
    CHECK(parts[1].poly.terms().size() == 2);
    CHECK(parts[2].poly.terms().size() == 1);
    MultiPoly sum(q, 2);
    for (const auto& p : parts) sum = sum.add(p.poly);
    CHECK(sum == f);

    const auto zero_parts = homogeneous_parts(MultiPoly(q, 2), 3);
    for (const auto& p : zero_parts) CHECK(p.poly.is_zero());

    // homogeneous input occupies a single slot
    MultiPoly cubic(q, 2);
    cubic.add_term(Exponents{2, 1}, Value::from_int(q, 5));
    const auto cp = homogeneous_parts(cubic, 3);
    CHECK(cp[3].poly == cubic);
    CHECK(cp[0].poly.is_zero());
    CHECK(cp[1].poly.is_zero());
    CHECK(cp[2].poly.is_zero());
}

TEST_CASE("slice restriction examples") {
    const auto q = FieldDesc::rational();
    MultiPoly xy(q, 2);
    xy.add_term(Exponents{1, 1}, Value::one(q));
    const Value u[] = {Value::one(q), Value::zero(q)};
    const Value v[] = {Value::zero(q), Value::one(q)};
    const MultiPoly s = xy.restrict_slice(u, v);  // (1)(z) = z
    CHECK(s == MultiPoly::variable(q, 1, 0));

    MultiPoly sq(q, 2);
    sq.add_term(Exponents{2, 0}, Value::one(q));
    sq.add_term(Exponents{0, 2}, Value::one(q));
    const Value o[] = {Value::zero(q), Value::zero(q)};
    const Value w[] = {Value::one(q), Value::one(q)};
    const MultiPoly s2 = sq.restrict_slice(o, w);  // 2 z^2
    CHECK(s2.coeff(Exponents{2}).as_rational() == 2);
    CHECK(s2.terms().size() == 1);

    const MultiPoly c = MultiPoly::constant(q, 2, Value::from_int(q, 9));
    CHECK(c.restrict_slice(u, v).coeff(Exponents{0}).as_rational() == 9);
}

TEST_CASE("slice restriction commutes with evaluation") {
    const auto q = FieldDesc::rational();
    Rng rng(31, 0);
    for (int trial = 0; trial < 40; ++trial) {
        MultiPoly f(q, 3);
        for (int t = 0; t < 8; ++t) {
            Exponents e{static_cast<std::uint32_t>(rng.below(3)), static_cast<std::uint32_t>(rng.below(3)),
                        static_cast<std::uint32_t>(rng.below(3))};
            f.add_term(e, Value::rational(make_rational(static_cast<long>(rng.below(19)) - 9,
                                                    1 + static_cast<long>(rng.below(7)))));
        }
        std::vector<Value> u, v;
        for (int i = 0; i < 3; ++i) {
            u.push_back(Value::rational(make_rational(static_cast<long>(rng.below(9)) - 4, 3)));
            v.push_back(Value::rational(make_rational(static_cast<long>(rng.below(9)) - 4, 2)));
        }
        const MultiPoly slice = f.restrict_slice(u, v);
        const Value z0 = Value::rational(make_rational(static_cast<long>(rng.below(11)) - 5, 4));
        std::vector<Value> shifted;
        for (int i = 0; i < 3; ++i) shifted.push_back(u[i].add(z0.mul(v[i])));
        const Value lhs = slice.evaluate(std::span<const Value>(&z0, 1));
        const Value rhs = f.evaluate(shifted);
        CHECK(lhs.same_value(rhs));
    }
}

TEST_CASE("dehomogenize and rehomogenize") {
    const auto q = FieldDesc::rational();
    MultiPoly h(q, 2);  // x^2 + 2xy + y^2
    h.add_term(Exponents{2, 0}, Value::one(q));
    h.add_term(Exponents{1, 1}, Value::from_int(q, 2));
    h.add_term(Exponents{0, 2}, Value::one(q));

    const MultiPoly g = h.dehomogenize();  // 1 + 2t + t^2
    CHECK(g.arity() == 1);
    CHECK(g.coeff(Exponents{0}).as_rational() == 1);
    CHECK(g.coeff(Exponents{1}).as_rational() == 2);
    CHECK(g.coeff(Exponents{2}).as_rational() == 1);

    CHECK(g.rehomogenize(2) == h);

    MultiPoly t3(q, 1);
    t3.add_term(Exponents{3}, Value::one(q));
    CHECK_THROWS_AS(t3.rehomogenize(2), degree_overflow);
}

TEST_CASE("unit polydisk contraction: ||h||_X <= ||h|| for X inside the ball") {
    const auto r = FieldDesc::real();
    Rng rng(77, 3);
    SamplePointSet X;
    X.desc = r;
    X.arity = 2;
    for (int i = 0; i < 64; ++i)
        X.points.push_back({Value::real(rng.uniform_signed() * 0.999),
                            Value::real(rng.uniform_signed() * 0.999)});
    for (int trial = 0; trial < 30; ++trial) {
        MultiPoly f(r, 2);
        for (int t = 0; t < 10; ++t) {
            f.add_term(
                Exponents{static_cast<std::uint32_t>(rng.below(4)), static_cast<std::uint32_t>(rng.below(4))},
                Value::real(rng.uniform_signed()));
        }
        if (f.is_zero()) continue;
        CHECK(f.sup_norm_on_sample(X).value() <= f.coeff_norm().value() * (1 + 1e-12));
    }
}

TEST_CASE("polynomial json-independent basics") {
    const auto q2 = FieldDesc::padic(2, 16);
    MultiPoly f(q2, 1);
    f.add_term(Exponents{0}, Value::from_int(q2, 3));
    f.add_term(Exponents{1}, Value::from_int(q2, 5));
    const Value pt = Value::from_int(q2, 2);
    CHECK(f.evaluate(std::span<const Value>(&pt, 1)).same_value(Value::from_int(q2, 13)));
    CHECK(f.degree() == 1);
    CHECK(MultiPoly(q2, 1).degree() == -1);
}
