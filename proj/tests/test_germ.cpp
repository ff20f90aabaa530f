#include <doctest.h>

#include <cmath>

#include "germinate/germ.hpp"

using namespace germinate;

namespace {

// binomial coefficient oracle for the 1/(1-x-y) reference series
mpz_class binom(unsigned n, unsigned k) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

SliceOracle binomial_oracle(std::uint32_t max_n) {
    // f = 1/(1 - x1 - x2): coefficient(x, n) = (x1 + x2)^n
    const auto q = FieldDesc::rational();
    return SliceOracle::geometric({Value::one(q), Value::one(q)}, max_n);
}

}  // namespace

TEST_CASE("reconstruction of the binomial series is exact") {
    const auto q = FieldDesc::rational();
    const SliceOracle o = binomial_oracle(12);
    const auto plans = default_axis_plans(q, 2, 12);
    const SeriesRecon rec = reconstruct_series(o, 12, plans);
    CHECK(rec.max_residual == 0.0);
    // h_2 = x^2 + 2xy + y^2
    const MultiPoly& h2 = rec.components[2];
    CHECK(h2.coeff(Exponents{2, 0}).as_rational() == 1);
    CHECK(h2.coeff(Exponents{1, 1}).as_rational() == 2);
    CHECK(h2.coeff(Exponents{0, 2}).as_rational() == 1);
    // closed-form binomial expansion oracle for every degree
    for (std::uint32_t n = 0; n <= 12; ++n) {
        for (std::uint32_t k = 0; k <= n; ++k) {
            CHECK(rec.components[n].coeff(Exponents{n - k, k}).as_rational() == mpq_class(binom(n, k)));
        }
        CHECK(rec.components[n].terms().size() == n + 1);
    }
}

TEST_CASE("polynomial-backed oracles reconstruct the polynomial exactly") {
    const auto q = FieldDesc::rational();
    Rng rng(17, 5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint32_t arity = 2 + static_cast<std::uint32_t>(rng.below(2));
        MultiPoly f(q, arity);
        for (int t = 0; t < 12; ++t) {
            Exponents e(arity);
            std::uint32_t total = 0;
            for (auto& ei : e) {
                ei = static_cast<std::uint32_t>(rng.below(4));
                total += ei;
            }
            if (total > 6) continue;
            f.add_term(e, Value::rational(make_rational(static_cast<long>(rng.below(21)) - 10,
                                                    1 + static_cast<long>(rng.below(5)))));
        }
        const SliceOracle o = SliceOracle::from_poly(f, 6);
        const auto plans = default_axis_plans(q, arity, 6);
        const SeriesRecon rec = reconstruct_series(o, 6, plans);
        MultiPoly sum(q, arity);
        for (const auto& h : rec.components) sum = sum.add(h);
        CHECK(sum == f);
        // and the parts agree with the direct decomposition
        const auto parts = homogeneous_parts(f, 6);
        for (std::uint32_t n = 0; n <= 6; ++n) CHECK(rec.components[n] == parts[n].poly);
    }
}

TEST_CASE("zero oracle reconstructs to zero") {
    const auto q = FieldDesc::rational();
    const SliceOracle o(q, 2, 8, [&](std::span<const Value>, std::uint32_t) { return Value::zero(q); });
    const auto plans = default_axis_plans(q, 2, 8);
    const SeriesRecon rec = reconstruct_series(o, 8, plans);
    for (const auto& h : rec.components) CHECK(h.is_zero());
    const RadiusEstimate est = estimate_radius(rec, 4, 8);
    CHECK(std::isinf(est.r_est));
}

TEST_CASE("reconstructed components are homogeneous (rehomogenization check)") {
    const auto q = FieldDesc::rational();
    const SliceOracle o = binomial_oracle(8);
    const auto plans = default_axis_plans(q, 2, 8);
    const SeriesRecon rec = reconstruct_series(o, 8, plans);
    Rng rng(88, 0);
    for (std::uint32_t n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 100; ++rep) {
            const Value lambda = Value::rational(make_rational(static_cast<long>(rng.below(9)) - 4,
                                                           1 + static_cast<long>(rng.below(4))));
            const Value x[] = {Value::rational(make_rational(static_cast<long>(rng.below(7)) - 3, 2)),
                               Value::rational(make_rational(static_cast<long>(rng.below(7)) - 3, 3))};
            const Value sx[] = {x[0].mul(lambda), x[1].mul(lambda)};
            const Value lhs = rec.components[n].evaluate(sx);
            const Value rhs = rec.components[n].evaluate(x).mul(lambda.pow(n));
            CHECK(lhs.same_value(rhs));
        }
    }
}

TEST_CASE("reconstruction consistency on the plan directions") {
    // binary64 mode: residual below 1e-8 relative
    const auto r = FieldDesc::real();
    MultiPoly f(r, 2);
    Rng rng(3, 3);
    for (int t = 0; t < 10; ++t) {
        f.add_term(
            Exponents{static_cast<std::uint32_t>(rng.below(5)), static_cast<std::uint32_t>(rng.below(5))},
            Value::real(rng.uniform_signed()));
    }
    const SliceOracle o = SliceOracle::from_poly(f, 10);
    const auto plans = default_axis_plans(r, 2, 10);
    const SeriesRecon rec = reconstruct_series(o, 10, plans);
    CHECK(rec.max_residual < 1e-8);
}

TEST_CASE("radius estimates") {
    const auto q = FieldDesc::rational();
    const SliceOracle o = binomial_oracle(12);
    const auto plans = default_axis_plans(q, 2, 12);
    const SeriesRecon rec = reconstruct_series(o, 12, plans);
    // ||h_n|| = sum of binomials = 2^n, exactly
    const RadiusEstimate est = estimate_radius(rec, 6, 12);
    REQUIRE(est.r_exact.has_value());
    CHECK(*est.r_exact == mpq_class(1, 2));
    CHECK(est.r_est == 0.5);
    for (std::size_t i = 0; i < est.per_degree_norms.size(); ++i) {
        const std::uint32_t n = est.window_lo + static_cast<std::uint32_t>(i);
        CHECK(*est.per_degree_norms[i].exact() == rational_pow(mpq_class(2), n));
    }
    CHECK_THROWS_AS(estimate_radius(rec, 10, 14), empty_window);
}

TEST_CASE("single-variable geometric series has radius 1") {
    const auto q = FieldDesc::rational();
    // f(z) = sum z^n: the d = 1 oracle returns a_n = 1
    const SliceOracle o(q, 1, 12, [&](std::span<const Value> x, std::uint32_t n) {
        return x[0].pow(n);
    });
    const SeriesRecon rec = reconstruct_series(o, 12, {});
    const RadiusEstimate est = estimate_radius(rec, 6, 12);
    REQUIRE(est.r_exact.has_value());
    CHECK(*est.r_exact == 1);
}

TEST_CASE("directional radii") {
    const auto q = FieldDesc::rational();
    const SliceOracle o = binomial_oracle(12);
    const Value diag[] = {Value::one(q), Value::one(q)};
    CHECK(directional_radius(o, diag, 6, 12) == doctest::Approx(0.5));
    const Value axis[] = {Value::one(q), Value::zero(q)};
    CHECK(directional_radius(o, axis, 6, 12) == doctest::Approx(1.0));
    const SliceOracle zero(q, 2, 12,
                           [&](std::span<const Value>, std::uint32_t) { return Value::zero(q); });
    CHECK(std::isinf(directional_radius(zero, diag, 6, 12)));
}

TEST_CASE("polydisk check on the product geometric series") {
    const auto r = FieldDesc::real();
    const SliceOracle o = SliceOracle::product_geometric(r, 2, 12);
    SamplePointSet dirs;
    dirs.desc = r;
    dirs.arity = 2;
    Rng rng(40, 4);
    for (int i = 0; i < 50; ++i)
        dirs.points.push_back(
            {Value::real(0.9 * rng.uniform_signed()), Value::real(0.9 * rng.uniform_signed())});
    const PolydiskReport rep = polydisk_check(o, dirs, 12, 6, 12);
    CHECK(rep.radius.r_est >= 0.9);
    CHECK(rep.radius.r_est <= 1.1);
    CHECK(rep.min_directional_radius >= 0.95);

    // polynomial oracle: every windowed component vanishes, radius infinite
    MultiPoly f(r, 2);
    f.add_term(Exponents{1, 1}, Value::real(2.0));
    const SliceOracle po = SliceOracle::from_poly(f, 12);
    const PolydiskReport prep = polydisk_check(po, dirs, 12, 6, 12);
    CHECK(std::isinf(prep.radius.r_est));
}

TEST_CASE("planted divergent slice is detected") {
    const auto r = FieldDesc::real();
    // a_n(x) = (2 x_1)^n: direction (~1, 0) has radius about 1/2
    const SliceOracle o(r, 2, 12, [&](std::span<const Value> x, std::uint32_t n) {
        return Value::real(2.0).mul(x[0]).pow(n);
    });
    SamplePointSet dirs;
    dirs.desc = r;
    dirs.arity = 2;
    dirs.points.push_back({Value::real(0.99), Value::real(0.0)});
    CHECK_THROWS_AS(polydisk_check(o, dirs, 12, 6, 12), slice_divergent);
}

TEST_CASE("quantitative stress over unit-norm geometric oracles") {
    const auto r = FieldDesc::real();
    Rng rng(2025, 7);
    std::vector<SliceOracle> family;
    for (int i = 0; i < 20; ++i) {
        double w1 = rng.uniform(), w2 = rng.uniform();
        const double s = w1 + w2;
        w1 /= s;
        w2 /= s;  // ||w||_1 = 1 keeps every slice radius at 1
        family.push_back(SliceOracle::geometric({Value::real(w1), Value::real(w2)}, 12));
    }
    const auto plans = default_axis_plans(r, 2, 12);
    const StressReport rep = quantitative_stress(family, plans, 12, 6, 12);
    CHECK(rep.min_r_est >= 0.9);
    CHECK(rep.r_values.size() == family.size());

    // a polynomial member reports an infinite radius
    MultiPoly f(r, 2);
    f.add_term(Exponents{2, 1}, Value::real(1.0));
    std::vector<SliceOracle> polys{SliceOracle::from_poly(f, 12)};
    CHECK(std::isinf(quantitative_stress(polys, plans, 12, 6, 12).min_r_est));

    // a gate-failing member propagates slice_divergent
    std::vector<SliceOracle> bad;
    bad.push_back(SliceOracle::geometric({Value::real(2.0), Value::real(0.0)}, 12));
    CHECK_THROWS_AS(quantitative_stress(bad, plans, 12, 6, 12), slice_divergent);
}

TEST_CASE("monotone information on an eventually-monotone fixture") {
    // ||h_n|| = 2^n / n has increasing n-th root; the windowed growth rate
    // rises toward 2, so r_est never increases as the window grows
    const auto q = FieldDesc::rational();
    SeriesRecon rec;
    rec.desc = q;
    rec.arity = 1;
    rec.N = 16;
    for (std::uint32_t n = 0; n <= 16; ++n) {
        MultiPoly h(q, 1);
        if (n >= 1) h.add_term(Exponents{n}, Value::rational(rational_pow(mpq_class(2), n) / n));
        rec.components.push_back(std::move(h));
    }
    double prev = 1e300;
    for (std::uint32_t hi = 8; hi <= 16; ++hi) {
        const RadiusEstimate est = estimate_radius(rec, 6, hi);
        CHECK(est.r_est <= prev + 1e-12);
        prev = est.r_est;
    }
}

TEST_CASE("oracle truncation is reported") {
    const auto q = FieldDesc::rational();
    const SliceOracle o = binomial_oracle(6);
    const auto plans = default_axis_plans(q, 2, 8);
    CHECK_THROWS_AS(reconstruct_series(o, 8, plans), oracle_truncated);
}
