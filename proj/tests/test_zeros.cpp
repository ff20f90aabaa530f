#include <doctest.h>

#include <cmath>
#include <numbers>

#include "germinate/zeros.hpp"

using namespace germinate;

namespace {

MultiPoly univariate(const FieldDesc& d, std::initializer_list<std::pair<std::uint32_t, long>> terms) {
    MultiPoly f(d, 1);
    for (const auto& [e, c] : terms) f.add_term(Exponents{e}, Value::from_int(d, c));
    return f;
}

}  // namespace

TEST_CASE("newton polygon examples") {
    const auto q5 = FieldDesc::padic(5);
    // z^2 - 5: vertices (0,1), (2,0); one segment of slope -1/2, length 2
    const MultiPoly f = univariate(q5, {{0, -5}, {2, 1}});
    const NewtonPolygon np = newton_polygon(f);
    REQUIRE(np.vertices.size() == 2);
    CHECK(np.vertices[0].i == 0);
    CHECK(np.vertices[0].v.num == 1);
    CHECK(np.vertices[1].i == 2);
    CHECK(np.vertices[1].v.num == 0);
    REQUIRE(np.segments.size() == 1);
    CHECK(np.segments[0].slope == mpq_class(-1, 2));
    CHECK(np.segments[0].length == 2);

    // z^2 - 1: single segment of slope 0 (unit roots)
    const NewtonPolygon np2 = newton_polygon(univariate(q5, {{0, -1}, {2, 1}}));
    REQUIRE(np2.segments.size() == 1);
    CHECK(np2.segments[0].slope == 0);
    CHECK(np2.segments[0].length == 2);

    // 5 z^2 - 1: vertices (0,0), (2,1); slope 1/2
    const NewtonPolygon np3 = newton_polygon(univariate(q5, {{0, -1}, {2, 5}}));
    REQUIRE(np3.segments.size() == 1);
    CHECK(np3.segments[0].slope == mpq_class(1, 2));

    CHECK_THROWS_AS(newton_polygon(MultiPoly(q5, 1)), zero_polynomial);
}

TEST_CASE("ramified expansion oracle agrees with the unramified hull") {
    // expand (z - pi)(z + pi) over Q5(sqrt 5) and read the root norms
    const auto r52 = FieldDesc::ramified(5, 2);
    const Value pi = Value::uniformizer_power(r52, 1);
    MultiPoly f(r52, 1);
    f.add_term(Exponents{2}, Value::one(r52));
    f.add_term(Exponents{0}, pi.mul(pi).negate());  // z^2 - 5
    const RootNormMultiset norms = root_norms_nonarch(f);
    REQUIRE(norms.entries.size() == 1);
    CHECK(norms.entries[0].multiplicity == 2);
    CHECK(norms.entries[0].norm.value() == doctest::Approx(std::pow(5.0, -0.5)));
    // matches the hull of z^2 - 5 read over plain Q5
    const auto q5 = FieldDesc::padic(5);
    const RootNormMultiset plain = root_norms_nonarch(univariate(q5, {{0, -5}, {2, 1}}));
    CHECK(plain.entries[0].norm.value() == doctest::Approx(norms.entries[0].norm.value()));
}

TEST_CASE("root norm multiset examples") {
    const auto q3 = FieldDesc::padic(3);
    // z (z - 1): one root of norm 0, one unit root
    const MultiPoly f = univariate(q3, {{1, -1}, {2, 1}});
    const RootNormMultiset norms = root_norms_nonarch(f);
    REQUIRE(norms.entries.size() == 2);
    CHECK(norms.entries[0].norm.is_zero());
    CHECK(norms.entries[0].multiplicity == 1);
    CHECK(norms.entries[1].norm.value() == doctest::Approx(1.0));

    // (z - 3)(z - 9) = z^2 - 12 z + 27: norms 1/3 and 1/9
    const MultiPoly g = univariate(q3, {{0, 27}, {1, -12}, {2, 1}});
    const RootNormMultiset gn = root_norms_nonarch(g);
    REQUIRE(gn.entries.size() == 2);
    CHECK(gn.entries[0].norm.value() == doctest::Approx(1.0 / 9));
    CHECK(gn.entries[1].norm.value() == doctest::Approx(1.0 / 3));
}

TEST_CASE("newton polygon soundness on random factored polynomials") {
    // products of (z - alpha) with alpha of known valuation, ramified included
    Rng rng(991, 0);
    int done = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[rng.below(3)];
        const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(2));
        const FieldDesc d = k == 1 ? FieldDesc::padic(p, 48) : FieldDesc::ramified(p, k, 48);
        const std::uint32_t nroots = 1 + static_cast<std::uint32_t>(rng.below(5));
        std::vector<std::int64_t> vals;
        MultiPoly f = MultiPoly::constant(d, 1, Value::one(d));
        for (std::uint32_t i = 0; i < nroots; ++i) {
            const std::int64_t v = static_cast<std::int64_t>(rng.below(7)) - 3;
            // alpha = unit * pi^v with a random unit digit
            const std::uint32_t u = 1 + static_cast<std::uint32_t>(rng.below(p - 1));
            Value alpha = Value::uniformizer_power(d, v).mul(Value::from_int(d, u));
            vals.push_back(v);
            MultiPoly lin(d, 1);
            lin.add_term(Exponents{1}, Value::one(d));
            lin.add_term(Exponents{0}, alpha.negate());
            f = f.mul(lin);
        }
        const RootNormMultiset norms = root_norms_nonarch(f);
        // constructed multiset: valuation v occurs as often as drawn
        std::map<std::int64_t, std::uint64_t> expected;
        for (auto v : vals) expected[v] += 1;
        std::uint64_t total = 0;
        for (const auto& e : norms.entries) total += e.multiplicity;
        CHECK(total == nroots);
        for (const auto& [v, count] : expected) {
            bool found = false;
            for (const auto& e : norms.entries) {
                REQUIRE(e.norm.valuation().has_value());
                const auto& val = *e.norm.valuation();
                if (!val.infinite &&
                    val.num * static_cast<std::int64_t>(k) == v * static_cast<std::int64_t>(val.k)) {
                    CHECK(e.multiplicity == count);
                    found = true;
                }
            }
            CHECK(found);
        }
        ++done;
    }
    CHECK(done == 500);
}

TEST_CASE("smallest complex root modulus") {
    const auto r = FieldDesc::real();
    CHECK(smallest_root_modulus_arch(univariate(r, {{0, 1}, {1, 1}})) == doctest::Approx(1.0));
    // (z-2)(z-1/2) = z^2 - (5/2) z + 1
    MultiPoly f(r, 1);
    f.add_term(Exponents{2}, Value::real(1.0));
    f.add_term(Exponents{1}, Value::real(-2.5));
    f.add_term(Exponents{0}, Value::real(1.0));
    CHECK(smallest_root_modulus_arch(f) == doctest::Approx(0.5));
    CHECK(std::isinf(smallest_root_modulus_arch(univariate(r, {{0, 7}}))));
    CHECK_THROWS_AS(smallest_root_modulus_arch(MultiPoly(r, 1)), zero_polynomial);
}

TEST_CASE("root finder soundness on random factored polynomials") {
    Rng rng(1313, 0);
    const auto c = FieldDesc::complex_plane();
    int done = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint32_t nroots = 1 + static_cast<std::uint32_t>(rng.below(8));
        std::vector<std::complex<double>> roots;
        for (std::uint32_t i = 0; i < nroots; ++i) {
            while (true) {
                const std::complex<double> cand{4.0 * rng.uniform_signed(), 4.0 * rng.uniform_signed()};
                bool ok = std::abs(cand) > 0.05;
                for (const auto& r0 : roots) ok = ok && std::abs(cand - r0) > 1e-2;
                if (ok) {
                    roots.push_back(cand);
                    break;
                }
            }
        }
        MultiPoly f = MultiPoly::constant(c, 1, Value::complex_value({1, 0}));
        double expect = 1e300;
        for (const auto& r0 : roots) {
            MultiPoly lin(c, 1);
            lin.add_term(Exponents{1}, Value::one(c));
            lin.add_term(Exponents{0}, Value::complex_value(-r0));
            f = f.mul(lin);
            expect = std::min(expect, std::abs(r0));
        }
        CHECK(smallest_root_modulus_arch(f) == doctest::Approx(expect).epsilon(1e-8));
        ++done;
    }
    CHECK(done == 500);
}

TEST_CASE("zero-free slice radius") {
    const auto r = FieldDesc::real();
    // p = x1, u = (1,0), v = (1,0): slice 1 + z
    MultiPoly x1(r, 2);
    x1.add_term(Exponents{1, 0}, Value::real(1.0));
    const Value u[] = {Value::real(1), Value::real(0)};
    const Value v[] = {Value::real(1), Value::real(0)};
    CHECK(zero_free_slice_radius(x1, u, v) == doctest::Approx(1.0));

    // p(u) = 0
    const Value origin[] = {Value::real(0), Value::real(0)};
    CHECK(zero_free_slice_radius(x1, origin, v) == 0.0);

    // p = x1 x2 at u = (1,1) along v = (1,1): slice (1+z)^2, double root at -1
    MultiPoly x1x2(r, 2);
    x1x2.add_term(Exponents{1, 1}, Value::real(1.0));
    const Value ones[] = {Value::real(1), Value::real(1)};
    CHECK(zero_free_slice_radius(x1x2, ones, ones) == doctest::Approx(1.0).epsilon(1e-6));

    // constant slice
    MultiPoly cpoly = MultiPoly::constant(r, 2, Value::real(3.0));
    CHECK(std::isinf(zero_free_slice_radius(cpoly, u, v)));

    // nonarchimedean slice radius via the Newton polygon
    const auto q2 = FieldDesc::padic(2);
    MultiPoly g(q2, 2);
    g.add_term(Exponents{1, 0}, Value::one(q2));  // x1
    const Value u2[] = {Value::from_int(q2, 4), Value::zero(q2)};
    const Value v2[] = {Value::one(q2), Value::zero(q2)};
    // slice 4 + z: root -4, |.| = 1/4
    CHECK(zero_free_slice_radius(g, u2, v2) == doctest::Approx(0.25));
}

TEST_CASE("F-rootedness verdicts") {
    const auto c = FieldDesc::complex_plane();
    MultiPoly any(c, 1);
    any.add_term(Exponents{2}, Value::complex_value({1, 0}));
    any.add_term(Exponents{0}, Value::complex_value({0, 1}));
    CHECK(is_F_rooted(any) == Trit::True);

    const auto r = FieldDesc::real();
    CHECK(is_F_rooted(univariate(r, {{0, -2}, {2, 1}})) == Trit::True);   // z^2 - 2
    CHECK(is_F_rooted(univariate(r, {{0, 2}, {2, 1}})) == Trit::False);   // z^2 + 2

    const auto q2 = FieldDesc::padic(2);
    CHECK(is_F_rooted(univariate(q2, {{0, -2}, {2, 1}})) == Trit::False);  // slope 1/2
    CHECK(is_F_rooted(univariate(q2, {{0, -1}, {2, 1}})) == Trit::True);   // roots +-1
    CHECK(is_F_rooted(univariate(q2, {{0, 1}, {1, 1}, {2, 1}})) == Trit::False);  // irreducible residue
    CHECK(is_F_rooted(univariate(q2, {{0, -17}, {2, 1}})) == Trit::True);  // sqrt(17) in Q2
    CHECK(is_F_rooted(univariate(q2, {{0, 1}, {1, -2}, {2, 1}})) == Trit::Undecided);  // (z-1)^2
    CHECK(is_F_rooted(univariate(q2, {{0, -3}, {2, 1}})) == Trit::False);  // sqrt(3) not in Q2

    const auto q5 = FieldDesc::padic(5);
    CHECK(is_F_rooted(univariate(q5, {{0, -1}, {2, 1}})) == Trit::True);  // residues 1, 4 mod 5
    CHECK(is_F_rooted(univariate(q5, {{0, -2}, {2, 1}})) == Trit::False); // 2 is no QR mod 5
}

TEST_CASE("factored hyperbolic geometry: x1 x2 at (1,1)") {
    const auto r = FieldDesc::real();
    FactoredPoly p;
    p.desc = r;
    p.arity = 2;
    p.factors.push_back({{Value::real(1), Value::real(0)}, Value::real(0)});
    p.factors.push_back({{Value::real(0), Value::real(1)}, Value::real(0)});

    SamplePointSet X;
    X.desc = r;
    X.arity = 2;
    for (int j = 0; j < 360; ++j) {
        const double th = 2.0 * std::numbers::pi * j / 360.0;
        X.points.push_back({Value::real(std::cos(th)), Value::real(std::sin(th))});
    }
    const Value u[] = {Value::real(1), Value::real(1)};
    const ZeroGeometryReport rep = hyperbolic_distance_bound(p, u, X);
    CHECK(rep.d_exact);
    CHECK(rep.d_uZ == doctest::Approx(1.0));
    CHECK(rep.s_u == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(rep.ratio <= 1.0 + 1e-12);  // upper pinch

    // u on the zero set
    const Value on_z[] = {Value::real(0), Value::real(1)};
    const ZeroGeometryReport rz = hyperbolic_distance_bound(p, on_z, X);
    CHECK(rz.s_u == 0.0);
    CHECK(rz.d_uZ == 0.0);

    // a single direction parallel to one factor's kernel: the slice only
    // sees the other factor
    SamplePointSet one_dir;
    one_dir.desc = r;
    one_dir.arity = 2;
    one_dir.points.push_back({Value::real(1), Value::real(0)});  // parallel to {x2 = 0}? no: kernel of x1
    const Value u2[] = {Value::real(2), Value::real(3)};
    const ZeroGeometryReport r2 = hyperbolic_distance_bound(p, u2, one_dir);
    // slice through (2,3) along (1,0): x1 factor gives root at z = -2; the
    // x2 factor is constant 3 on this slice
    CHECK(r2.s_u == doctest::Approx(2.0));
}

TEST_CASE("generic input falls back to sampled distance with a warning") {
    const auto r = FieldDesc::real();
    MultiPoly x1x2(r, 2);
    x1x2.add_term(Exponents{1, 1}, Value::real(1.0));
    SamplePointSet X;
    X.desc = r;
    X.arity = 2;
    for (int j = 0; j < 64; ++j) {
        const double th = 2.0 * std::numbers::pi * j / 64.0;
        X.points.push_back({Value::real(std::cos(th)), Value::real(std::sin(th))});
    }
    const Value u[] = {Value::real(1), Value::real(1)};
    const ZeroGeometryReport rep = hyperbolic_distance_bound(x1x2, u, X);
    CHECK(rep.sampled_fallback);
    CHECK_FALSE(rep.d_exact);
    CHECK(rep.s_u == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("empirical constant over random products of linear forms") {
    const auto r = FieldDesc::real();
    Rng rng(321, 9);
    std::vector<FactoredPoly> family;
    for (int i = 0; i < 20; ++i) {
        FactoredPoly p;
        p.desc = r;
        p.arity = 2;
        const std::uint32_t nf = 1 + static_cast<std::uint32_t>(rng.below(3));
        for (std::uint32_t t = 0; t < nf; ++t) {
            double a1 = rng.uniform_signed(), a2 = rng.uniform_signed();
            if (std::fabs(a1) + std::fabs(a2) < 0.1) a1 = 1.0;
            p.factors.push_back({{Value::real(a1), Value::real(a2)}, Value::real(rng.uniform_signed())});
        }
        family.push_back(std::move(p));
    }
    std::vector<std::vector<Value>> points;
    for (int i = 0; i < 40; ++i)
        points.push_back({Value::real(2.0 * rng.uniform_signed()), Value::real(2.0 * rng.uniform_signed())});
    SamplePointSet X;
    X.desc = r;
    X.arity = 2;
    for (int j = 0; j < 360; ++j) {
        const double th = 2.0 * std::numbers::pi * j / 360.0;
        X.points.push_back({Value::real(std::cos(th)), Value::real(std::sin(th))});
    }
    const EmpiricalC out = empirical_C(family, points, X);
    CHECK(out.c_min >= 0.99);
    CHECK(out.c_min <= 1.0 + 1e-12);
    CHECK(out.ratios.size() == family.size() * points.size());

    // a single linear form gives ratio exactly 1 off the hyperplane, up to
    // the direction sampling resolution
    std::vector<FactoredPoly> single;
    FactoredPoly p;
    p.desc = r;
    p.arity = 2;
    p.factors.push_back({{Value::real(1), Value::real(2)}, Value::real(1)});
    single.push_back(std::move(p));
    std::vector<std::vector<Value>> pts{{Value::real(3), Value::real(-1)}};
    const EmpiricalC one = empirical_C(single, pts, X);
    CHECK(one.c_min == doctest::Approx(1.0).epsilon(1e-3));
}
