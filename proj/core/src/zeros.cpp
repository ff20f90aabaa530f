#include "germinate/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace germinate {

namespace {

void require_univariate_nonarch(const MultiPoly& q) {
    if (q.arity() != 1) throw arity_mismatch("univariate polynomial required");
    if (!q.descriptor().nonarchimedean())
        throw unsupported_field("Newton polygons require a nonarchimedean field, got " +
                                q.descriptor().str());
    if (q.is_zero()) throw zero_polynomial();
}

struct ValPoint {
    std::int64_t i;
    mpq_class v;  // p-valuation units
};

std::vector<ValPoint> valuation_points(const MultiPoly& q) {
    std::vector<ValPoint> pts;
    for (const auto& [e, c] : q.terms()) {
        if (c.is_inexact_zero())
            throw precision_exhausted("coefficient of z^" + std::to_string(e[0]) +
                                      " has no certified valuation");
        const Valuation v = c.valuation();
        pts.push_back({static_cast<std::int64_t>(e[0]), v.rational()});
    }
    std::sort(pts.begin(), pts.end(), [](const ValPoint& a, const ValPoint& b) { return a.i < b.i; });
    return pts;
}

}  // namespace

NewtonPolygon newton_polygon(const MultiPoly& q) {
    require_univariate_nonarch(q);
    const auto pts = valuation_points(q);
    NewtonPolygon np;
    np.vanishing_order = static_cast<std::uint64_t>(pts.front().i);

    // lower convex hull, left to right
    std::vector<ValPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // keep b only if it lies strictly below segment a->p
            const mpq_class lhs = (b.v - a.v) * (p.i - a.i);
            const mpq_class rhs = (p.v - a.v) * (b.i - a.i);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    const std::uint32_t k = q.descriptor().k;
    for (const auto& h : hull) {
        mpq_class pi_units = h.v * static_cast<long>(k);
        NewtonPolygon::Vertex vert;
        vert.i = h.i;
        vert.v = Valuation{static_cast<std::int64_t>(mpz_class(pi_units.get_num()).get_si()), k, false};
        if (pi_units.get_den() != 1) throw internal_error("coefficient valuation outside (1/k)Z");
        np.vertices.push_back(vert);
    }
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        NewtonPolygon::Segment seg;
        seg.slope = (hull[s + 1].v - hull[s].v) / mpq_class(static_cast<long>(hull[s + 1].i - hull[s].i));
        seg.length = static_cast<std::uint64_t>(hull[s + 1].i - hull[s].i);
        np.segments.push_back(std::move(seg));
    }
    return np;
}

RootNormMultiset root_norms_nonarch(const MultiPoly& q) {
    const NewtonPolygon np = newton_polygon(q);
    const std::uint32_t p = q.descriptor().p;
    RootNormMultiset out;
    if (np.vanishing_order > 0) {
        RootNormMultiset::Entry e;
        e.norm = Norm();  // zero
        e.multiplicity = np.vanishing_order;
        out.entries.push_back(std::move(e));
    }
    for (const auto& seg : np.segments) {
        // roots of valuation -slope: |z| = p^slope
        const mpq_class val = -seg.slope;
        RootNormMultiset::Entry e;
        e.norm = Norm::from_valuation(
            p, Valuation{static_cast<std::int64_t>(mpz_class(val.get_num()).get_si()),
                         static_cast<std::uint32_t>(mpz_class(val.get_den()).get_ui()), false});
        e.multiplicity = seg.length;
        out.entries.push_back(std::move(e));
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const RootNormMultiset::Entry& a, const RootNormMultiset::Entry& b) {
                  return Norm::less(a.norm, b.norm);
              });
    return out;
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich over the complex numbers

namespace {

using cplx = std::complex<double>;

std::vector<cplx> dense_complex_coeffs(const MultiPoly& q) {
    if (q.arity() != 1) throw arity_mismatch("univariate polynomial required");
    const auto kind = q.descriptor().kind;
    if (kind != FieldKind::Real && kind != FieldKind::Complex)
        throw unsupported_field("complex root finding needs an archimedean field, got " +
                                q.descriptor().str());
    if (q.is_zero()) throw zero_polynomial();
    std::vector<cplx> c(static_cast<std::size_t>(q.degree()) + 1, cplx(0, 0));
    for (const auto& [e, v] : q.terms()) c[e[0]] = v.as_complex();
    return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx acc = c.back();
    for (std::size_t j = c.size() - 1; j-- > 0;) acc = acc * z + c[j];
    return acc;
}

cplx horner_derivative(const std::vector<cplx>& c, cplx z) {
    cplx acc(0, 0);
    for (std::size_t j = c.size() - 1; j >= 1; --j) acc = acc * z + c[j] * static_cast<double>(j);
    return acc;
}

double backward_error(const std::vector<cplx>& c, cplx z) {
    double denom = 0;
    double zp = 1;
    const double az = std::abs(z);
    for (const auto& ck : c) {
        denom += std::abs(ck) * zp;
        zp *= az;
    }
    return denom == 0 ? 0 : std::abs(horner(c, z)) / denom;
}

std::vector<cplx> aberth(const std::vector<cplx>& c, double backward_tol) {
    const std::size_t m = c.size() - 1;
    double cauchy = 0;
    for (std::size_t j = 0; j < m; ++j) cauchy = std::max(cauchy, std::abs(c[j] / c[m]));
    const double r0 = 1.0 + cauchy;
    std::vector<cplx> z(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m) + 0.4;
        z[j] = r0 * cplx(std::cos(theta), std::sin(theta));
    }
    for (int sweep = 0; sweep < 400; ++sweep) {
        double max_step = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const cplx pj = horner(c, z[j]);
            if (std::abs(pj) == 0.0) continue;
            cplx dj = horner_derivative(c, z[j]);
            if (std::abs(dj) == 0.0) dj = cplx(1e-300, 0);
            const cplx newton = pj / dj;
            cplx repulsion(0, 0);
            for (std::size_t l = 0; l < m; ++l) {
                if (l != j) repulsion += 1.0 / (z[j] - z[l]);
            }
            const cplx denom = 1.0 - newton * repulsion;
            const cplx step = std::abs(denom) == 0.0 ? newton : newton / denom;
            z[j] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[j])));
        }
        if (max_step < 1e-15) break;
    }
    for (const auto& zj : z) {
        if (backward_error(c, zj) > backward_tol)
            throw root_finding_failure("backward error above " + std::to_string(backward_tol));
    }
    return z;
}

}  // namespace

std::vector<std::complex<double>> complex_roots(const MultiPoly& q, double backward_tol) {
    auto c = dense_complex_coeffs(q);
    std::vector<cplx> roots;
    std::size_t ord = 0;
    while (ord < c.size() && std::abs(c[ord]) == 0.0) ++ord;
    if (ord == c.size()) throw internal_error("zero polynomial slipped through");
    for (std::size_t j = 0; j < ord; ++j) roots.emplace_back(0, 0);
    std::vector<cplx> deflated(c.begin() + static_cast<long>(ord), c.end());
    if (deflated.size() >= 2) {
        const auto found = aberth(deflated, backward_tol);
        roots.insert(roots.end(), found.begin(), found.end());
    }
    return roots;
}

double smallest_root_modulus_arch(const MultiPoly& q, double backward_tol) {
    if (q.arity() != 1) throw arity_mismatch("univariate polynomial required");
    if (q.is_zero()) throw zero_polynomial();
    if (q.degree() == 0) return std::numeric_limits<double>::infinity();
    const auto roots = complex_roots(q, backward_tol);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) best = std::min(best, std::abs(r));
    return best;
}

// ---------------------------------------------------------------------------
// Zero-free slice radius

double zero_free_slice_radius(const MultiPoly& p, std::span<const Value> u,
                              std::span<const Value> v) {
    const MultiPoly slice = p.restrict_slice(u, v);
    if (slice.is_zero()) return 0.0;  // p vanishes along the whole line
    if (slice.coeff(Exponents{0}).is_zero()) return 0.0;  // p(u) = 0
    if (slice.degree() == 0) return std::numeric_limits<double>::infinity();
    if (p.descriptor().nonarchimedean()) {
        const auto norms = root_norms_nonarch(slice);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : norms.entries) {
            if (!e.norm.is_zero()) best = std::min(best, e.norm.value());
        }
        return best;
    }
    return smallest_root_modulus_arch(slice);
}

// ---------------------------------------------------------------------------
// F-rootedness

namespace {

// dense polynomial arithmetic over F_p (coefficients in [0, p))
using FpPoly = std::vector<std::uint64_t>;

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& mod, std::uint64_t p);

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& mod, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    return fp_mod(std::move(prod), mod, p);
}

FpPoly fp_mod(FpPoly a, const FpPoly& mod, std::uint64_t p) {
    fp_trim(a);
    const std::size_t dm = mod.size() - 1;
    mpz_class lead_inv_z;
    mpz_class lead(static_cast<unsigned long>(mod.back())), pz(static_cast<unsigned long>(p));
    mpz_invert(lead_inv_z.get_mpz_t(), lead.get_mpz_t(), pz.get_mpz_t());
    const std::uint64_t lead_inv = lead_inv_z.get_ui();
    while (a.size() > dm) {
        const std::size_t deg = a.size() - 1;
        const std::uint64_t q = (a.back() * lead_inv) % p;
        if (q != 0) {
            for (std::size_t j = 0; j <= dm; ++j) {
                const std::size_t pos = deg - dm + j;
                a[pos] = (a[pos] + p * p - (q * mod[j]) % p) % p;
            }
        }
        a.pop_back();
        fp_trim(a);
        if (a.empty()) break;
    }
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

FpPoly fp_derivative(const FpPoly& a, std::uint64_t p) {
    FpPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back((a[i] * (i % p)) % p);
    fp_trim(d);
    return d;
}

// x^p mod R
FpPoly fp_frobenius(const FpPoly& R, std::uint64_t p) {
    FpPoly result{1};
    FpPoly base{0, 1};
    base = fp_mod(base, R, p);
    std::uint64_t e = p;
    while (e) {
        if (e & 1) result = fp_mulmod(result, base, R, p);
        e >>= 1;
        if (e) base = fp_mulmod(base, base, R, p);
    }
    return result;
}

bool fp_equal(const FpPoly& a, const FpPoly& b) {
    FpPoly x = a, y = b;
    fp_trim(x);
    fp_trim(y);
    return x == y;
}

struct SegmentData {
    std::int64_t i0 = 0, i1 = 0;
    std::int64_t pi_slope = 0;  // integral, else the segment certifies False
    bool slope_integral = false;
    FpPoly residue;
};

// residue polynomial of a Newton segment (digits read at the hull line)
SegmentData segment_data(const MultiPoly& q, const NewtonPolygon& np, std::size_t seg_index) {
    const std::uint32_t k = q.descriptor().k;
    SegmentData sd;
    std::int64_t i = np.vertices.front().i;
    for (std::size_t s = 0; s < seg_index; ++s) i += static_cast<std::int64_t>(np.segments[s].length);
    sd.i0 = i;
    sd.i1 = i + static_cast<std::int64_t>(np.segments[seg_index].length);
    const mpq_class pi_slope = np.segments[seg_index].slope * static_cast<long>(k);
    if (pi_slope.get_den() != 1) {
        sd.slope_integral = false;
        return sd;
    }
    sd.slope_integral = true;
    sd.pi_slope = static_cast<std::int64_t>(mpz_class(pi_slope.get_num()).get_si());

    const Valuation v0 = q.coeff(Exponents{static_cast<std::uint32_t>(sd.i0)}).valuation();
    sd.residue.assign(static_cast<std::size_t>(sd.i1 - sd.i0) + 1, 0);
    for (std::int64_t idx = sd.i0; idx <= sd.i1; ++idx) {
        const Value c = q.coeff(Exponents{static_cast<std::uint32_t>(idx)});
        if (c.is_zero()) continue;
        const Valuation vc = c.valuation();
        const std::int64_t line = v0.num + sd.pi_slope * (idx - sd.i0);
        if (vc.num == line) sd.residue[static_cast<std::size_t>(idx - sd.i0)] = c.payload().digits.front();
    }
    return sd;
}

// Strong-Hensel digit-tree certification for one segment whose residue has
// repeated factors. Returns True when `length` pairwise distinct simple
// roots are certified, Undecided otherwise.
Trit certify_segment_by_tree(const MultiPoly& q, const SegmentData& sd, std::uint64_t length) {
    const FieldDesc d = q.descriptor();
    // transformed polynomial qt(w) = q(pi^{-lambda} w) / pi^{shift}; roots of
    // this segment become units
    const std::int64_t lambda = -sd.pi_slope;  // root valuation in pi units
    MultiPoly qt(d, 1);
    for (const auto& [e, c] : q.terms()) {
        const Value scale = Value::uniformizer_power(d, lambda * static_cast<std::int64_t>(e[0]));
        qt.add_term(e, c.mul(scale));
    }
    // normalize so coefficients are integral with a unit somewhere
    std::int64_t min_v = std::numeric_limits<std::int64_t>::max();
    for (const auto& [e, c] : qt.terms()) min_v = std::min(min_v, c.valuation().num);
    MultiPoly qn(d, 1);
    for (const auto& [e, c] : qt.terms())
        qn.add_term(e, c.mul(Value::uniformizer_power(d, -min_v)));
    // derivative
    MultiPoly dq(d, 1);
    for (const auto& [e, c] : qn.terms()) {
        if (e[0] == 0) continue;
        dq.add_term(Exponents{e[0] - 1}, c.mul(Value::from_int(d, static_cast<long>(e[0]))));
    }

    // Certified closed balls B(center, pi^rho), each containing exactly one
    // root; exact roots are point balls with rho = +inf.
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    struct Ball {
        Value center;
        std::int64_t rho;
    };
    std::vector<Ball> certified;
    struct Node {
        Value a;
        std::int64_t depth;
    };
    std::vector<Node> frontier;
    for (std::uint32_t d0 = 1; d0 < d.p; ++d0) {
        PadicPayload pl;
        pl.v = 0;
        pl.digits = {d0};
        frontier.push_back({Value::padic(d, std::move(pl)), 1});
    }
    const std::int64_t depth_cap = std::min<std::int64_t>(d.precision > 8 ? d.precision - 4 : 4, 60);
    const std::size_t width_cap = 8 * static_cast<std::size_t>(length) + 16;

    // lower bound for the pi-valuation of a possibly-inexact value
    auto val_lb = [](const Value& v) -> std::int64_t {
        if (v.is_zero()) return std::numeric_limits<std::int64_t>::max();
        if (v.is_inexact_zero()) return *v.payload().err;
        return v.valuation().num;
    };
    // exact valuation when decidable
    auto val_known = [](const Value& v, std::int64_t& out) {
        if (v.is_zero() || v.is_inexact_zero()) return false;
        out = v.valuation().num;
        return true;
    };

    // a new ball is a fresh root only when it is provably disjoint from every
    // certified ball: v(centers' difference) < min(radii), decided exactly
    auto fresh_root = [&](const Value& center, std::int64_t rho) {
        for (const auto& ball : certified) {
            const Value diff = center.sub(ball.center);
            std::int64_t dv;
            if (!val_known(diff, dv)) return false;  // cannot separate: be conservative
            if (dv >= std::min(rho, ball.rho)) return false;
        }
        return true;
    };
    // the cylinder {x = a mod pi^depth} lies inside an already-certified ball
    auto covered = [&](const Value& a, std::int64_t depth) {
        for (const auto& ball : certified) {
            if (depth < ball.rho) continue;
            if (val_lb(a.sub(ball.center)) >= ball.rho) return true;
        }
        return false;
    };

    bool imprecise_prune = false;
    while (!frontier.empty()) {
        if (certified.size() >= length) break;
        if (frontier.size() > width_cap) return Trit::Undecided;
        std::vector<Node> next;
        for (const auto& node : frontier) {
            if (node.depth > depth_cap) return Trit::Undecided;
            Value qa, dqa;
            try {
                qa = qn.evaluate(std::span<const Value>(&node.a, 1));
                dqa = dq.evaluate(std::span<const Value>(&node.a, 1));
            } catch (const precision_exhausted&) {
                return Trit::Undecided;
            }
            if (qa.is_zero()) {
                if (fresh_root(node.a, kInf)) certified.push_back({node.a, kInf});
            } else if (!qa.is_inexact_zero() && !dqa.is_zero() && !dqa.is_inexact_zero()) {
                const std::int64_t va = qa.valuation().num;
                const std::int64_t vd = dqa.valuation().num;
                if (va > 2 * vd) {
                    // unique root in the closed ball of radius pi^(va - vd);
                    // the ball is a unit ball (rho >= 1), so it stays within
                    // this segment's roots
                    const std::int64_t rho = va - vd;
                    if (fresh_root(node.a, rho)) certified.push_back({node.a, rho});
                }
            }
            // extend: children a + digit * pi^depth with v(q(child)) > depth
            for (std::uint32_t dig = 0; dig < d.p; ++dig) {
                Value child = node.a;
                if (dig != 0) {
                    PadicPayload pl;
                    pl.v = node.depth;
                    pl.digits = {dig};
                    child = node.a.add(Value::padic(d, std::move(pl)));
                }
                if (covered(child, node.depth + 1)) continue;
                Value qc;
                try {
                    qc = qn.evaluate(std::span<const Value>(&child, 1));
                } catch (const precision_exhausted&) {
                    return Trit::Undecided;
                }
                if (val_lb(qc) >= node.depth + 1) {
                    next.push_back({std::move(child), node.depth + 1});
                } else if (qc.is_inexact_zero()) {
                    imprecise_prune = true;  // exclusion not certain
                }
            }
        }
        if (certified.size() >= length) break;
        frontier = std::move(next);
        // when every pruned cylinder was excluded by an exact valuation, an
        // empty frontier certifies that no further roots exist in the field
        if (frontier.empty() && certified.size() < length)
            return imprecise_prune ? Trit::Undecided : Trit::False;
    }
    return certified.size() >= length ? Trit::True : Trit::Undecided;
}

Trit is_rooted_padic(const MultiPoly& q) {
    const NewtonPolygon np = newton_polygon(q);
    if (static_cast<std::int64_t>(np.vanishing_order) == q.degree()) return Trit::True;  // c z^m
    const std::uint64_t p = q.descriptor().p;
    bool undecided = false;
    for (std::size_t s = 0; s < np.segments.size(); ++s) {
        const SegmentData sd = segment_data(q, np, s);
        if (!sd.slope_integral) return Trit::False;  // root valuations outside the value group
        FpPoly residue = sd.residue;
        fp_trim(residue);
        const FpPoly der = fp_derivative(residue, p);
        const FpPoly g = der.empty() ? residue : fp_gcd(residue, der, p);
        const bool squarefree = g.size() <= 1;
        if (squarefree) {
            // splits into distinct linear factors iff x^p == x mod residue
            const FpPoly frob = fp_frobenius(residue, p);
            FpPoly x{0, 1};
            x = fp_mod(x, residue, p);
            if (fp_equal(frob, x)) continue;  // Hensel lifts each simple root
            return Trit::False;  // a simple irreducible factor of degree >= 2 lifts
        }
        const Trit t = certify_segment_by_tree(q, sd, np.segments[s].length);
        if (t == Trit::False) return Trit::False;
        if (t == Trit::Undecided) undecided = true;
    }
    return undecided ? Trit::Undecided : Trit::True;
}

}  // namespace

Trit is_F_rooted(const MultiPoly& q) {
    if (q.arity() != 1) throw arity_mismatch("univariate polynomial required");
    if (q.is_zero()) throw zero_polynomial();
    switch (q.descriptor().kind) {
        case FieldKind::Complex: return Trit::True;
        case FieldKind::Real: {
            if (q.degree() == 0) return Trit::True;
            const auto roots = complex_roots(q);
            bool undecided = false;
            for (const auto& r : roots) {
                const double scale = 1.0 + std::abs(r);
                if (std::fabs(r.imag()) >= 1e-6 * scale) return Trit::False;
                if (std::fabs(r.imag()) > 1e-10 * scale) undecided = true;
            }
            return undecided ? Trit::Undecided : Trit::True;
        }
        case FieldKind::Padic:
        case FieldKind::RamifiedPadic: return is_rooted_padic(q);
        default:
            throw unsupported_field("F-rootedness is decided over complete fields, got " +
                                    q.descriptor().str());
    }
}

// ---------------------------------------------------------------------------
// Hyperbolic zero geometry

MultiPoly FactoredPoly::expand() const {
    validate();
    MultiPoly prod = MultiPoly::constant(desc, arity, Value::one(desc));
    for (const auto& f : factors) {
        MultiPoly lin(desc, arity);
        Exponents zero(arity, 0);
        lin.add_term(zero, f.b);
        for (std::uint32_t i = 0; i < arity; ++i) {
            Exponents e(arity, 0);
            e[i] = 1;
            lin.add_term(e, f.a[i]);
        }
        prod = prod.mul(lin);
    }
    return prod;
}

void FactoredPoly::validate() const {
    if (factors.empty()) throw input_error("factored polynomial without factors");
    for (const auto& f : factors) {
        if (f.a.size() != arity) throw arity_mismatch("linear factor arity");
        bool nonzero = false;
        for (const auto& v : f.a) {
            if (!(v.descriptor() == desc)) throw descriptor_mismatch("factor coefficient");
            nonzero = nonzero || !v.is_zero();
        }
        if (!(f.b.descriptor() == desc)) throw descriptor_mismatch("factor constant");
        if (!nonzero) throw input_error("linear factor with zero homogeneous part");
    }
}

namespace {

double abs_value(const Value& v) { return v.norm().value(); }

}  // namespace

ZeroGeometryReport hyperbolic_distance_bound(const FactoredPoly& p, std::span<const Value> u,
                                             const SamplePointSet& X) {
    p.validate();
    X.validate();
    if (u.size() != p.arity || X.arity != p.arity) throw arity_mismatch("point/direction arity");
    const auto kind = p.desc.kind;
    if (kind != FieldKind::Real && kind != FieldKind::Complex)
        throw unsupported_field("exact hyperplane distances use the Euclidean geometry of R/C");

    ZeroGeometryReport rep;
    rep.directions_used = X.points.size();
    rep.d_exact = true;

    // factor values at u and Euclidean norms of the homogeneous parts
    std::vector<double> val_u, a_norm;
    for (const auto& f : p.factors) {
        Value s = f.b;
        for (std::size_t i = 0; i < u.size(); ++i) s = s.add(f.a[i].mul(u[i]));
        val_u.push_back(abs_value(s));
        double nn = 0;
        for (const auto& ai : f.a) nn += abs_value(ai) * abs_value(ai);
        a_norm.push_back(std::sqrt(nn));
    }
    double d_uZ = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < p.factors.size(); ++t) d_uZ = std::min(d_uZ, val_u[t] / a_norm[t]);

    double s_u = std::numeric_limits<double>::infinity();
    for (const auto& x : X.points) {
        double slice = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < p.factors.size(); ++t) {
            Value dot = Value::zero(p.desc);
            for (std::size_t i = 0; i < x.size(); ++i) dot = dot.add(p.factors[t].a[i].mul(x[i]));
            const double den = abs_value(dot);
            if (den > 0) slice = std::min(slice, val_u[t] / den);
        }
        s_u = std::min(s_u, slice);
    }
    rep.d_uZ = d_uZ;
    rep.s_u = s_u;
    rep.ratio = (d_uZ == 0 && s_u == 0) ? 1.0 : d_uZ / s_u;
    return rep;
}

ZeroGeometryReport hyperbolic_distance_bound(const MultiPoly& p, std::span<const Value> u,
                                             const SamplePointSet& X) {
    X.validate();
    if (u.size() != p.arity() || X.arity != p.arity()) throw arity_mismatch("point/direction arity");
    if (p.is_zero()) throw zero_polynomial();
    ZeroGeometryReport rep;
    rep.directions_used = X.points.size();
    rep.sampled_fallback = true;
    double s_u = std::numeric_limits<double>::infinity();
    for (const auto& x : X.points) s_u = std::min(s_u, zero_free_slice_radius(p, u, x));
    rep.s_u = s_u;
    // nearest sampled slice root is an upper estimate for d(u, Z)
    rep.d_uZ = s_u;
    rep.ratio = 1.0;
    return rep;
}

EmpiricalC empirical_C(std::span<const FactoredPoly> family,
                       std::span<const std::vector<Value>> points, const SamplePointSet& X) {
    if (family.empty() || points.empty()) throw input_error("empirical constant needs data");
    EmpiricalC out;
    out.c_min = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < family.size(); ++f) {
        for (std::size_t pt = 0; pt < points.size(); ++pt) {
            const ZeroGeometryReport rep = hyperbolic_distance_bound(family[f], points[pt], X);
            out.ratios.push_back(rep.ratio);
            if (rep.ratio < out.c_min) {
                out.c_min = rep.ratio;
                out.binding_family = f;
                out.binding_point = pt;
            }
        }
    }
    return out;
}

}  // namespace germinate
