#include "germinate/germ.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace germinate {

SliceOracle::SliceOracle(FieldDesc desc, std::uint32_t arity, std::uint32_t max_n, EvalFn eval)
    : desc_(std::move(desc)), arity_(arity), max_n_(max_n), eval_(std::move(eval)) {
    if (arity_ < 1) throw input_error("oracle arity must be >= 1");
}

Value SliceOracle::coefficient(std::span<const Value> x, std::uint32_t n) const {
    if (n > max_n_)
        throw oracle_truncated("coefficient " + std::to_string(n) + " beyond truncation order " +
                               std::to_string(max_n_));
    if (x.size() != arity_) throw arity_mismatch("oracle direction");
    return eval_(x, n);
}

SliceOracle SliceOracle::from_poly(const MultiPoly& f, std::uint32_t max_n) {
    auto parts = homogeneous_parts(f, max_n);
    auto shared = std::make_shared<std::vector<HomogeneousComponent>>(std::move(parts));
    return SliceOracle(f.descriptor(), f.arity(), max_n,
                       [shared](std::span<const Value> x, std::uint32_t n) {
                           return (*shared)[n].poly.is_zero()
                                      ? Value::zero((*shared)[n].poly.descriptor())
                                      : (*shared)[n].poly.evaluate(x);
                       });
}

SliceOracle SliceOracle::geometric(std::vector<Value> w, std::uint32_t max_n) {
    if (w.empty()) throw input_error("geometric oracle needs at least one weight");
    const FieldDesc d = w[0].descriptor();
    auto shared = std::make_shared<std::vector<Value>>(std::move(w));
    return SliceOracle(d, static_cast<std::uint32_t>(shared->size()), max_n,
                       [shared, d](std::span<const Value> x, std::uint32_t n) {
                           Value dot = Value::zero(d);
                           for (std::size_t i = 0; i < shared->size(); ++i)
                               dot = dot.add((*shared)[i].mul(x[i]));
                           return dot.pow(n);
                       });
}

SliceOracle SliceOracle::product_geometric(const FieldDesc& d, std::uint32_t arity,
                                           std::uint32_t max_n) {
    // h_n(x) = sum over monomials of total degree n of x^alpha
    return SliceOracle(d, arity, max_n, [d, arity](std::span<const Value> x, std::uint32_t n) {
        // complete homogeneous sum via the recurrence over variables
        // h(v, n): sum over monomials in the first v variables
        std::vector<Value> row(n + 1, Value::zero(d));
        row[0] = Value::one(d);
        for (std::uint32_t v = 0; v < arity; ++v) {
            for (std::uint32_t deg = 1; deg <= n; ++deg)
                row[deg] = row[deg].add(row[deg - 1].mul(x[v]));
        }
        return row[n];
    });
}

std::vector<NodePlan> default_axis_plans(const FieldDesc& d, std::uint32_t arity, std::uint32_t N) {
    if (arity < 1) throw input_error("arity must be >= 1");
    std::vector<NodePlan> plans;
    if (arity == 1) return plans;
    NodePlan axis;
    switch (d.kind) {
        case FieldKind::Real: axis = NodePlan::chebyshev(N); break;
        case FieldKind::Complex: axis = select_nodes_arch(N, 0.1, 0.99, 0.0); break;
        default: axis = NodePlan::integer_nodes(d, N); break;
    }
    plans.assign(arity - 1, axis);
    return plans;
}

SeriesRecon reconstruct_series(const SliceOracle& o, std::uint32_t N,
                               std::span<const NodePlan> axis_plans) {
    if (N > o.max_n())
        throw oracle_truncated("requested order " + std::to_string(N) + " beyond oracle truncation " +
                               std::to_string(o.max_n()));
    const std::uint32_t d = o.arity();
    if (axis_plans.size() != d - 1)
        throw shape_mismatch("need d-1 = " + std::to_string(d - 1) + " axis plans, got " +
                             std::to_string(axis_plans.size()));
    for (const auto& p : axis_plans) {
        if (!(p.desc == o.descriptor())) throw descriptor_mismatch("axis plan field");
        if (p.count() < N + 1)
            throw shape_mismatch("axis plan must supply N+1 = " + std::to_string(N + 1) + " nodes");
    }

    SeriesRecon rec;
    rec.desc = o.descriptor();
    rec.arity = d;
    rec.N = N;
    rec.plans.assign(axis_plans.begin(), axis_plans.end());
    rec.components.reserve(N + 1);

    const Value one = Value::one(o.descriptor());
    double max_residual = 0;

    for (std::uint32_t n = 0; n <= N; ++n) {
        if (d == 1) {
            // single variable: h_n = a_n(1) z^n
            const Value a = o.coefficient(std::span<const Value>(&one, 1), n);
            MultiPoly h(o.descriptor(), 1);
            h.add_term(Exponents{n}, a);
            rec.components.push_back(std::move(h));
            continue;
        }
        // chart grid (1, t_2..t_d) over the leading n+1 nodes per axis
        TensorGrid grid;
        grid.extents.assign(d - 1, static_cast<std::size_t>(n) + 1);
        grid.data.reserve(grid.flat_size());
        const std::size_t total = grid.flat_size();
        std::vector<std::size_t> idx(d - 1, 0);
        std::vector<Value> dir(d, one);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (std::size_t a = d - 1; a-- > 0;) {
                idx[a] = rem % grid.extents[a];
                rem /= grid.extents[a];
            }
            for (std::size_t a = 0; a + 1 < d; ++a) dir[a + 1] = axis_plans[a].nodes[idx[a]];
            grid.data.push_back(o.coefficient(dir, n));
        }
        MultiPoly g = tensor_interpolate(grid, axis_plans.first(d - 1));
        MultiPoly h = g.rehomogenize(n);
        // consistency residual on the grid directions (relative)
        if (!o.descriptor().exact_kind()) {
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t rem = flat;
                for (std::size_t a = d - 1; a-- > 0;) {
                    idx[a] = rem % grid.extents[a];
                    rem /= grid.extents[a];
                }
                for (std::size_t a = 0; a + 1 < d; ++a) dir[a + 1] = axis_plans[a].nodes[idx[a]];
                const double want = grid.data[flat].norm().value();
                const double diff = h.evaluate(dir).sub(grid.data[flat]).norm().value();
                max_residual = std::max(max_residual, diff / std::max(1.0, want));
            }
        }
        rec.components.push_back(std::move(h));
    }
    rec.max_residual = max_residual;
    return rec;
}

namespace {

struct GrowthRate {
    bool all_zero = true;
    double log2_rate = 0;
    std::optional<mpq_class> exact_rate;
};

// geometric-mean growth between the first and last nonvanishing norms in the
// window (Cauchy-Hadamard at a single surviving degree)
GrowthRate growth_rate(std::span<const Norm> norms, std::span<const std::uint32_t> degrees) {
    GrowthRate g;
    std::optional<std::size_t> lo, hi;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (degrees[i] == 0 || norms[i].is_zero()) continue;
        if (!lo) lo = i;
        hi = i;
    }
    if (!lo) return g;
    g.all_zero = false;
    if (*lo == *hi) {
        const std::uint32_t n = degrees[*lo];
        g.log2_rate = norms[*lo].log2() / n;
        if (norms[*lo].exact()) g.exact_rate = rational_root_exact(*norms[*lo].exact(), n);
    } else {
        const std::uint32_t gap = degrees[*hi] - degrees[*lo];
        g.log2_rate = (norms[*hi].log2() - norms[*lo].log2()) / gap;
        if (norms[*lo].exact() && norms[*hi].exact() && *norms[*lo].exact() != 0)
            g.exact_rate = rational_root_exact(*norms[*hi].exact() / *norms[*lo].exact(), gap);
    }
    return g;
}

RadiusEstimate radius_from_rate(const GrowthRate& g, std::uint32_t lo, std::uint32_t hi) {
    RadiusEstimate est;
    est.window_lo = lo;
    est.window_hi = hi;
    if (g.all_zero) {
        est.r_est = std::numeric_limits<double>::infinity();
        return est;
    }
    est.r_est = std::exp2(-g.log2_rate);
    if (g.exact_rate && *g.exact_rate != 0) {
        est.r_exact = mpq_class(g.exact_rate->get_den(), g.exact_rate->get_num());
        est.r_exact->canonicalize();
        est.r_est = est.r_exact->get_d();
    }
    return est;
}

}  // namespace

RadiusEstimate estimate_radius(const SeriesRecon& rec, std::uint32_t window_lo,
                               std::uint32_t window_hi) {
    if (window_lo > window_hi || window_hi > rec.N)
        throw empty_window("radius window [" + std::to_string(window_lo) + ", " +
                           std::to_string(window_hi) + "] outside [0, " + std::to_string(rec.N) + "]");
    std::vector<Norm> norms;
    std::vector<std::uint32_t> degrees;
    for (std::uint32_t n = window_lo; n <= window_hi; ++n) {
        norms.push_back(rec.components[n].coeff_norm());
        degrees.push_back(n);
    }
    RadiusEstimate est = radius_from_rate(growth_rate(norms, degrees), window_lo, window_hi);
    est.per_degree_norms = std::move(norms);
    return est;
}

double directional_radius(const SliceOracle& o, std::span<const Value> x, std::uint32_t window_lo,
                          std::uint32_t window_hi) {
    if (window_lo > window_hi || window_hi > o.max_n())
        throw empty_window("directional window outside the oracle truncation");
    std::vector<Norm> norms;
    std::vector<std::uint32_t> degrees;
    for (std::uint32_t n = window_lo; n <= window_hi; ++n) {
        norms.push_back(o.coefficient(x, n).norm());
        degrees.push_back(n);
    }
    const RadiusEstimate est = radius_from_rate(growth_rate(norms, degrees), window_lo, window_hi);
    return est.r_est;
}

PolydiskReport polydisk_check(const SliceOracle& o, const SamplePointSet& directions,
                              std::uint32_t N, std::uint32_t window_lo, std::uint32_t window_hi,
                              double tol, std::span<const NodePlan> plans) {
    directions.validate();
    if (directions.arity != o.arity()) throw arity_mismatch("direction sample");
    PolydiskReport rep;
    rep.N = N;
    rep.directions = directions.points.size();
    double min_radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < directions.points.size(); ++i) {
        const double r = directional_radius(o, directions.points[i], window_lo, window_hi);
        min_radius = std::min(min_radius, r);
        if (r < 1.0 - tol)
            throw slice_divergent("direction " + std::to_string(i) + " has windowed radius " +
                                  std::to_string(r) + " < 1 - " + std::to_string(tol));
    }
    rep.min_directional_radius = min_radius;

    std::vector<NodePlan> own;
    if (plans.empty()) {
        own = default_axis_plans(o.descriptor(), o.arity(), N);
        plans = own;
    }
    const SeriesRecon rec = reconstruct_series(o, N, plans);
    rep.radius = estimate_radius(rec, window_lo, window_hi);
    if (!(rep.radius.r_est > 0)) throw internal_error("polydisk radius estimate not positive");
    return rep;
}

StressReport quantitative_stress(std::span<const SliceOracle> family,
                                 std::span<const NodePlan> plans, std::uint32_t N,
                                 std::uint32_t window_lo, std::uint32_t window_hi, double tol) {
    if (family.empty()) throw input_error("empty oracle family");
    StressReport rep;
    rep.min_r_est = std::numeric_limits<double>::infinity();
    const Value one = Value::one(family[0].descriptor());

    for (std::size_t i = 0; i < family.size(); ++i) {
        const SliceOracle& o = family[i];
        // gate: directional radius >= 1 - tol on every plan direction
        if (o.arity() > 1) {
            std::vector<std::size_t> idx(o.arity() - 1, 0);
            std::vector<Value> dir(o.arity(), one);
            const std::size_t per_axis = N + 1;
            std::size_t total = 1;
            for (std::size_t a = 0; a + 1 < o.arity(); ++a) total *= per_axis;
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t rem = flat;
                for (std::size_t a = o.arity() - 1; a-- > 0;) {
                    idx[a] = rem % per_axis;
                    rem /= per_axis;
                }
                for (std::size_t a = 0; a + 1 < o.arity(); ++a) dir[a + 1] = plans[a].nodes[idx[a]];
                const double r = directional_radius(o, dir, window_lo, window_hi);
                if (r < 1.0 - tol)
                    throw slice_divergent("family member " + std::to_string(i) +
                                          " has a plan direction with radius " + std::to_string(r));
            }
        }
        const SeriesRecon rec = reconstruct_series(o, N, plans);
        const RadiusEstimate est = estimate_radius(rec, window_lo, window_hi);
        rep.r_values.push_back(est.r_est);
        if (est.r_est < rep.min_r_est) {
            rep.min_r_est = est.r_est;
            rep.binding_index = i;
        }
    }
    // plan constants for reproducibility
    std::string echo;
    for (const auto& p : plans) {
        if (!echo.empty()) echo += "; ";
        if (p.scheme == NodePlan::Scheme::NonarchSubtree && p.embedding) {
            const auto C = p.embedding->analytic_C();
            const auto g = p.embedding->analytic_gamma();
            echo += p.embedding->label() + " m=" + std::to_string(p.level_m) +
                    " mu=" + rational_str(p.mu_est);
            if (C && g) echo += " C=" + std::to_string(*C) + " gamma=" + std::to_string(*g);
        } else if (p.scheme == NodePlan::Scheme::ArchRootsOfUnity) {
            echo += "roots-of-unity r=" + std::to_string(p.radius) +
                    " N=" + std::to_string(p.total_roots);
        } else {
            echo += "explicit nodes (" + std::to_string(p.count()) + ")";
        }
    }
    rep.plan_echo = std::move(echo);
    return rep;
}

}  // namespace germinate
