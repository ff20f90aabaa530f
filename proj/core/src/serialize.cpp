#include "germinate/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace germinate {

namespace {

std::string valuation_str(const Valuation& v) {
    if (v.infinite) return "inf";
    return rational_str(v.rational());
}

std::int64_t pi_units_from_str(const std::string& s, std::uint32_t k) {
    const mpq_class q = parse_rational(s) * static_cast<long>(k);
    if (q.get_den() != 1) throw input_error("valuation '" + s + "' not in (1/k)Z");
    return static_cast<std::int64_t>(mpz_class(q.get_num()).get_si());
}

}  // namespace

json desc_to_json(const FieldDesc& d) {
    json j;
    switch (d.kind) {
        case FieldKind::Real: j["kind"] = "real"; break;
        case FieldKind::Complex: j["kind"] = "complex"; break;
        case FieldKind::Padic:
            j["kind"] = "padic";
            j["p"] = d.p;
            j["precision"] = d.precision;
            break;
        case FieldKind::RamifiedPadic:
            j["kind"] = "ramified";
            j["p"] = d.p;
            j["k"] = d.k;
            j["precision"] = d.precision;
            break;
        case FieldKind::ExactRational:
            j["kind"] = "rational";
            j["norm"] = d.rnorm == RationalNorm::Archimedean ? "arch" : "padic";
            if (d.rnorm == RationalNorm::Padic) j["p"] = d.p;
            break;
    }
    return j;
}

FieldDesc desc_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "real") return FieldDesc::real();
    if (kind == "complex") return FieldDesc::complex_plane();
    if (kind == "padic") return FieldDesc::padic(j.at("p").get<std::uint32_t>(),
                                                 j.value("precision", 64u));
    if (kind == "ramified")
        return FieldDesc::ramified(j.at("p").get<std::uint32_t>(), j.at("k").get<std::uint32_t>(),
                                   j.value("precision", 64u));
    if (kind == "rational") {
        const std::string norm = j.value("norm", "arch");
        if (norm == "arch") return FieldDesc::rational();
        if (norm == "padic") return FieldDesc::rational_padic(j.at("p").get<std::uint32_t>());
        throw input_error("unknown rational norm '" + norm + "'");
    }
    throw input_error("unknown field kind '" + kind + "'");
}

FieldDesc parse_field_spec(const std::string& text) {
    std::string head = text;
    std::map<std::string, std::string> kv;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        head = text.substr(0, colon);
        std::stringstream rest(text.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw input_error("bad field parameter '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto get_u32 = [&](const std::string& key, std::uint32_t fallback, bool required) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw input_error("field spec '" + text + "' needs " + key + "=");
            return fallback;
        }
        return static_cast<std::uint32_t>(std::stoul(it->second));
    };
    if (head == "real") return FieldDesc::real();
    if (head == "complex") return FieldDesc::complex_plane();
    if (head == "padic") return FieldDesc::padic(get_u32("p", 0, true), get_u32("prec", 64, false));
    if (head == "ramified")
        return FieldDesc::ramified(get_u32("p", 0, true), get_u32("k", 1, false),
                                   get_u32("prec", 64, false));
    if (head == "rational") {
        if (kv.count("p")) return FieldDesc::rational_padic(get_u32("p", 0, true));
        return FieldDesc::rational();
    }
    throw input_error("unknown field spec '" + text + "'");
}

json value_to_json(const Value& v) {
    switch (v.descriptor().kind) {
        case FieldKind::Real: return json(v.as_double());
        case FieldKind::Complex: {
            const auto z = v.as_complex();
            return json::array({z.real(), z.imag()});
        }
        case FieldKind::ExactRational: return json(rational_str(v.as_rational()));
        default: {
            const auto& pl = v.payload();
            json j;
            if (pl.window_empty() && !pl.err) {
                j["v"] = "inf";
                j["digits"] = json::array();
            } else {
                const std::uint32_t k = v.descriptor().k;
                j["v"] = pl.window_empty() ? "inf"
                                           : rational_str(make_rational(pl.v, k));
                j["digits"] = pl.digits;
                if (pl.err)
                    j["err"] = rational_str(make_rational(*pl.err, k));
            }
            return j;
        }
    }
}

Value value_from_json(const json& j, const FieldDesc& d) {
    switch (d.kind) {
        case FieldKind::Real:
            if (!j.is_number()) throw input_error("real element must be a number");
            return Value::real(j.get<double>());
        case FieldKind::Complex: {
            if (!j.is_array() || j.size() != 2) throw input_error("complex element must be [re, im]");
            return Value::complex_value({j[0].get<double>(), j[1].get<double>()});
        }
        case FieldKind::ExactRational:
            if (!j.is_string()) throw input_error("rational element must be a \"num/den\" string");
            return Value::rational(parse_rational(j.get<std::string>()), d.rnorm, d.p);
        default: {
            if (!j.is_object()) throw input_error("p-adic element must be an object");
            PadicPayload pl;
            const std::string vs = j.at("v").get<std::string>();
            pl.digits = j.at("digits").get<std::vector<std::uint32_t>>();
            if (vs == "inf") {
                if (!pl.digits.empty()) throw input_error("infinite valuation with digits");
            } else {
                pl.v = pi_units_from_str(vs, d.k);
            }
            if (j.contains("err")) pl.err = pi_units_from_str(j["err"].get<std::string>(), d.k);
            if (vs == "inf" && !j.contains("err")) pl.v = 0;
            return Value::padic(d, std::move(pl));
        }
    }
}

json poly_to_json(const MultiPoly& f) {
    json terms = json::array();
    for (const auto& [e, c] : f.terms()) {
        json t;
        t["e"] = e;
        t["c"] = value_to_json(c);
        terms.push_back(std::move(t));
    }
    json j;
    j["d"] = f.arity();
    j["terms"] = std::move(terms);
    return j;
}

MultiPoly poly_from_json(const json& j, const FieldDesc& d) {
    const std::uint32_t arity = j.at("d").get<std::uint32_t>();
    MultiPoly f(d, arity);
    for (const auto& t : j.at("terms")) {
        f.add_term(t.at("e").get<Exponents>(), value_from_json(t.at("c"), d));
    }
    return f;
}

json factored_to_json(const FactoredPoly& f) {
    json factors = json::array();
    for (const auto& fac : f.factors) {
        json jf;
        json lin = json::array();
        for (const auto& a : fac.a) lin.push_back(value_to_json(a));
        jf["linear"] = std::move(lin);
        jf["const"] = value_to_json(fac.b);
        factors.push_back(std::move(jf));
    }
    json j;
    j["d"] = f.arity;
    j["factors"] = std::move(factors);
    return j;
}

FactoredPoly factored_from_json(const json& j, const FieldDesc& d) {
    FactoredPoly f;
    f.desc = d;
    f.arity = j.at("d").get<std::uint32_t>();
    for (const auto& jf : j.at("factors")) {
        LinearFactor fac;
        for (const auto& a : jf.at("linear")) fac.a.push_back(value_from_json(a, d));
        fac.b = value_from_json(jf.at("const"), d);
        f.factors.push_back(std::move(fac));
    }
    f.validate();
    return f;
}

json sample_to_json(const SamplePointSet& X) {
    json pts = json::array();
    for (const auto& pt : X.points) {
        json row = json::array();
        for (const auto& v : pt) row.push_back(value_to_json(v));
        pts.push_back(std::move(row));
    }
    json j;
    j["d"] = X.arity;
    j["points"] = std::move(pts);
    return j;
}

SamplePointSet sample_from_json(const json& j, const FieldDesc& d) {
    SamplePointSet X;
    X.desc = d;
    X.arity = j.at("d").get<std::uint32_t>();
    for (const auto& row : j.at("points")) {
        std::vector<Value> pt;
        for (const auto& v : row) pt.push_back(value_from_json(v, d));
        X.points.push_back(std::move(pt));
    }
    X.validate();
    return X;
}

json norm_to_json(const Norm& n) {
    json j;
    j["value"] = n.value();
    if (n.exact()) j["exact"] = rational_str(*n.exact());
    if (n.valuation()) j["valuation"] = valuation_str(*n.valuation());
    return j;
}

json spread_estimate_to_json(const SpreadEstimate& e) {
    json j;
    j["C"] = e.C;
    j["gamma"] = e.gamma;
    j["depth"] = e.depth;
    j["analytic"] = e.analytic;
    j["worst_ratio"] = e.worst_ratio;
    j["worst_pair"] = json::array({e.worst_pair.first.str(), e.worst_pair.second.str()});
    return j;
}

json separation_to_json(const SeparationBound& b, const SeparationMeasurement& m) {
    json j;
    j["avg_bound"] = rational_str(b.avg_bound);
    j["log2_product_bound"] = b.log2_product_bound;
    if (b.valuation_sum_bound) j["valuation_sum_bound"] = rational_str(*b.valuation_sum_bound);
    j["measured_min_log2_product"] = m.min_log2_product;
    if (m.max_valuation_sum) j["measured_max_valuation_sum"] = rational_str(*m.max_valuation_sum);
    return j;
}

json conditioning_to_json(const ConditioningReport& r) {
    json j;
    j["A"] = r.A;
    j["B"] = r.B;
    if (r.A_exact) j["A_exact"] = rational_str(*r.A_exact);
    if (r.B_exact) j["B_exact"] = rational_str(*r.B_exact);
    j["degree_lo"] = r.degree_lo;
    j["degree_hi"] = r.degree_hi;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["sample_size"] = r.sample_size;
    j["worst_poly_id"] = r.worst_poly_id;
    j["max_log2_ratio"] = r.max_log2_ratio;
    json recs = json::array();
    for (const auto& t : r.records) {
        json rec;
        rec["degree"] = t.degree;
        rec["trial"] = t.trial;
        rec["log2_ratio"] = t.log2_ratio;
        recs.push_back(std::move(rec));
    }
    j["records"] = std::move(recs);
    return j;
}

json arch_integral_to_json(const ArchIntegralBound& b) {
    json j;
    j["lower_integral"] = b.lower_integral;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    return j;
}

json perfect_interp_to_json(std::span<const PerfectInterpStep> steps) {
    json arr = json::array();
    for (const auto& s : steps) {
        json j;
        j["index"] = s.index;
        j["label"] = s.label;
        j["A"] = s.A;
        j["B"] = s.B;
        j["sample_size"] = s.sample_size;
        arr.push_back(std::move(j));
    }
    return arr;
}

json counterexample_record_to_json(const CounterexampleRecord& r) {
    json j;
    j["n"] = r.n;
    j["coeff_z3n"] = rational_str(r.coeff_z3n);
    j["real_norm"] = rational_str(r.real_norm);
    j["two_adic_norm"] = rational_str(r.two_adic_norm);
    j["sup_real_sample"] = r.sup_real_sample;
    j["sup_z2_sample"] = r.sup_z2_sample;
    j["sup_real_leq_one"] = r.sup_real_leq_one;
    j["sup_z2_leq_one"] = r.sup_z2_leq_one;
    j["grid_points"] = r.grid_points;
    j["z2_residues"] = r.z2_residues;
    return j;
}

json counterexample_envelope_to_json(const CounterexampleEnvelope& e) {
    json j;
    json recs = json::array();
    for (const auto& r : e.records) recs.push_back(counterexample_record_to_json(r));
    j["records"] = std::move(recs);
    j["fitted_B_real"] = e.fitted_B_real;
    j["fitted_B_2adic"] = e.fitted_B_2adic;
    j["b_real_at_least_3_2"] = e.b_real_at_least_3_2;
    j["b_2adic_at_least_2"] = e.b_2adic_at_least_2;
    j["growth_certified_real"] = e.growth_certified_real;
    j["growth_certified_2adic"] = e.growth_certified_2adic;
    return j;
}

json radius_to_json(const RadiusEstimate& r) {
    json j;
    j["r_est"] = std::isinf(r.r_est) ? json("inf") : json(r.r_est);
    if (r.r_exact) j["r_exact"] = rational_str(*r.r_exact);
    j["window"] = json::array({r.window_lo, r.window_hi});
    json norms = json::array();
    for (const auto& n : r.per_degree_norms) norms.push_back(norm_to_json(n));
    j["per_degree_norms"] = std::move(norms);
    return j;
}

json recon_to_json(const SeriesRecon& rec) {
    json comps = json::array();
    for (std::uint32_t n = 0; n <= rec.N; ++n) {
        json c;
        c["degree"] = n;
        c["poly"] = poly_to_json(rec.components[n]);
        comps.push_back(std::move(c));
    }
    json j;
    j["N"] = rec.N;
    j["d"] = rec.arity;
    j["max_residual"] = rec.max_residual;
    j["components"] = std::move(comps);
    return j;
}

json polydisk_to_json(const PolydiskReport& r) {
    json j;
    j["radius"] = radius_to_json(r.radius);
    j["min_directional_radius"] = r.min_directional_radius;
    j["directions"] = r.directions;
    j["N"] = r.N;
    return j;
}

json zero_geometry_to_json(const ZeroGeometryReport& r) {
    json j;
    j["s_u"] = r.s_u;
    j["d_uZ"] = r.d_uZ;
    j["ratio"] = r.ratio;
    j["directions_used"] = r.directions_used;
    j["d_exact"] = r.d_exact;
    j["sampled_fallback"] = r.sampled_fallback;
    return j;
}

json empirical_c_to_json(const EmpiricalC& c) {
    json j;
    j["c_min"] = c.c_min;
    j["binding_family"] = c.binding_family;
    j["binding_point"] = c.binding_point;
    j["ratios"] = c.ratios;
    return j;
}

json newton_polygon_to_json(const NewtonPolygon& np) {
    json j;
    json verts = json::array();
    for (const auto& v : np.vertices)
        verts.push_back(json::array({v.i, valuation_str(v.v)}));
    json segs = json::array();
    for (const auto& s : np.segments) {
        json seg;
        seg["slope"] = rational_str(s.slope);
        seg["length"] = s.length;
        segs.push_back(std::move(seg));
    }
    j["vertices"] = std::move(verts);
    j["segments"] = std::move(segs);
    j["vanishing_order"] = np.vanishing_order;
    return j;
}

// ---------------------------------------------------------------------------
// Slice tables

SliceTable parse_slice_table(std::istream& in, const FieldDesc& d) {
    SliceTable table;
    table.desc = d;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> coeff_count;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw input_error("slice line " + std::to_string(line_no) + ": " + e.what());
        }
        std::vector<Value> x;
        for (const auto& v : j.at("x")) x.push_back(value_from_json(v, d));
        std::vector<Value> a;
        for (const auto& v : j.at("a")) a.push_back(value_from_json(v, d));
        if (x.empty() || a.empty())
            throw input_error("slice line " + std::to_string(line_no) + ": empty record");
        if (table.arity == 0) {
            table.arity = static_cast<std::uint32_t>(x.size());
        } else if (x.size() != table.arity) {
            throw input_error("slice line " + std::to_string(line_no) + ": arity changed");
        }
        if (!coeff_count) coeff_count = a.size();
        if (a.size() != *coeff_count)
            throw input_error("slice line " + std::to_string(line_no) + ": coefficient count changed");
        // chart normalization to x_1 = 1
        const Value& x1 = x[0];
        if (x1.is_zero())
            throw input_error("slice line " + std::to_string(line_no) +
                              ": direction has x_1 = 0, outside the reconstruction chart");
        std::vector<Value> t(x.size(), Value::one(d));
        for (std::size_t i = 1; i < x.size(); ++i) t[i] = x[i].div(x1);
        // a_n(x / x1) = a_n(x) / x1^n
        Value scale = Value::one(d);
        for (std::size_t n = 1; n < a.size(); ++n) {
            scale = scale.mul(x1);
            a[n] = a[n].div(scale);
        }
        table.directions.push_back(std::move(t));
        table.coeffs.push_back(std::move(a));
    }
    if (table.directions.empty()) throw input_error("slice table is empty");
    table.max_n = static_cast<std::uint32_t>(*coeff_count - 1);
    return table;
}

json slice_record_to_json(std::span<const Value> x, std::span<const Value> a) {
    json j;
    json jx = json::array();
    for (const auto& v : x) jx.push_back(value_to_json(v));
    json ja = json::array();
    for (const auto& v : a) ja.push_back(value_to_json(v));
    j["x"] = std::move(jx);
    j["a"] = std::move(ja);
    return j;
}

SliceOracle oracle_from_table(std::shared_ptr<const SliceTable> table) {
    if (!table) throw input_error("null slice table");
    const FieldDesc d = table->desc;
    const std::uint32_t arity = table->arity;
    const std::uint32_t max_n = table->max_n;
    return SliceOracle(d, arity, max_n, [table](std::span<const Value> x, std::uint32_t n) {
        for (std::size_t i = 0; i < table->directions.size(); ++i) {
            const auto& dir = table->directions[i];
            bool match = true;
            for (std::size_t c = 0; c < dir.size(); ++c) {
                if (!dir[c].same_value(x[c])) {
                    match = false;
                    break;
                }
            }
            if (match) return table->coeffs[i][n];
        }
        throw input_error("direction not present in the slice table");
    });
}

std::vector<NodePlan> plans_from_table(const SliceTable& table, std::uint32_t N) {
    const std::uint32_t axes = table.arity - 1;
    std::vector<std::vector<Value>> per_axis(axes);
    for (const auto& dir : table.directions) {
        for (std::uint32_t a = 0; a < axes; ++a) {
            auto& nodes = per_axis[a];
            const Value& t = dir[a + 1];
            bool found = false;
            for (const auto& v : nodes) {
                if (v.same_value(t)) {
                    found = true;
                    break;
                }
            }
            if (!found) nodes.push_back(t);
        }
    }
    std::size_t expected = 1;
    for (auto& nodes : per_axis) {
        std::sort(nodes.begin(), nodes.end(), Value::order_less);
        expected *= nodes.size();
    }
    if (expected != table.directions.size())
        throw input_error("slice table does not cover the full tensor grid of its coordinates (" +
                          std::to_string(expected) + " combinations expected, " +
                          std::to_string(table.directions.size()) + " rows present)");
    std::vector<NodePlan> plans;
    plans.reserve(axes);
    for (auto& nodes : per_axis) {
        if (nodes.size() < N + 1)
            throw input_error("axis supplies " + std::to_string(nodes.size()) + " nodes, need " +
                              std::to_string(N + 1));
        plans.push_back(NodePlan::explicit_nodes(table.desc, std::move(nodes)));
    }
    return plans;
}

}  // namespace germinate
