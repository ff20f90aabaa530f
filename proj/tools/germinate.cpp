// germinate: experiments on spread embeddings, exponentially conditioned
// interpolation, series germination, and p-adic zero geometry.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "germinate/parallel.hpp"
#include "germinate/serialize.hpp"
#include "germinate/version.hpp"

using namespace germinate;

namespace {

struct CommonOpts {
    std::string output = "-";
    std::string csv;
    bool no_timestamp = false;
    std::uint64_t seed = 12345;
    std::string field = "real";
};

void add_common(CLI::App* cmd, CommonOpts& c, const std::string& default_field) {
    c.field = default_field;
    cmd->add_option("-o,--output", c.output, "Report file path ('-' for stdout)")
        ->capture_default_str();
    cmd->add_option("--csv", c.csv, "Optional CSV export path");
    cmd->add_flag("--no-timestamp", c.no_timestamp,
                  "Omit timestamp and timing from the report (reproducible output)");
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--field", c.field,
                    "Field spec: real | complex | padic:p=2,prec=64 | "
                    "ramified:p=3,k=2,prec=64 | rational | rational:p=2")
        ->capture_default_str();
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

class ReportTimer {
  public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

void emit(const CommonOpts& c, const std::string& command, json config, json results,
          const ReportTimer& timer) {
    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = command;
    config["seed"] = c.seed;
    config["threads"] = thread_count();
    report["config"] = std::move(config);
    report["results"] = std::move(results);
    report["versions"] = json{{"germinate", kVersion}};
    if (!c.no_timestamp) {
        report["generated_at"] = iso_timestamp();
        report["timing_ms"] = timer.elapsed_ms();
    }
    const std::string text = report.dump(2) + "\n";
    if (c.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(c.output);
        if (!out) throw input_error("cannot open output file '" + c.output + "'");
        out << text;
    }
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw input_error("cannot open CSV file '" + path + "'");
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file '" + path + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::parse_error& e) {
        throw input_error(std::string("malformed JSON in '") + path + "': " + e.what());
    }
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        const auto v = static_cast<std::uint32_t>(std::stoul(text));
        return {v, v};
    }
    return {static_cast<std::uint32_t>(std::stoul(text.substr(0, colon))),
            static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)))};
}

std::vector<Value> parse_point(const std::string& text, const FieldDesc& d) {
    std::vector<Value> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (d.kind == FieldKind::Real || d.kind == FieldKind::Complex) {
            const double x = std::stod(tok);
            out.push_back(d.kind == FieldKind::Real ? Value::real(x)
                                                    : Value::complex_value({x, 0.0}));
        } else {
            out.push_back(Value::from_rational(d, parse_rational(tok)));
        }
    }
    if (out.empty()) throw input_error("empty point literal '" + text + "'");
    return out;
}

SamplePointSet unit_circle_directions(const FieldDesc& d, std::uint32_t count) {
    SamplePointSet X;
    X.desc = d;
    X.arity = 2;
    for (std::uint32_t j = 0; j < count; ++j) {
        const double th = 2.0 * std::numbers::pi * j / count;
        if (d.kind == FieldKind::Real) {
            X.points.push_back({Value::real(std::cos(th)), Value::real(std::sin(th))});
        } else {
            X.points.push_back({Value::complex_value({std::cos(th), 0}),
                                Value::complex_value({std::sin(th), 0})});
        }
    }
    return X;
}

// ---------------------------------------------------------------------------

int run_counterexample(const CommonOpts& c, std::uint32_t n_max, std::uint32_t grid,
                       std::uint32_t z2_depth) {
    ReportTimer timer;
    const CounterexampleEnvelope env = counterexample_envelope(n_max, grid, z2_depth);
    json config{{"n_max", n_max}, {"grid", grid}, {"z2_depth", z2_depth}};
    std::vector<std::string> rows;
    for (const auto& r : env.records) {
        rows.push_back(std::to_string(r.n) + "," + std::to_string(rational_log2(r.real_norm)) + "," +
                       std::to_string(rational_log2(r.two_adic_norm)) + "," +
                       std::to_string(r.sup_real_sample) + "," + std::to_string(r.sup_z2_sample));
    }
    write_csv(c.csv, "n,log2_real_norm,log2_two_adic_norm,sup_real,sup_z2", rows);
    emit(c, "counterexample", std::move(config), counterexample_envelope_to_json(env), timer);
    return 0;
}

int run_reconstruct(const CommonOpts& c, const std::string& slices, const std::string& poly_file,
                    std::uint32_t N, const std::string& window) {
    ReportTimer timer;
    const FieldDesc d = parse_field_spec(c.field);
    std::optional<SliceOracle> oracle;
    std::vector<NodePlan> plans;
    if (!slices.empty()) {
        std::ifstream in(slices);
        if (!in) throw input_error("cannot open slices file '" + slices + "'");
        auto table = std::make_shared<SliceTable>(parse_slice_table(in, d));
        plans = plans_from_table(*table, N);
        oracle = oracle_from_table(table);
    } else if (!poly_file.empty()) {
        const json j = load_json_file(poly_file);
        const MultiPoly f = poly_from_json(j, d);
        oracle = SliceOracle::from_poly(f, N);
        plans = default_axis_plans(d, f.arity(), N);
    } else {
        throw input_error("reconstruct needs --slices or --poly");
    }
    auto [wlo, whi] = window.empty() ? std::pair<std::uint32_t, std::uint32_t>{(N + 1) / 2, N}
                                     : parse_range(window);
    const SeriesRecon rec = reconstruct_series(*oracle, N, plans);
    const RadiusEstimate est = estimate_radius(rec, wlo, whi);
    json results;
    results["reconstruction"] = recon_to_json(rec);
    results["radius"] = radius_to_json(est);
    json config{{"field", desc_to_json(d)}, {"N", N},
                {"window", json::array({wlo, whi})},
                {"slices", slices},          {"poly", poly_file}};
    emit(c, "reconstruct", std::move(config), std::move(results), timer);
    return 0;
}

int run_radius(const CommonOpts& c, const std::string& slices, std::uint32_t N,
               const std::string& window, const std::string& direction) {
    ReportTimer timer;
    const FieldDesc d = parse_field_spec(c.field);
    std::ifstream in(slices);
    if (!in) throw input_error("cannot open slices file '" + slices + "'");
    auto table = std::make_shared<SliceTable>(parse_slice_table(in, d));
    const std::uint32_t order = std::min(N, table->max_n);
    auto [wlo, whi] = window.empty()
                          ? std::pair<std::uint32_t, std::uint32_t>{(order + 1) / 2, order}
                          : parse_range(window);
    const SliceOracle oracle = oracle_from_table(table);
    json results;
    if (!direction.empty()) {
        std::vector<Value> x = parse_point(direction, d);
        // chart normalization mirrors the table reader
        if (x[0].is_zero()) throw input_error("direction has x_1 = 0, outside the chart");
        std::vector<Value> t(x.size(), Value::one(d));
        for (std::size_t i = 1; i < x.size(); ++i) t[i] = x[i].div(x[0]);
        const double r = directional_radius(oracle, t, wlo, whi);
        results["directional_radius"] = std::isinf(r) ? json("inf") : json(r);
        results["direction"] = [&] {
            json arr = json::array();
            for (const auto& v : x) arr.push_back(value_to_json(v));
            return arr;
        }();
    } else {
        const auto plans = plans_from_table(*table, order);
        const SeriesRecon rec = reconstruct_series(oracle, order, plans);
        results["radius"] = radius_to_json(estimate_radius(rec, wlo, whi));
        results["max_residual"] = rec.max_residual;
    }
    json config{{"field", desc_to_json(d)},
                {"N", order},
                {"window", json::array({wlo, whi})},
                {"slices", slices},
                {"direction", direction}};
    emit(c, "radius", std::move(config), std::move(results), timer);
    return 0;
}

int run_condition(const CommonOpts& c, const std::string& scheme, std::uint32_t p, std::uint32_t k,
                  std::uint32_t depth, const std::string& degrees, std::uint32_t trials,
                  const std::string& nodes_file) {
    ReportTimer timer;
    auto [dlo, dhi] = parse_range(degrees);
    json config{{"scheme", scheme}, {"degrees", json::array({dlo, dhi})},
                {"trials", trials}, {"depth", depth},
                {"p", p},           {"k", k},
                {"nodes", nodes_file}};
    json results;
    std::vector<std::string> rows;
    ConditioningReport rep;
    if (!nodes_file.empty()) {
        const json j = load_json_file(nodes_file);
        const FieldDesc d = j.contains("field") ? desc_from_json(j["field"])
                                                : parse_field_spec(c.field);
        const SamplePointSet X = sample_from_json(j, d);
        rep = conditioning_estimate(X, dlo, dhi, trials, c.seed);
        config["field"] = desc_to_json(d);
    } else if (scheme == "middlethirds") {
        auto e = std::make_shared<SpreadEmbedding>(SpreadEmbedding::middle_thirds(depth));
        const NodePlan plan = select_nodes_nonarch(e, member_all(), dhi, mpq_class(1));
        rep = conditioning_estimate(plan, dlo, dhi, trials, c.seed);
        results["separation"] = separation_to_json(separation_lower_bound(plan), measure_separation(plan));
        config["field"] = desc_to_json(e->descriptor());
    } else if (scheme == "spk") {
        auto e = std::make_shared<SpreadEmbedding>(SpreadEmbedding::spk(p, k, depth));
        const NodePlan plan = select_nodes_nonarch(e, member_all(), dhi, mpq_class(1));
        rep = conditioning_estimate(plan, dlo, dhi, trials, c.seed);
        results["separation"] = separation_to_json(separation_lower_bound(plan), measure_separation(plan));
        config["field"] = desc_to_json(e->descriptor());
    } else if (scheme == "chebyshev") {
        const NodePlan plan = NodePlan::chebyshev(dhi);
        rep = conditioning_estimate(plan, dlo, dhi, trials, c.seed);
        config["field"] = desc_to_json(plan.desc);
    } else {
        throw input_error("unknown scheme '" + scheme + "' (middlethirds | spk | chebyshev)");
    }
    for (const auto& t : rep.records)
        rows.push_back(std::to_string(t.degree) + "," + std::to_string(t.trial) + "," +
                       std::to_string(t.log2_ratio));
    write_csv(c.csv, "degree,trial,log2_ratio", rows);
    results["conditioning"] = conditioning_to_json(rep);
    emit(c, "condition", std::move(config), std::move(results), timer);
    return 0;
}

int run_perfect_interp(const CommonOpts& c, const std::string& r_list, const std::string& eps_list,
                       const std::string& degrees, std::uint32_t trials, bool use_family,
                       std::uint32_t n_max) {
    ReportTimer timer;
    auto [dlo, dhi] = parse_range(degrees);
    json results;
    std::vector<std::string> rows;
    if (use_family) {
        const CounterexampleEnvelope env = counterexample_envelope(n_max);
        results["counterexample"] = counterexample_envelope_to_json(env);
        rows.push_back("0," + std::to_string(env.fitted_B_real) + "," +
                       std::to_string(env.fitted_B_2adic));
        write_csv(c.csv, "index,B_real,B_2adic", rows);
        json config{{"degrees", json::array({dlo, dhi})}, {"family", true}, {"n_max", n_max}};
        emit(c, "perfect-interp", std::move(config), std::move(results), timer);
        return 0;
    }
    std::vector<double> rs, epss;
    for (std::stringstream ss(r_list); ss.good();) {
        std::string tok;
        if (std::getline(ss, tok, ',')) rs.push_back(std::stod(tok));
    }
    for (std::stringstream ss(eps_list); ss.good();) {
        std::string tok;
        if (std::getline(ss, tok, ',')) epss.push_back(std::stod(tok));
    }
    if (rs.empty() || epss.empty()) throw input_error("empty refinement lists");
    std::sort(rs.begin(), rs.end());
    std::sort(epss.begin(), epss.end(), std::greater<>());
    std::vector<SamplePointSet> seq;
    std::vector<std::string> labels;
    SamplePointSet acc;
    acc.desc = FieldDesc::complex_plane();
    acc.arity = 1;
    for (double r : rs) {
        for (double eps : epss) {
            const std::size_t count =
                static_cast<std::size_t>(std::ceil(4.0 * dhi / std::max(eps, 1e-6)));
            const SamplePointSet ring = circle_sample(r, count);
            acc.points.insert(acc.points.end(), ring.points.begin(), ring.points.end());
            seq.push_back(acc);
            labels.push_back("r=" + std::to_string(r) + ",eps=" + std::to_string(eps));
        }
    }
    const auto steps = perfect_interp_check(seq, labels, dlo, dhi, trials, c.seed);
    results["steps"] = perfect_interp_to_json(steps);
    for (const auto& s : steps)
        rows.push_back(std::to_string(s.index) + "," + std::to_string(s.A) + "," + std::to_string(s.B));
    write_csv(c.csv, "index,A,B", rows);
    json config{{"r_list", r_list}, {"eps_list", eps_list},
                {"degrees", json::array({dlo, dhi})}, {"trials", trials},
                {"family", false}};
    emit(c, "perfect-interp", std::move(config), std::move(results), timer);
    return 0;
}

int run_zeros(const CommonOpts& c, const std::string& factored_file, const std::string& family_file,
              const std::string& point, const std::string& points_file, std::uint32_t directions) {
    ReportTimer timer;
    const FieldDesc d = parse_field_spec(c.field);
    const SamplePointSet X = unit_circle_directions(d, directions);
    json results;
    json config{{"field", desc_to_json(d)}, {"directions", directions},
                {"factored", factored_file}, {"family", family_file},
                {"point", point},            {"points", points_file}};
    std::vector<std::string> rows;

    std::vector<std::vector<Value>> points;
    if (!point.empty()) points.push_back(parse_point(point, d));
    if (!points_file.empty()) {
        const json j = load_json_file(points_file);
        const SamplePointSet ps = sample_from_json(j, d);
        points.insert(points.end(), ps.points.begin(), ps.points.end());
    }
    if (points.empty()) throw input_error("zeros needs --point or --points");

    if (!family_file.empty()) {
        const json j = load_json_file(family_file);
        std::vector<FactoredPoly> family;
        for (const auto& jf : j.at("family")) family.push_back(factored_from_json(jf, d));
        const EmpiricalC out = empirical_C(family, points, X);
        results["empirical_C"] = empirical_c_to_json(out);
        for (double r : out.ratios) rows.push_back(std::to_string(r));
        write_csv(c.csv, "ratio", rows);
    } else if (!factored_file.empty()) {
        const FactoredPoly p = factored_from_json(load_json_file(factored_file), d);
        json reports = json::array();
        for (const auto& u : points) {
            const ZeroGeometryReport rep = hyperbolic_distance_bound(p, u, X);
            reports.push_back(zero_geometry_to_json(rep));
            rows.push_back(std::to_string(rep.d_uZ) + "," + std::to_string(rep.s_u) + "," +
                           std::to_string(rep.ratio));
        }
        results["reports"] = std::move(reports);
        write_csv(c.csv, "d_uZ,s_u,ratio", rows);
    } else {
        throw input_error("zeros needs --factored or --family");
    }
    emit(c, "zeros", std::move(config), std::move(results), timer);
    return 0;
}

int run_spread(const CommonOpts& c, const std::string& scheme, std::uint32_t p, std::uint32_t k,
               const std::string& q_literal, std::uint32_t depth, std::uint32_t estimate_depth,
               double member_norm_max) {
    ReportTimer timer;
    std::optional<SpreadEmbedding> e;
    if (scheme == "middlethirds") {
        e = SpreadEmbedding::middle_thirds(depth);
    } else if (scheme == "spk") {
        e = SpreadEmbedding::spk(p, k, depth);
    } else if (scheme == "padicbinary") {
        const FieldDesc d = parse_field_spec(c.field);
        e = SpreadEmbedding::padic_binary(Value::from_rational(d, parse_rational(q_literal)), depth);
    } else {
        throw input_error("unknown scheme '" + scheme + "' (middlethirds | spk | padicbinary)");
    }
    const SpreadEstimate est = estimate_spread_constants(*e, std::min(depth, estimate_depth));
    json results;
    results["estimate"] = spread_estimate_to_json(est);
    results["field"] = desc_to_json(e->descriptor());
    if (member_norm_max > 0) {
        const auto member = [&](std::span<const Value> x) {
            return x[0].norm().value() <= member_norm_max;
        };
        const SpreadEmbedding es[] = {*e};
        const mpq_class mu = outer_measure(member, es, std::min(depth, 12u));
        results["outer_measure"] = rational_str(mu);
        results["outer_measure_value"] = mu.get_d();
    }
    json config{{"scheme", scheme},
                {"p", p},
                {"k", k},
                {"q", q_literal},
                {"depth", depth},
                {"estimate_depth", estimate_depth},
                {"member_norm_max", member_norm_max}};
    emit(c, "spread", std::move(config), std::move(results), timer);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"germinate: spread interpolation, germination and zero-geometry experiments"};
    app.require_subcommand(1);

    CommonOpts c_counter, c_recon, c_radius, c_cond, c_perfect, c_zeros, c_spread;

    auto* counter = app.add_subcommand("counterexample",
                                       "Expand ((z - 3z^3)/2)^n exactly and certify its norms");
    std::uint32_t n_max = 20, grid = 4096, z2_depth = 12;
    add_common(counter, c_counter, "rational");
    counter->add_option("--n-max", n_max, "Largest family index")->capture_default_str();
    counter->add_option("--grid", grid, "Dyadic sample points in [-1, 1)")->capture_default_str();
    counter->add_option("--z2-depth", z2_depth, "Residue depth for the 2-adic ball")
        ->capture_default_str();

    auto* recon = app.add_subcommand("reconstruct", "Rebuild homogeneous components from slices");
    std::string slices, poly_file, window;
    std::uint32_t N = 8;
    add_common(recon, c_recon, "rational");
    recon->add_option("--slices", slices, "Slice JSONL file ({\"x\": [...], \"a\": [...]})");
    recon->add_option("--poly", poly_file, "Polynomial JSON file backing a test oracle");
    recon->add_option("--N", N, "Truncation order")->capture_default_str();
    recon->add_option("--window", window, "Radius window lo:hi (default ceil(N/2):N)");

    auto* radius = app.add_subcommand("radius", "Radius estimates from slice data");
    std::string r_slices, r_window, r_direction;
    std::uint32_t r_N = 12;
    add_common(radius, c_radius, "rational");
    radius->add_option("--slices", r_slices, "Slice JSONL file")->required();
    radius->add_option("--N", r_N, "Truncation order")->capture_default_str();
    radius->add_option("--window", r_window, "Window lo:hi");
    radius->add_option("--direction", r_direction, "Directional radius at this direction");

    auto* cond = app.add_subcommand("condition", "Conditioning envelope measurement");
    std::string scheme = "middlethirds", degrees = "1:12", nodes_file;
    std::uint32_t cp = 2, ck = 1, cdepth = 12, trials = 50;
    add_common(cond, c_cond, "real");
    cond->add_option("--scheme", scheme, "middlethirds | spk | chebyshev")->capture_default_str();
    cond->add_option("--p", cp, "Prime for spk")->capture_default_str();
    cond->add_option("--k", ck, "Ramification for spk")->capture_default_str();
    cond->add_option("--depth", cdepth, "Embedding truncation depth")->capture_default_str();
    cond->add_option("--degrees", degrees, "Degree range lo:hi")->capture_default_str();
    cond->add_option("--trials", trials, "Trials per degree")->capture_default_str();
    cond->add_option("--nodes", nodes_file, "Sample-point JSON file overriding the scheme");

    auto* perfect = app.add_subcommand("perfect-interp", "B_i trend along a sample refinement");
    std::string r_list = "0.9,0.99", eps_list = "0.1,0.01", p_degrees = "1:12";
    std::uint32_t p_trials = 20, p_nmax = 20;
    bool use_family = false;
    add_common(perfect, c_perfect, "complex");
    perfect->add_option("--r-list", r_list, "Circle radii")->capture_default_str();
    perfect->add_option("--eps-list", eps_list, "Angular refinement parameters")->capture_default_str();
    perfect->add_option("--degrees", p_degrees, "Degree range lo:hi")->capture_default_str();
    perfect->add_option("--trials", p_trials, "Trials per degree")->capture_default_str();
    perfect->add_flag("--counterexample-family", use_family,
                      "Certify the R / Z_2 failure from the exact family instead");
    perfect->add_option("--n-max", p_nmax, "Family size for the certificate")->capture_default_str();

    auto* zeros_cmd = app.add_subcommand("zeros", "Hyperbolic zero-geometry reports");
    std::string factored_file, family_file, point, points_file;
    std::uint32_t directions = 360;
    add_common(zeros_cmd, c_zeros, "real");
    zeros_cmd->add_option("--factored", factored_file, "Factored polynomial JSON");
    zeros_cmd->add_option("--family", family_file, "JSON with {\"family\": [factored...]}");
    zeros_cmd->add_option("--point", point, "Base point, comma separated");
    zeros_cmd->add_option("--points", points_file, "Sample-point JSON with base points");
    zeros_cmd->add_option("--directions", directions, "Unit-circle direction count")
        ->capture_default_str();

    auto* spread = app.add_subcommand("spread", "Spread-constant estimation for an embedding");
    std::string s_scheme = "spk", q_literal = "1/4";
    std::uint32_t sp = 2, sk = 1, sdepth = 12, est_depth = 10;
    double member_norm_max = 0;
    add_common(spread, c_spread, "padic:p=2");
    spread->add_option("--scheme", s_scheme, "middlethirds | spk | padicbinary")->capture_default_str();
    spread->add_option("--p", sp, "Prime")->capture_default_str();
    spread->add_option("--k", sk, "Ramification index")->capture_default_str();
    spread->add_option("--q", q_literal, "Base element for padicbinary (rational literal)")
        ->capture_default_str();
    spread->add_option("--depth", sdepth, "Truncation depth")->capture_default_str();
    spread->add_option("--estimate-depth", est_depth, "Exhaustive pair depth")->capture_default_str();
    spread->add_option("--member-norm-max", member_norm_max,
                       "Also estimate the outer measure of {|x| <= bound}")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (counter->parsed()) return run_counterexample(c_counter, n_max, grid, z2_depth);
        if (recon->parsed()) return run_reconstruct(c_recon, slices, poly_file, N, window);
        if (radius->parsed()) return run_radius(c_radius, r_slices, r_N, r_window, r_direction);
        if (cond->parsed())
            return run_condition(c_cond, scheme, cp, ck, cdepth, degrees, trials, nodes_file);
        if (perfect->parsed())
            return run_perfect_interp(c_perfect, r_list, eps_list, p_degrees, p_trials, use_family,
                                      p_nmax);
        if (zeros_cmd->parsed())
            return run_zeros(c_zeros, factored_file, family_file, point, points_file, directions);
        if (spread->parsed())
            return run_spread(c_spread, s_scheme, sp, sk, q_literal, sdepth, est_depth,
                              member_norm_max);
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
