#pragma once

#include <istream>
#include <memory>
#include <optional>

#include <json.hpp>

#include "germinate/cantor.hpp"
#include "germinate/germ.hpp"
#include "germinate/interp.hpp"
#include "germinate/poly.hpp"
#include "germinate/zeros.hpp"

namespace germinate {

using json = nlohmann::json;

// field descriptors
json desc_to_json(const FieldDesc& d);
FieldDesc desc_from_json(const json& j);
/// Parses CLI syntax: real | complex | padic:p=2,prec=64 | ramified:p=3,k=2 |
/// rational | rational:p=2.
FieldDesc parse_field_spec(const std::string& text);

// field elements (bit-exact round trip for the nonarchimedean kinds)
json value_to_json(const Value& v);
Value value_from_json(const json& j, const FieldDesc& d);

// polynomials: {"d": int, "terms": [{"e": [...], "c": ...}]}
json poly_to_json(const MultiPoly& f);
MultiPoly poly_from_json(const json& j, const FieldDesc& d);

// factored linear form: {"factors": [{"linear": [...], "const": ...}]}
json factored_to_json(const FactoredPoly& f);
FactoredPoly factored_from_json(const json& j, const FieldDesc& d);

// sample point sets: {"d": int, "points": [[...]]}
json sample_to_json(const SamplePointSet& X);
SamplePointSet sample_from_json(const json& j, const FieldDesc& d);

json norm_to_json(const Norm& n);

// report fragments
json spread_estimate_to_json(const SpreadEstimate& e);
json separation_to_json(const SeparationBound& b, const SeparationMeasurement& m);
json conditioning_to_json(const ConditioningReport& r);
json arch_integral_to_json(const ArchIntegralBound& b);
json perfect_interp_to_json(std::span<const PerfectInterpStep> steps);
json counterexample_record_to_json(const CounterexampleRecord& r);
json counterexample_envelope_to_json(const CounterexampleEnvelope& e);
json radius_to_json(const RadiusEstimate& r);
json recon_to_json(const SeriesRecon& rec);
json polydisk_to_json(const PolydiskReport& r);
json zero_geometry_to_json(const ZeroGeometryReport& r);
json empirical_c_to_json(const EmpiricalC& c);
json newton_polygon_to_json(const NewtonPolygon& np);

/// Chart-normalized slice data ingested from JSON Lines
/// ({"x": [...], "a": [...]} per line): directions are scaled to x_1 = 1 and
/// coefficients rescaled by x_1^-n accordingly. Directions with x_1 = 0 are
/// outside the reconstruction chart and rejected.
struct SliceTable {
    FieldDesc desc;
    std::uint32_t arity = 0;
    std::uint32_t max_n = 0;
    std::vector<std::vector<Value>> directions;
    std::vector<std::vector<Value>> coeffs;
};
SliceTable parse_slice_table(std::istream& in, const FieldDesc& d);
json slice_record_to_json(std::span<const Value> x, std::span<const Value> a);

/// Oracle that looks directions up in the table (exact payload match).
SliceOracle oracle_from_table(std::shared_ptr<const SliceTable> table);
/// Per-axis explicit plans extracted from the table's chart coordinates.
/// Validates that the table covers the full tensor grid of those
/// coordinates and that each axis supplies at least N+1 nodes.
std::vector<NodePlan> plans_from_table(const SliceTable& table, std::uint32_t N);

}  // namespace germinate
