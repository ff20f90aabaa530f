#pragma once

#include <stdexcept>
#include <string>

namespace germinate {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad arguments, malformed files, violated preconditions. CLI exit code 1.
struct input_error : error {
    using error::error;
};

/// A computation could not be carried out at the requested accuracy.
/// CLI exit code 2.
struct numeric_error : error {
    using error::error;
};

/// An internal invariant failed to hold. CLI exit code 3.
struct internal_error : error {
    using error::error;
};

struct descriptor_mismatch : input_error {
    descriptor_mismatch(const std::string& what) : input_error("descriptor mismatch: " + what) {}
};
struct division_by_zero : input_error {
    division_by_zero() : input_error("division by zero") {}
};
struct unsupported_field : input_error {
    unsupported_field(const std::string& what) : input_error("unsupported field: " + what) {}
};
struct arity_mismatch : input_error {
    arity_mismatch(const std::string& what) : input_error("arity mismatch: " + what) {}
};
struct degree_overflow : input_error {
    degree_overflow(const std::string& what) : input_error("degree overflow: " + what) {}
};
struct depth_exceeded : input_error {
    depth_exceeded(const std::string& what) : input_error("depth exceeded: " + what) {}
};
struct invalid_base : input_error {
    invalid_base(const std::string& what) : input_error("invalid base: " + what) {}
};
struct not_injective : input_error {
    not_injective(const std::string& what) : input_error("embedding not injective: " + what) {}
};
struct insufficient_subtrees : input_error {
    insufficient_subtrees(const std::string& what) : input_error("insufficient subtrees: " + what) {}
};
struct too_few_nodes : input_error {
    too_few_nodes(const std::string& what) : input_error("too few nodes: " + what) {}
};
struct duplicate_nodes : input_error {
    duplicate_nodes(const std::string& what) : input_error("duplicate nodes: " + what) {}
};
struct shape_mismatch : input_error {
    shape_mismatch(const std::string& what) : input_error("shape mismatch: " + what) {}
};
struct wrong_scheme : input_error {
    wrong_scheme(const std::string& what) : input_error("wrong node scheme: " + what) {}
};
struct degenerate_sample : input_error {
    degenerate_sample(const std::string& what) : input_error("degenerate sample: " + what) {}
};
struct zero_polynomial : input_error {
    zero_polynomial() : input_error("zero polynomial") {}
};
struct empty_window : input_error {
    empty_window(const std::string& what) : input_error("empty window: " + what) {}
};
struct oracle_truncated : input_error {
    oracle_truncated(const std::string& what) : input_error("oracle truncated: " + what) {}
};
struct slice_divergent : input_error {
    slice_divergent(const std::string& what) : input_error("divergent slice: " + what) {}
};

/// P-adic cancellation consumed every retained digit; the result's norm
/// cannot be certified. Never silently reported as zero.
struct precision_exhausted : numeric_error {
    precision_exhausted(const std::string& what) : numeric_error("precision exhausted: " + what) {}
};
struct root_finding_failure : numeric_error {
    root_finding_failure(const std::string& what) : numeric_error("root finding failed: " + what) {}
};
struct quadrature_failure : numeric_error {
    quadrature_failure(const std::string& what) : numeric_error("quadrature failed: " + what) {}
};

}  // namespace germinate
