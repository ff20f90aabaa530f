#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "germinate/fields.hpp"

namespace germinate {

/// Finite word over {0,1}. A branch of the binary tree is the word extended
/// by trailing zeros.
struct BitString {
    std::vector<std::uint8_t> bits;

    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> b) : bits(std::move(b)) {}
    static BitString parse(std::string_view text);  // "0"/"1" characters
    std::string str() const;
    std::size_t size() const { return bits.size(); }
    BitString child(std::uint8_t bit) const;
    bool operator==(const BitString&) const = default;
};

/// Depth to which the branches of a and b agree; nullopt when they are the
/// same branch (equal after trailing-zero extension).
std::optional<std::uint32_t> branch_agreement(const BitString& a, const BitString& b);

/// 2^-(agreement depth); 0 for equal branches.
double cantor_distance(const BitString& a, const BitString& b);

/// Measure of the cylinder of branches extending `prefix`: exactly 2^-n.
mpq_class cylinder_measure(const BitString& prefix);

/// A computable map from bitstrings into a field. Coefficient c_i is fixed
/// per scheme and iota(b) = sum over set bits b_i (1-indexed) of c_i, so the
/// all-zero word maps to 0 and trailing zeros never change the image.
class SpreadEmbedding {
  public:
    enum class Scheme { MiddleThirdsReal, PadicBinary, Spk, Custom };

    /// iota(b) = sum 2 b_i 3^-i into the reals (or exact rationals).
    static SpreadEmbedding middle_thirds(std::uint32_t depth, FieldDesc desc = FieldDesc::real());
    /// iota(b) = sum b_i q^i; requires |q| < 1/2.
    static SpreadEmbedding padic_binary(Value q, std::uint32_t depth);
    /// iota(b) = sum b_i p^(i/k) into the ramified extension (k = 1: plain Qp).
    static SpreadEmbedding spk(std::uint32_t p, std::uint32_t k, std::uint32_t depth,
                               std::uint32_t precision = 64);
    static SpreadEmbedding custom(FieldDesc desc, std::uint32_t depth,
                                  std::function<Value(std::uint32_t)> coefficient, std::string label);

    Value embed(const BitString& b) const;  // throws depth_exceeded beyond the truncation depth

    Scheme scheme() const { return scheme_; }
    const FieldDesc& descriptor() const { return desc_; }
    std::uint32_t depth() const { return depth_; }
    const std::string& label() const { return label_; }

    /// Exhaustively checks injectivity on words of length `depth`.
    void verify_injective(std::uint32_t depth) const;

    /// Analytic spread constants for the built-in schemes. These are valid at
    /// every depth (the middle-thirds constant is the infimum over depths).
    std::optional<double> analytic_gamma() const;
    std::optional<double> analytic_C() const;

  private:
    SpreadEmbedding() = default;
    Scheme scheme_ = Scheme::Custom;
    FieldDesc desc_;
    std::uint32_t depth_ = 0;
    std::string label_;
    std::vector<Value> coeff_;  // c_1..c_depth
};

/// Constants witnessing d(iota(x), iota(y)) >= C d(x,y)^gamma on all examined
/// pairs; worst_pair attains the minimal ratio at the verification depth.
struct SpreadEstimate {
    double C = 0;
    double gamma = 0;
    std::uint32_t depth = 0;
    std::pair<BitString, BitString> worst_pair;
    double worst_ratio = 0;  // min over pairs of d(iota(x),iota(y)) / d(x,y)^gamma
    bool analytic = false;   // constants from the scheme formulas rather than a fit
};

/// Exhaustive over all pairs of depth-`depth` words. Built-in schemes report
/// their analytic constants (verified against the scan); custom schemes fit
/// gamma by least squares on log-distances and take C as the minimal ratio.
SpreadEstimate estimate_spread_constants(const SpreadEmbedding& e, std::uint32_t depth);

/// Cylinder-counting estimate of the outer measure of {member} under the
/// product embedding: counts depth-`depth` cylinder tuples whose
/// representative (the prefix itself) satisfies the predicate, times
/// 2^-(d*depth). Over-estimates the true outer measure of cylinder-like sets.
mpq_class outer_measure(const std::function<bool(std::span<const Value>)>& member,
                        std::span<const SpreadEmbedding> embeddings, std::uint32_t depth);

}  // namespace germinate
