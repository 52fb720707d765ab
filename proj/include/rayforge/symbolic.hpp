#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rayforge/core.hpp"

namespace rayforge {

/// Index of a fundamental domain. For Exp maps it is the strip index k.
/// For Cosine maps the sign selects the tract (+ right, - left) and the
/// magnitude is 1 + zigzag(k), zigzag(k) = 2k for k >= 0 and -2k-1 for k < 0.
using Symbol = std::int64_t;

enum class TractSide { Right, Left };

struct CosineSymbol {
    TractSide side;
    std::int64_t strip;
};

Symbol encode_cosine_symbol(TractSide side, std::int64_t strip);
CosineSymbol decode_cosine_symbol(Symbol s);

/// Canonical tract/fundamental-domain partition for an Exp or Cosine map.
///
/// The reference curve alpha is the negative real half-line (-inf, -R]. For
/// Exp maps the single tract is the half-plane Re z > ln(R/|lambda|), cut into
/// horizontal strips of height 2 pi; strip k is
/// { Im z - (pi - arg lambda) in (2 pi (k-1), 2 pi k) }. For Cosine maps the
/// two tracts are {+-Re z > ln(2R / min(|a|, |b|))}, cut along the preimages
/// of alpha under the dominant exponential term.
class PartitionSpec {
public:
    [[nodiscard]] const MapSpec& map() const noexcept { return map_; }
    [[nodiscard]] double radius() const noexcept { return radius_; }
    /// Real-part threshold of the tract(s): ln(R/|lambda|) or c(R).
    [[nodiscard]] double tract_cutoff() const noexcept { return cutoff_; }

    /// Strip/tract containing z, or nullopt when z is outside the tracts or
    /// within 1e-12 of a cut line.
    [[nodiscard]] std::optional<Symbol> symbol_of(Complex z) const;

    /// The inverse branch of f into the fundamental domain `s`. Defined for
    /// every w off the negative real axis (and w != 0).
    [[nodiscard]] Complex inverse_branch(Symbol s, Complex w) const;

    /// A point in fundamental domain `s` with real-part magnitude `x`,
    /// centred in the strip.
    [[nodiscard]] Complex anchor(Symbol s, double x) const;

    friend PartitionSpec build_partition(const MapSpec& map, double R);

private:
    PartitionSpec(MapSpec map, double radius, double cutoff)
        : map_(map), radius_(radius), cutoff_(cutoff) {}

    MapSpec map_;
    double radius_;
    double cutoff_;
};

inline constexpr double kCutTolerance = 1e-12;

/// Throws UnsupportedFamily for ScaledBF and RadiusTooSmall when the disk of
/// radius R does not contain the singular values.
PartitionSpec build_partition(const MapSpec& map, double R);

// ---------------------------------------------------------------------------

/// Eventually periodic symbol sequence; always held in normal form.
struct ExternalAddress {
    std::vector<Symbol> preperiod;
    std::vector<Symbol> period;

    [[nodiscard]] bool is_periodic() const noexcept { return preperiod.empty(); }
    /// Symbol at position i of the infinite sequence.
    [[nodiscard]] Symbol at(std::size_t i) const;

    friend bool operator==(const ExternalAddress&, const ExternalAddress&) = default;
};

/// Primitive period, minimal preperiod. Throws InvalidArgument on an empty
/// period.
ExternalAddress normalize(std::vector<Symbol> preperiod, std::vector<Symbol> period);

ExternalAddress shift(const ExternalAddress& address);

/// Grammar (whitespace = one or more ' ' or '\t'):
///   address  := '[' ws? symbols? ws? '|' ws? symbols ws? ']'
///   symbols  := integer (ws integer)*
///   integer  := '-'? [0-9]+
/// Examples: "[| 0]", "[2 | 0 1]". Throws Error(Parse) on violations,
/// including an empty period.
ExternalAddress parse_address(std::string_view text);

/// Canonical text form: "[| 0]", "[2 | 0 1]". parse_address(format_address(a)) == a.
std::string format_address(const ExternalAddress& address);

struct AddressResult {
    std::vector<Symbol> symbols;
    /// Index of the first iterate that left the tracts (or overflowed).
    std::optional<std::size_t> failureIndex;

    [[nodiscard]] bool ok() const noexcept { return !failureIndex.has_value(); }
};

AddressResult address_of(const PartitionSpec& partition, Complex z, int depth);

} // namespace rayforge
