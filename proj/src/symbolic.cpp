#include "rayforge/symbolic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rayforge/error.hpp"

namespace rayforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Continuous log of the large root u of  c u^2 - w u + d = 0  on the plane
// slit along the negative real axis; `c` is the dominant coefficient.
Complex dominant_log(Complex c, Complex d, Complex w, std::int64_t strip) {
    const Complex s = std::sqrt(1.0 - 4.0 * c * d / (w * w));
    const Complex correction = std::log((1.0 + s) / 2.0);
    return Complex{std::log(std::abs(w / c)),
                   std::arg(w) - std::arg(c) + kTwoPi * static_cast<double>(strip)} +
           correction;
}

std::int64_t zigzag(std::int64_t k) { return k >= 0 ? 2 * k : -2 * k - 1; }

std::int64_t unzigzag(std::int64_t n) { return n % 2 == 0 ? n / 2 : -(n + 1) / 2; }

} // namespace

Symbol encode_cosine_symbol(TractSide side, std::int64_t strip) {
    const Symbol magnitude = 1 + zigzag(strip);
    return side == TractSide::Right ? magnitude : -magnitude;
}

CosineSymbol decode_cosine_symbol(Symbol s) {
    if (s == 0) throw Error(ErrorCode::InvalidArgument, "0 is not a cosine symbol");
    const TractSide side = s > 0 ? TractSide::Right : TractSide::Left;
    return {side, unzigzag((s > 0 ? s : -s) - 1)};
}

PartitionSpec build_partition(const MapSpec& map, double R) {
    if (!std::isfinite(R) || R <= 0.0) {
        throw Error(ErrorCode::RadiusTooSmall, "partition radius must be positive");
    }
    switch (map.kind()) {
    case FamilyKind::Exp: {
        const double m = std::abs(map.exp().lambda);
        if (!(m < R)) throw Error(ErrorCode::RadiusTooSmall, "need |lambda| < R");
        return PartitionSpec(map, R, std::log(R / m));
    }
    case FamilyKind::Cosine: {
        const auto& c = map.cosine_params();
        if (!(std::abs(c.a) + std::abs(c.b) < R)) {
            throw Error(ErrorCode::RadiusTooSmall, "need |a| + |b| < R");
        }
        return PartitionSpec(map, R, std::log(2.0 * R / std::min(std::abs(c.a), std::abs(c.b))));
    }
    case FamilyKind::ScaledBF: break;
    }
    throw Error(ErrorCode::UnsupportedFamily, "no closed-form tracts for " + map.describe());
}

std::optional<Symbol> PartitionSpec::symbol_of(Complex z) const {
    if (!is_finite(z)) return std::nullopt;
    if (map_.kind() == FamilyKind::Exp) {
        if (!(z.real() > cutoff_)) return std::nullopt;
        const double y = z.imag() - (kPi - std::arg(map_.exp().lambda));
        const double cell = std::floor(y / kTwoPi);
        const double offset = y - kTwoPi * cell;
        if (offset < kCutTolerance || kTwoPi - offset < kCutTolerance) return std::nullopt;
        return static_cast<Symbol>(cell) + 1;
    }
    const auto& c = map_.cosine_params();
    if (!(std::abs(z.real()) > cutoff_)) return std::nullopt;
    const bool right = z.real() > 0.0;
    const auto w = evaluate(map_, z);
    if (!w) {
        // Beyond double range only the dominant term matters.
        const double im = right ? z.imag() : -z.imag();
        const Complex phase = std::polar(1.0, im);
        const double argw = std::arg((right ? c.a : c.b) * phase);
        if (kPi - std::abs(argw) < kCutTolerance) return std::nullopt;
        const auto strip = static_cast<std::int64_t>(std::round((im - std::arg(phase)) / kTwoPi));
        return encode_cosine_symbol(right ? TractSide::Right : TractSide::Left, strip);
    }
    // Distance to the preimage of the slit, measured in the logarithmic
    // coordinate where strips have height 2 pi.
    if (kPi - std::abs(std::arg(*w)) < kCutTolerance) return std::nullopt;
    const Complex logu = right ? dominant_log(c.a, c.b, *w, 0) : dominant_log(c.b, c.a, *w, 0);
    const double im = right ? z.imag() : -z.imag();
    const auto strip = static_cast<std::int64_t>(std::round((im - logu.imag()) / kTwoPi));
    return encode_cosine_symbol(right ? TractSide::Right : TractSide::Left, strip);
}

Complex PartitionSpec::inverse_branch(Symbol s, Complex w) const {
    if (map_.kind() == FamilyKind::Exp) {
        const Complex lambda = map_.exp().lambda;
        return {std::log(std::abs(w / lambda)),
                std::arg(w) - std::arg(lambda) + kTwoPi * static_cast<double>(s)};
    }
    const auto& c = map_.cosine_params();
    const auto cs = decode_cosine_symbol(s);
    if (cs.side == TractSide::Right) return dominant_log(c.a, c.b, w, cs.strip);
    return -dominant_log(c.b, c.a, w, cs.strip);
}

Complex PartitionSpec::anchor(Symbol s, double x) const {
    if (map_.kind() == FamilyKind::Exp) {
        return {x, kTwoPi * static_cast<double>(s) - std::arg(map_.exp().lambda)};
    }
    const auto& c = map_.cosine_params();
    const auto cs = decode_cosine_symbol(s);
    if (cs.side == TractSide::Right) {
        return {x, kTwoPi * static_cast<double>(cs.strip) - std::arg(c.a)};
    }
    return -Complex{x, kTwoPi * static_cast<double>(cs.strip) - std::arg(c.b)};
}

// ---------------------------------------------------------------------------

Symbol ExternalAddress::at(std::size_t i) const {
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
}

ExternalAddress normalize(std::vector<Symbol> preperiod, std::vector<Symbol> period) {
    if (period.empty()) throw Error(ErrorCode::InvalidArgument, "period must be nonempty");
    const std::size_t n = period.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool repeats = true;
        for (std::size_t i = d; i < n && repeats; ++i) repeats = period[i] == period[i - d];
        if (repeats) {
            period.resize(d);
            break;
        }
    }
    while (!preperiod.empty() && preperiod.back() == period.back()) {
        preperiod.pop_back();
        std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    }
    return {std::move(preperiod), std::move(period)};
}

ExternalAddress shift(const ExternalAddress& address) {
    if (!address.preperiod.empty()) {
        return normalize({address.preperiod.begin() + 1, address.preperiod.end()}, address.period);
    }
    auto period = address.period;
    std::rotate(period.begin(), period.begin() + 1, period.end());
    return normalize({}, std::move(period));
}

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

std::vector<Symbol> parse_symbols(std::string_view text) {
    std::vector<Symbol> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ws(text[i])) ++i;
        if (i == text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !is_ws(text[j])) ++j;
        const std::string_view token = text.substr(i, j - i);
        Symbol value = 0;
        const char* first = token.data();
        const char* last = token.data() + token.size();
        if (token.front() == '+') throw Error(ErrorCode::Parse, "unexpected '+' in address");
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            throw Error(ErrorCode::Parse, "bad symbol '" + std::string(token) + "'");
        }
        out.push_back(value);
        i = j;
    }
    return out;
}

} // namespace

ExternalAddress parse_address(std::string_view text) {
    while (!text.empty() && is_ws(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_ws(text.back())) text.remove_suffix(1);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw Error(ErrorCode::Parse, "address must be enclosed in [ ]");
    }
    const std::string_view body = text.substr(1, text.size() - 2);
    const auto bar = body.find('|');
    if (bar == std::string_view::npos || body.find('|', bar + 1) != std::string_view::npos) {
        throw Error(ErrorCode::Parse, "address needs exactly one '|'");
    }
    auto pre = parse_symbols(body.substr(0, bar));
    auto per = parse_symbols(body.substr(bar + 1));
    if (per.empty()) throw Error(ErrorCode::Parse, "address period is empty");
    return normalize(std::move(pre), std::move(per));
}

std::string format_address(const ExternalAddress& address) {
    std::ostringstream os;
    os << '[';
    for (const Symbol s : address.preperiod) os << s << ' ';
    os << '|';
    for (const Symbol s : address.period) os << ' ' << s;
    os << ']';
    return os.str();
}

AddressResult address_of(const PartitionSpec& partition, Complex z, int depth) {
    if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
    AddressResult result;
    result.symbols.reserve(static_cast<std::size_t>(depth));
    for (int j = 0; j < depth; ++j) {
        if (j > 0) {
            auto next = evaluate(partition.map(), z);
            if (!next) {
                result.failureIndex = static_cast<std::size_t>(j);
                return result;
            }
            z = *next;
        }
        const auto s = partition.symbol_of(z);
        if (!s) {
            result.failureIndex = static_cast<std::size_t>(j);
            return result;
        }
        result.symbols.push_back(*s);
    }
    return result;
}

} // namespace rayforge
