#include "hlab/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_number(std::string_view text, std::size_t offset) {
  double value = 0.0;
  std::string owned(text);
  if (!owned.empty() && owned.front() == '.') owned.insert(owned.begin(), '0');
  auto [ptr, ec] = std::from_chars(owned.data(), owned.data() + owned.size(), value);
  if (owned.empty() || ec != std::errc() || ptr != owned.data() + owned.size())
    throw ParseError("measure literal: expected a number at position " + std::to_string(offset + 1),
                     offset + 1, {"number"});
  return value;
}

}  // namespace

MeasureSpec::MeasureSpec(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw MalformedInputError("measure needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    const double w = std::visit([](const auto& p) { return p.weight; }, c);
    if (!(w >= 0.0) || !std::isfinite(w)) throw MalformedInputError("measure weights must be nonnegative");
    if (const auto* u = std::get_if<UniformPiece>(&c)) {
      if (!(u->lower < u->upper) || !std::isfinite(u->lower) || !std::isfinite(u->upper))
        throw MalformedInputError("uniform component needs finite a < b");
    } else if (!std::isfinite(std::get<PointMass>(c).location)) {
      throw MalformedInputError("point mass location must be finite");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw MalformedInputError("measure weights sum to " + format_number(total) + ", not 1");
}

MeasureSpec MeasureSpec::parse(std::string_view text) {
  std::vector<Component> components;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('+', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    std::size_t offset = start;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1), ++offset;
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty())
      throw ParseError("measure literal: empty component at position " + std::to_string(offset + 1),
                       offset + 1, {"delta:c", "uniform:a:b"});
    double weight = 1.0;
    if (auto star = item.find('*'); star != std::string_view::npos) {
      weight = parse_number(item.substr(0, star), offset);
      item.remove_prefix(star + 1);
      offset += star + 1;
    }
    std::vector<std::string_view> fields;
    std::vector<std::size_t> field_offsets;
    std::size_t f = 0;
    while (true) {
      const std::size_t colon = item.find(':', f);
      fields.push_back(item.substr(f, colon == std::string_view::npos ? item.size() - f : colon - f));
      field_offsets.push_back(offset + f);
      if (colon == std::string_view::npos) break;
      f = colon + 1;
    }
    if (fields[0] == "delta" && fields.size() == 2) {
      components.emplace_back(PointMass{parse_number(fields[1], field_offsets[1]), weight});
    } else if (fields[0] == "uniform" && fields.size() == 3) {
      components.emplace_back(UniformPiece{parse_number(fields[1], field_offsets[1]),
                                           parse_number(fields[2], field_offsets[2]), weight});
    } else {
      throw ParseError("measure literal: unknown component '" + std::string(item) +
                           "' at position " + std::to_string(offset + 1),
                       offset + 1, {"delta:c", "uniform:a:b"});
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return MeasureSpec(std::move(components));
}

double MeasureSpec::cdf(double y) const noexcept {
  double total = 0.0;
  for (const auto& c : components_) {
    if (const auto* p = std::get_if<PointMass>(&c)) {
      if (y >= p->location) total += p->weight;
    } else {
      const auto& u = std::get<UniformPiece>(c);
      total += u.weight * std::clamp((y - u.lower) / (u.upper - u.lower), 0.0, 1.0);
    }
  }
  return total;
}

double MeasureSpec::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile argument must lie in (0,1)");
  std::vector<double> breaks;
  for (const auto& c : components_) {
    if (const auto* p = std::get_if<PointMass>(&c)) {
      breaks.push_back(p->location);
    } else {
      breaks.push_back(std::get<UniformPiece>(c).lower);
      breaks.push_back(std::get<UniformPiece>(c).upper);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  // Between consecutive breakpoints the cdf is affine; atoms sit on breakpoints.
  double previous_break = breaks.front();
  double previous_value = cdf(previous_break);
  if (u <= previous_value) return previous_break;
  for (std::size_t t = 1; t < breaks.size(); ++t) {
    const double b = breaks[t];
    double continuous_part = 0.0;
    for (const auto& c : components_) {
      if (const auto* p = std::get_if<UniformPiece>(&c)) {
        const double width = p->upper - p->lower;
        continuous_part += p->weight * (std::clamp((b - p->lower) / width, 0.0, 1.0) -
                                        std::clamp((previous_break - p->lower) / width, 0.0, 1.0));
      }
    }
    if (u <= previous_value + continuous_part) {
      const double y = previous_break + (u - previous_value) / continuous_part * (b - previous_break);
      return std::min(y, b);
    }
    const double at_b = cdf(b);
    if (u <= at_b) return b;
    previous_break = b;
    previous_value = at_b;
  }
  return breaks.back();
}

double MeasureSpec::moment(int n) const {
  if (n < 0) throw DomainError("moment order must be nonnegative");
  double total = 0.0;
  for (const auto& c : components_) {
    if (const auto* p = std::get_if<PointMass>(&c)) {
      total += p->weight * std::pow(p->location, n);
    } else {
      const auto& u = std::get<UniformPiece>(c);
      total += u.weight * (std::pow(u.upper, n + 1) - std::pow(u.lower, n + 1)) /
               (static_cast<double>(n + 1) * (u.upper - u.lower));
    }
  }
  return total;
}

double MeasureSpec::support_min() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    if (std::visit([](const auto& p) { return p.weight; }, c) <= 0.0) continue;
    if (const auto* p = std::get_if<PointMass>(&c)) lo = std::min(lo, p->location);
    else lo = std::min(lo, std::get<UniformPiece>(c).lower);
  }
  return lo;
}

double MeasureSpec::support_max() const noexcept {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    if (std::visit([](const auto& p) { return p.weight; }, c) <= 0.0) continue;
    if (const auto* p = std::get_if<PointMass>(&c)) hi = std::max(hi, p->location);
    else hi = std::max(hi, std::get<UniformPiece>(c).upper);
  }
  return hi;
}

double MeasureSpec::mass_below(double a) const noexcept {
  return cdf(std::nextafter(a, -std::numeric_limits<double>::infinity()));
}

double MeasureSpec::atom_at(double a) const noexcept {
  double total = 0.0;
  for (const auto& c : components_)
    if (const auto* p = std::get_if<PointMass>(&c); p && p->location == a) total += p->weight;
  return total;
}

std::string MeasureSpec::to_string() const {
  std::string out;
  for (const auto& c : components_) {
    if (!out.empty()) out += "+";
    if (const auto* p = std::get_if<PointMass>(&c)) {
      if (components_.size() > 1) out += format_number(p->weight) + "*";
      out += "delta:" + format_number(p->location);
    } else {
      const auto& u = std::get<UniformPiece>(c);
      if (components_.size() > 1) out += format_number(u.weight) + "*";
      out += "uniform:" + format_number(u.lower) + ":" + format_number(u.upper);
    }
  }
  return out;
}

}  // namespace hlab
