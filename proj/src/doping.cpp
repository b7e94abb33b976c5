#include "ephydro/doping.hpp"

#include "ephydro/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ephydro {

namespace {

constexpr int kDenseSamples = 10000;

double parse_number(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw DomainError("invalid " + what + " '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

double table_value(const DopingProfile::Table& t, double x) {
  if (x <= t.x.front()) return t.d.front();
  if (x >= t.x.back()) return t.d.back();
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - t.x.begin());
  const double x0 = t.x[k - 1], x1 = t.x[k];
  const double s = (x - x0) / (x1 - x0);
  return (1.0 - s) * t.d[k - 1] + s * t.d[k];
}

double table_antiderivative(const DopingProfile::Table& t, double x) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.x.size(); ++k) {
    const double x0 = t.x[k - 1];
    if (x <= x0) break;
    const double x1 = std::min(t.x[k], x);
    acc += 0.5 * (t.d[k - 1] + table_value(t, x1)) * (x1 - x0);
  }
  return acc;
}

}  // namespace

DopingProfile::DopingProfile(Kind kind) : kind_(std::move(kind)) {
  double lo = (*this)(0.0);
  double hi = lo;
  for (int i = 1; i <= kDenseSamples; ++i) {
    const double v = (*this)(static_cast<double>(i) / kDenseSamples);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (const auto* s = std::get_if<Sine>(&kind_); s && s->frequency != 0.0) {
    // Interior extrema of the sine fall between samples in general.
    const double period = 1.0 / std::abs(s->frequency);
    for (double x = 0.25 * period; x <= 1.0; x += 0.5 * period) {
      const double v = (*this)(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lo = std::max(lo, s->mean - std::abs(s->amplitude));
    hi = std::min(hi, s->mean + std::abs(s->amplitude));
  }
  if (!(lo > 0.0)) throw DomainError("doping profile must be bounded below by a positive constant");
  lower_ = lo;
  upper_ = hi;
}

DopingProfile DopingProfile::constant(double value) { return DopingProfile(Constant{value}); }

DopingProfile DopingProfile::sine(double mean, double amplitude, double frequency) {
  return DopingProfile(Sine{mean, amplitude, frequency});
}

DopingProfile DopingProfile::table(std::vector<double> x, std::vector<double> d) {
  if (x.size() != d.size() || x.size() < 2)
    throw DomainError("doping table needs at least two (x, D) rows of equal length");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw DomainError("doping table x column must be strictly increasing");
  if (std::abs(x.front()) > 1e-12 || std::abs(x.back() - 1.0) > 1e-12)
    throw DomainError("doping table must span [0, 1]");
  return DopingProfile(Table{std::move(x), std::move(d)});
}

DopingProfile::Table read_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table '" + path.string() + "'");
  DopingProfile::Table table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto cols = split(row, ',');
    if (cols.size() != 2) throw DomainError("table '" + path.string() + "': expected two columns");
    try {
      table.x.push_back(parse_number(trim(cols[0]), "table x"));
      table.d.push_back(parse_number(trim(cols[1]), "table value"));
    } catch (const DomainError&) {
      if (!first) throw;  // header row
    }
    first = false;
  }
  return table;
}

DopingProfile DopingProfile::parse(std::string_view spec, const std::filesystem::path& base_dir) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw DomainError("malformed profile spec '" + std::string(spec) + "'");
  const auto kind = spec.substr(0, colon);
  const auto rest = spec.substr(colon + 1);
  if (kind == "constant") return constant(parse_number(rest, "constant value"));
  if (kind == "sine") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3)
      throw DomainError("sine profile expects sine:<mean>:<amplitude>:<frequency>");
    return sine(parse_number(parts[0], "sine mean"), parse_number(parts[1], "sine amplitude"),
                parse_number(parts[2], "sine frequency"));
  }
  if (kind == "table") {
    std::filesystem::path path{std::string(rest)};
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    auto t = read_profile_table(path);
    return table(std::move(t.x), std::move(t.d));
  }
  throw DomainError("unknown profile kind '" + std::string(kind) + "'");
}

double DopingProfile::operator()(double x) const {
  return std::visit(
      [x](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return k.value;
        } else if constexpr (std::is_same_v<T, Sine>) {
          return k.mean + k.amplitude * std::sin(2.0 * std::numbers::pi * k.frequency * x);
        } else {
          return table_value(k, x);
        }
      },
      kind_);
}

double DopingProfile::antiderivative(double x) const {
  return std::visit(
      [x](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return k.value * x;
        } else if constexpr (std::is_same_v<T, Sine>) {
          if (k.frequency == 0.0) return k.mean * x;
          const double w = 2.0 * std::numbers::pi * k.frequency;
          return k.mean * x + k.amplitude * (1.0 - std::cos(w * x)) / w;
        } else {
          return table_antiderivative(k, x);
        }
      },
      kind_);
}

std::vector<double> DopingProfile::sample(const Grid& grid) const {
  std::vector<double> d(grid.nodes());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(grid.x(i));
  return d;
}

std::string DopingProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          os << "constant:" << k.value;
        } else if constexpr (std::is_same_v<T, Sine>) {
          os << "sine:" << k.mean << ':' << k.amplitude << ':' << k.frequency;
        } else {
          os << "table[" << k.x.size() << " rows]";
        }
      },
      kind_);
  return os.str();
}

}  // namespace ephydro
