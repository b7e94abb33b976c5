#pragma once

#include "ephydro/grid.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ephydro {

/// Background ion density D(x) on [0, 1] with 0 < D_* <= D(x) <= D^*.
///
/// Textual forms:
///   constant:<value>
///   sine:<mean>:<amplitude>:<frequency>     D = mean + amplitude * sin(2 pi frequency x)
///   table:<path>                            two-column CSV (x, D), linearly interpolated
class DopingProfile {
 public:
  struct Constant {
    double value;
  };
  struct Sine {
    double mean;
    double amplitude;
    double frequency;
  };
  struct Table {
    std::vector<double> x;
    std::vector<double> d;
  };
  using Kind = std::variant<Constant, Sine, Table>;

  static DopingProfile constant(double value);
  static DopingProfile sine(double mean, double amplitude, double frequency);
  static DopingProfile table(std::vector<double> x, std::vector<double> d);

  /// Parses the textual form. Relative table paths are resolved against `base_dir`.
  static DopingProfile parse(std::string_view spec, const std::filesystem::path& base_dir = {});

  double operator()(double x) const;
  /// int_0^x D(s) ds, exact for every kind.
  double antiderivative(double x) const;

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  const Kind& kind() const noexcept { return kind_; }

  std::vector<double> sample(const Grid& grid) const;
  std::string describe() const;

 private:
  explicit DopingProfile(Kind kind);

  Kind kind_;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

/// Reads a two-column (x, value) CSV on [0, 1]; a non-numeric first row is treated as a header.
DopingProfile::Table read_profile_table(const std::filesystem::path& path);

}  // namespace ephydro
