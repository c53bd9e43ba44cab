#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cfc/constants.hpp"
#include "cfc/errors.hpp"

namespace cfc {

enum class GridKind { linear_window, log_augmented };
enum class SpectrumQuantity { s_qq, s_ydet };
enum class SpectrumNormalization { snl_half, absolute };

/// Strictly increasing frequency grid in rad/s, described by the window it
/// was built from.
struct FrequencyGrid {
  std::vector<double> points;
  GridKind kind = GridKind::linear_window;
  double center = 0.0;
  double halfwidth = 0.0;

  static FrequencyGrid linear(double center, double halfwidth, int n) {
    if (n < 2) throw ValidationError("FrequencyGrid: need at least 2 points");
    FrequencyGrid g;
    g.kind = GridKind::linear_window;
    g.center = center;
    g.halfwidth = halfwidth;
    g.points.resize(n);
    for (int i = 0; i < n; ++i)
      g.points[i] = center - halfwidth + 2.0 * halfwidth * i / (n - 1);
    return g;
  }

  /// Linear core around the peak plus log-spaced wings out to wing_halfwidth
  /// on both sides; resolves a narrow line sitting on a broad pedestal.
  static FrequencyGrid log_augmented(double center, double core_halfwidth,
                                     int n_core, double wing_halfwidth,
                                     int n_wing) {
    if (!(wing_halfwidth > core_halfwidth))
      throw ValidationError("FrequencyGrid: wing must exceed core width");
    FrequencyGrid g = linear(center, core_halfwidth, n_core);
    g.kind = GridKind::log_augmented;
    g.halfwidth = wing_halfwidth;
    const double lg0 = std::log(core_halfwidth);
    const double lg1 = std::log(wing_halfwidth);
    for (int i = 1; i <= n_wing; ++i) {
      const double off = std::exp(lg0 + (lg1 - lg0) * i / n_wing);
      g.points.push_back(center + off);
      g.points.push_back(center - off);
    }
    std::sort(g.points.begin(), g.points.end());
    return g;
  }
};

/// Real spectrum sampled on a grid, tagged with what it is and how it is
/// normalized. snl-half spectra put the shot-noise floor at 0.5.
struct Spectrum {
  FrequencyGrid grid;
  std::vector<double> values;
  SpectrumNormalization normalization = SpectrumNormalization::snl_half;
  SpectrumQuantity quantity = SpectrumQuantity::s_ydet;
};

inline const char* to_string(SpectrumQuantity q) {
  return q == SpectrumQuantity::s_qq ? "S_QQ" : "S_Ydet";
}
inline const char* to_string(SpectrumNormalization n) {
  return n == SpectrumNormalization::snl_half ? "snl-half" : "absolute";
}

/// Writes `# quantity, normalization, n_points` then `freq_hz,value` rows.
/// The frequency axis is converted to ordinary frequency; absolute spectra
/// pick up the 2*pi Jacobian so values are densities per Hz, normalized
/// spectra are dimensionless and keep their values.
inline void write_spectrum_csv(const Spectrum& s, std::ostream& os) {
  os << "# " << to_string(s.quantity) << ", " << to_string(s.normalization)
     << ", " << s.values.size() << "\n";
  const bool jacobian = s.normalization == SpectrumNormalization::absolute;
  char buf[80];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double f_hz = s.grid.points[i] / two_pi;
    const double v = jacobian ? two_pi * s.values[i] : s.values[i];
    std::snprintf(buf, sizeof buf, "%.12e,%.12e\n", f_hz, v);
    os << buf;
  }
}

inline void write_spectrum_csv(const Spectrum& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_spectrum_csv(s, os);
}

inline Spectrum read_spectrum_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# ", 0) != 0)
    throw IoError("spectrum file: missing header line");
  Spectrum s;
  {
    std::string body = header.substr(2);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream hs(body);
    std::string quantity, normalization;
    std::size_t n = 0;
    if (!(hs >> quantity >> normalization >> n))
      throw IoError("spectrum file: malformed header");
    if (quantity == "S_QQ")
      s.quantity = SpectrumQuantity::s_qq;
    else if (quantity == "S_Ydet")
      s.quantity = SpectrumQuantity::s_ydet;
    else
      throw IoError("spectrum file: unknown quantity " + quantity);
    if (normalization == "snl-half")
      s.normalization = SpectrumNormalization::snl_half;
    else if (normalization == "absolute")
      s.normalization = SpectrumNormalization::absolute;
    else
      throw IoError("spectrum file: unknown normalization " + normalization);
  }
  const bool jacobian = s.normalization == SpectrumNormalization::absolute;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double f_hz = 0.0, v = 0.0;
    if (!(ls >> f_hz >> v)) throw IoError("spectrum file: malformed row");
    s.grid.points.push_back(two_pi * f_hz);
    s.values.push_back(jacobian ? v / two_pi : v);
  }
  if (s.values.size() < 2) throw IoError("spectrum file: too few rows");
  s.grid.center = 0.5 * (s.grid.points.front() + s.grid.points.back());
  s.grid.halfwidth = 0.5 * (s.grid.points.back() - s.grid.points.front());
  return s;
}

inline Spectrum read_spectrum_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_spectrum_csv(is);
}

} // namespace cfc
