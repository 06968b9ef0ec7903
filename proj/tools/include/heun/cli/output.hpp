#pragma once

// Flat-file artifacts: CSV with a header row and 17 significant digits, and
// a minimal SVG canvas in complex-plane coordinates (y axis pointing up).

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "heun/precision.hpp"

namespace heun::cli {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  /// Cells are pre-formatted; use cell() for numbers.
  void row(const std::vector<std::string>& cells);
  static std::string cell(double x);
  static std::string cell(long long x);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

class SvgCanvas {
 public:
  /// Maps the box [lo, hi] onto the canvas. With equal_aspect the height
  /// follows from the box shape; otherwise it is 0.6 width (function plots).
  SvgCanvas(Complex lo, Complex hi, int width = 640, bool equal_aspect = true);

  void dot(Complex z, double radius_px, const std::string& color);
  void polyline(const std::vector<Complex>& pts, const std::string& color, double width_px = 1.0,
                bool closed = false);
  void line(Complex a, Complex b, const std::string& color, double width_px = 1.0);
  void label(Complex z, const std::string& text, const std::string& color = "black");
  void title(const std::string& text);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double x(Complex z) const;
  double y(Complex z) const;

  Complex lo_;
  double sx_, sy_;
  int width_, height_;
  std::string body_;
};

/// Bounding box of a point set, padded by `pad` times its size.
std::pair<Complex, Complex> bounding_box(const std::vector<Complex>& pts, double pad = 0.05);

}  // namespace heun::cli
