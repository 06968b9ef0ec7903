#include "heun/cli/output.hpp"

#include <algorithm>
#include <cstdio>

#include "heun/error.hpp"

namespace heun::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error(ErrorCode::InvalidArgument, "CSV row has the wrong number of columns");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

std::string CsvWriter::cell(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string CsvWriter::cell(long long x) { return std::to_string(x); }

SvgCanvas::SvgCanvas(Complex lo, Complex hi, int width, bool equal_aspect)
    : lo_(lo), width_(width) {
  const double w = std::max(hi.real() - lo.real(), 1e-12);
  const double h = std::max(hi.imag() - lo.imag(), 1e-12);
  sx_ = width / w;
  if (equal_aspect) {
    sy_ = sx_;
    height_ = std::max(1, static_cast<int>(h * sy_ + 0.5));
  } else {
    height_ = static_cast<int>(0.6 * width);
    sy_ = height_ / h;
  }
}

double SvgCanvas::x(Complex z) const { return (z.real() - lo_.real()) * sx_; }
double SvgCanvas::y(Complex z) const { return height_ - (z.imag() - lo_.imag()) * sy_; }

void SvgCanvas::dot(Complex z, double r, const std::string& color) {
  body_ += "<circle cx=\"" + fmt(x(z)) + "\" cy=\"" + fmt(y(z)) + "\" r=\"" + fmt(r) +
           "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<Complex>& pts, const std::string& color, double w,
                         bool closed) {
  if (pts.empty()) return;
  body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    body_ += (i ? " " : "") + fmt(x(pts[i])) + "," + fmt(y(pts[i]));
  }
  body_ += "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(w) + "\"/>\n";
}

void SvgCanvas::line(Complex a, Complex b, const std::string& color, double w) {
  body_ += "<line x1=\"" + fmt(x(a)) + "\" y1=\"" + fmt(y(a)) + "\" x2=\"" + fmt(x(b)) +
           "\" y2=\"" + fmt(y(b)) + "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(w) +
           "\"/>\n";
}

void SvgCanvas::label(Complex z, const std::string& text, const std::string& color) {
  body_ += "<text x=\"" + fmt(x(z) + 4) + "\" y=\"" + fmt(y(z) - 4) +
           "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" + color + "\">" +
           escape(text) + "</text>\n";
}

void SvgCanvas::title(const std::string& text) {
  body_ += "<title>" + escape(text) + "</title>\n";
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) +
         "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) +
         " " + std::to_string(height_) + "\">\n<rect width=\"100%\" height=\"100%\" " +
         "fill=\"white\"/>\n" + body_ + "</svg>\n";
}

void SvgCanvas::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << str();
}

std::pair<Complex, Complex> bounding_box(const std::vector<Complex>& pts, double pad) {
  if (pts.empty()) return {Complex(-1, -1), Complex(1, 1)};
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
  for (const Complex z : pts) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const double m = pad * std::max({x1 - x0, y1 - y0, 1e-6});
  return {Complex(x0 - m, y0 - m), Complex(x1 + m, y1 + m)};
}

}  // namespace heun::cli
