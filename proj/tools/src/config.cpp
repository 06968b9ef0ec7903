#include "heun/cli/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "heun/error.hpp"

namespace heun::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) parts.push_back(s.substr(start, i - start));
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view key) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    bad("cannot parse '" + std::string(s) + "' as a number for " + std::string(key));
  }
  return x;
}

template <class Int>
Int parse_int(std::string_view s, std::string_view key) {
  s = trim(s);
  Int x{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    bad("cannot parse '" + std::string(s) + "' as an integer for " + std::string(key));
  }
  return x;
}

bool parse_bool(std::string_view s, std::string_view key) {
  s = trim(s);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  bad("cannot parse '" + std::string(s) + "' as a boolean for " + std::string(key));
}

std::string complex_text(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Complex parse_complex(std::string_view text) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != 2) bad("expected re,im but got '" + std::string(text) + "'");
  return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
}

LowDegreePoly parse_p(std::string_view text) {
  const auto parts = split_ws(trim(text));
  if (parts.size() != 3) bad("expected three complex coefficients 'a,b a,b a,b' for P");
  return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "q_roots") {
    const auto parts = split_ws(value);
    if (parts.size() != 3) bad("q_roots needs three values re,im");
    for (std::size_t i = 0; i < 3; ++i) cfg.roots[i] = parse_complex(parts[i]);
  } else if (key == "p") {
    cfg.p = parse_p(value);
  } else if (key == "lame") {
    if (parse_bool(value, key)) cfg.p.reset();
  } else if (key == "n") {
    cfg.n = parse_int<int>(value, key);
  } else if (key == "tol") {
    cfg.tol = parse_double(value, key);
  } else if (key == "step") {
    cfg.step = parse_double(value, key);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "threads") {
    cfg.threads = parse_int<int>(value, key);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(value, key);
  } else if (key == "s_min") {
    cfg.s_min = parse_double(value, key);
  } else if (key == "s_max") {
    cfg.s_max = parse_double(value, key);
  } else if (key == "samples") {
    cfg.samples = parse_int<int>(value, key);
  } else if (key == "points") {
    cfg.points = parse_int<int>(value, key);
  } else if (key == "ns") {
    cfg.ns.clear();
    for (auto part : split(value, ',')) cfg.ns.push_back(parse_int<int>(part, key));
  } else if (key == "overlay") {
    cfg.overlay = parse_bool(value, key);
  } else {
    bad("unknown configuration key '" + std::string(key) + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      bad(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, text.substr(0, eq), text.substr(eq + 1));
  }
}

CubicConfig RunConfig::cubic() const { return CubicConfig(roots[0], roots[1], roots[2]); }

PChoice RunConfig::p_choice() const { return p ? PChoice::explicit_poly(*p) : PChoice::lame(); }

void RunConfig::validate() const {
  (void)cubic();
  if (n < 1) bad("n must be at least 1");
  if (!(tol > 0.0)) bad("tol must be positive");
  if (!(step >= 0.0)) bad("step must be non-negative");
  if (threads < 1) bad("threads must be at least 1");
  if (!(s_min > 0.0) || !(s_max > s_min)) bad("need 0 < s_min < s_max");
  if (samples < 2) bad("samples must be at least 2");
  if (points < 1) bad("points must be at least 1");
  if (ns.empty()) bad("ns must list at least one degree");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) bad("every entry of ns must be at least 1");
    if (i > 0 && ns[i] <= ns[i - 1]) bad("ns must be strictly increasing");
  }
  if (out.empty()) bad("out must name a directory");
}

std::map<std::string, std::string> RunConfig::describe() const {
  std::map<std::string, std::string> m;
  m["q_roots"] = complex_text(roots[0]) + " " + complex_text(roots[1]) + " " + complex_text(roots[2]);
  if (p) {
    m["p"] = complex_text(p->alpha) + " " + complex_text(p->beta) + " " + complex_text(p->gamma);
  } else {
    m["lame"] = "true";
  }
  m["n"] = std::to_string(n);
  m["tol"] = format_double(tol);
  m["step"] = format_double(step);
  m["out"] = out;
  m["threads"] = std::to_string(threads);
  m["seed"] = std::to_string(seed);
  m["s_min"] = format_double(s_min);
  m["s_max"] = format_double(s_max);
  m["samples"] = std::to_string(samples);
  m["points"] = std::to_string(points);
  std::string list;
  for (std::size_t i = 0; i < ns.size(); ++i) list += (i ? "," : "") + std::to_string(ns[i]);
  m["ns"] = list;
  m["overlay"] = overlay ? "true" : "false";
  return m;
}

}  // namespace heun::cli
