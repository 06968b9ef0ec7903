#include "heun/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "heun/cauchy.hpp"
#include "heun/cli/output.hpp"
#include "heun/error.hpp"
#include "heun/measure.hpp"
#include "heun/special.hpp"
#include "heun/spectral.hpp"
#include "heun/takemura.hpp"

namespace heun::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kOdePoints = 50;
constexpr const char* kColors[3] = {"#1f77b4", "#d62728", "#2ca02c"};

using Row = std::vector<std::string>;

std::string path_in(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out) / file).string();
}

Report start(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out);
  Report r;
  r.command = name;
  r.config = cfg.describe();
  r.versions = version_info();
  return r;
}

Report finish(Report r, const RunConfig& cfg) {
  std::ofstream out(path_in(cfg, r.command + "_report.json"));
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write report into " + cfg.out);
  out << to_json_text(r);
  return r;
}

RootOptions root_options(const RunConfig& cfg) {
  RootOptions o;
  o.tol = cfg.tol;
  o.threads = cfg.threads;
  return o;
}

std::string cell(double x) { return CsvWriter::cell(x); }
std::string cell(long long x) { return CsvWriter::cell(x); }
std::string cell(int x) { return CsvWriter::cell(static_cast<long long>(x)); }
std::string cell(std::size_t x) { return CsvWriter::cell(static_cast<long long>(x)); }

double percentile95(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
  return v[idx];
}

void draw_roots(SvgCanvas& svg, const CubicConfig& c) {
  for (std::size_t i = 0; i < 3; ++i) {
    svg.dot(c.root(i), 4.0, "black");
    svg.label(c.root(i), "a" + std::to_string(i + 1));
  }
}

void draw_hull(SvgCanvas& svg, const CubicConfig& c) {
  svg.polyline(convex_hull(c).vertices(), "#999999", 1.0, true);
}

std::vector<Complex> ellipse_outline(const EllipseGeometry& e, Complex shift, int samples = 256) {
  std::vector<Complex> pts;
  pts.reserve(samples);
  for (int k = 0; k < samples; ++k) pts.push_back(e.boundary(2.0 * kPi * k / samples) + shift);
  return pts;
}

}  // namespace

std::vector<Complex> exterior_points(const CubicConfig& c, int count, double pad) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one exterior point");
  const Complex g = c.centroid();
  std::vector<SupportRegion> regions;
  std::vector<Complex> shifts;
  double radius = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const ShiftedCubic sc = shift_to_root(c, i);
    regions.emplace_back(LimitProfile(sc));
    shifts.push_back(sc.shift);
    const SupportRegion& reg = regions.back();
    if (reg.degenerate()) {
      radius = std::max({radius, std::abs(reg.segment().e1 + sc.shift - g),
                         std::abs(reg.segment().e2 + sc.shift - g)});
    } else {
      const EllipseGeometry& e = reg.ellipse();
      radius = std::max(radius, std::abs(e.center + sc.shift - g) + e.semi_major);
    }
  }
  radius += pad * c.diameter();
  std::vector<Complex> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const Complex z = g + std::polar(radius, 2.0 * kPi * (k + 0.5) / count);
    for (std::size_t i = 0; i < 3; ++i) {
      if (!regions[i].outside(z - shifts[i], 1e-8)) {
        throw Error(ErrorCode::PointInsideEllipse, "exterior circle meets a support region");
      }
    }
    pts.push_back(z);
  }
  return pts;
}

LowDegreePoly derivative_poly(const CubicConfig& c) {
  const auto& a = c.roots();
  const Complex s1 = a[0] + a[1] + a[2];
  const Complex s2 = a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
  const Complex k = c.leading();
  return {3.0 * k, -2.0 * k * s1, k * s2};
}

Report cmd_spectral(const RunConfig& cfg) {
  Report r = start("spectral", cfg);
  const CubicConfig c = cfg.cubic();
  const ShiftedCubic sc = shift_to_root(c, 0);
  const SpectrumResult res = compute_spectrum(c, cfg.p_choice(), cfg.n, 0, root_options(cfg));
  const EmpiricalMeasure& mu = res.measure;
  const ConvexHull hull = convex_hull(c);

  CsvWriter roots(path_in(cfg, "spectral_roots.csv"), {"re", "im", "multiplicity", "residual"});
  CsvWriter stieltjes(path_in(cfg, "stieltjes_roots.csv"), {"lambda_index", "re", "im"});
  const StieltjesSolver solver(c, cfg.p_choice(), cfg.n);
  int total = 0, failures = 0;
  double op = 0.0, aberth = 0.0, hull_sp = 0.0, hull_s = 0.0;
  std::vector<Complex> s_roots;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    roots.row({cell(mu.atoms[k].real()), cell(mu.atoms[k].imag()), cell(mu.multiplicity[k]),
               cell(mu.residual[k])});
    total += mu.multiplicity[k];
    aberth = std::max(aberth, mu.residual[k]);
    hull_sp = std::max(hull_sp, hull.distance(mu.atoms[k]));
    const PolynomialSolution s = recover_solution(res.matrix, mu.precise[k] - to_quad(sc.shift));
    op = std::max(op, operator_residual(sc, res.matrix.p(), s));
    std::vector<Complex> zs;
    try {
      zs = solver.roots(mu.precise[k]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RootFindingFailure) throw;
      ++failures;
      continue;
    }
    for (const Complex z : zs) {
      stieltjes.row({cell(k), cell(z.real()), cell(z.imag())});
      hull_s = std::max(hull_s, hull.distance(z));
      s_roots.push_back(z);
    }
  }
  if (failures > 0) {
    r.warnings.push_back(std::to_string(failures) +
                         " Stieltjes polynomials did not yield certified roots");
  }
  r.info("root_count", total);
  r.check_less("root_count_error", std::abs(total - (cfg.n + 1)), 0.5);
  r.check_less("max_operator_residual", op, 1e-8);
  r.check_less("spectral_hull_distance", hull_sp, 1e-6);
  r.check_less("stieltjes_root_failures", failures, 0.5);
  r.check_less("stieltjes_hull_distance", hull_s, 1e-6);
  r.info("max_aberth_residual", aberth);
  r.info("coefficient_limit_deviation", coefficient_limit_deviation(res.matrix));

  std::vector<Complex> all(mu.atoms);
  all.insert(all.end(), c.roots().begin(), c.roots().end());
  const auto [lo, hi] = bounding_box(all, 0.1);
  SvgCanvas svg(lo, hi);
  svg.title("Spectral roots, n = " + std::to_string(cfg.n));
  draw_hull(svg, c);
  for (const Complex z : s_roots) svg.dot(z, 1.0, "#bbbbbb");
  for (const Complex z : mu.atoms) svg.dot(z, 2.5, kColors[0]);
  draw_roots(svg, c);
  svg.save(path_in(cfg, "spectral_roots.svg"));
  return finish(std::move(r), cfg);
}

Report cmd_ellipse(const RunConfig& cfg) {
  Report r = start("ellipse", cfg);
  const CubicConfig c = cfg.cubic();
  CsvWriter table(path_in(cfg, "ellipses.csv"),
                  {"index", "degenerate", "center_re", "center_im", "a", "b", "c", "f1_re",
                   "f1_im", "f2_re", "f2_im"});
  std::vector<Complex> extent(c.roots().begin(), c.roots().end());
  std::vector<std::vector<Complex>> outlines(3);
  std::vector<std::array<Complex, 2>> foci(3);
  std::vector<ComplexSegment> flat(3);
  std::vector<bool> degenerate(3, false);
  const double nan = std::nan("");

  for (std::size_t i = 0; i < 3; ++i) {
    const ShiftedCubic sc = shift_to_root(c, i);
    const SupportRegion reg{LimitProfile(sc)};
    const std::string name = "E" + std::to_string(i + 1);
    if (reg.degenerate()) {
      degenerate[i] = true;
      flat[i] = {reg.segment().e1 + sc.shift, reg.segment().e2 + sc.shift};
      r.warnings.push_back(name + " degenerates to a segment: the origin root lies between the "
                                  "other two on a line");
      table.row({cell(i + 1), "1", cell(flat[i].midpoint().real()),
                 cell(flat[i].midpoint().imag()), cell(std::abs(flat[i].half())), cell(0.0),
                 cell(nan), cell(nan), cell(nan), cell(nan), cell(nan)});
      continue;
    }
    const EllipseGeometry& e = reg.ellipse();
    const auto others = sc.other_roots();
    const Complex f1 = e.f1 + sc.shift, f2 = e.f2 + sc.shift;
    const Complex o1 = others[0] + sc.shift, o2 = others[1] + sc.shift;
    const double foci_err = std::min(std::max(std::abs(f1 - o1), std::abs(f2 - o2)),
                                     std::max(std::abs(f1 - o2), std::abs(f2 - o1)));
    double form_res = std::abs(ellipse_form_residual(e, 0.0));
    for (int k = 0; k < 100; ++k) {
      form_res = std::max(form_res, std::abs(ellipse_form_residual(e, e.boundary(2.0 * kPi * k / 100))));
    }
    const Complex center = e.center + sc.shift;
    r.info(name + ".a", e.semi_major);
    r.info(name + ".b", e.semi_minor);
    r.info(name + ".c", e.eccentricity);
    r.info(name + ".center_re", center.real());
    r.info(name + ".center_im", center.imag());
    r.info(name + ".f1_re", f1.real());
    r.info(name + ".f1_im", f1.imag());
    r.info(name + ".f2_re", f2.real());
    r.info(name + ".f2_im", f2.imag());
    r.check_less(name + ".foci_error", foci_err, 1e-10);
    r.check_less(name + ".form_residual", form_res, 1e-10);
    table.row({cell(i + 1), "0", cell(center.real()), cell(center.imag()), cell(e.semi_major),
               cell(e.semi_minor), cell(e.eccentricity), cell(f1.real()), cell(f1.imag()),
               cell(f2.real()), cell(f2.imag())});
    outlines[i] = ellipse_outline(e, sc.shift);
    foci[i] = {f1, f2};
    extent.insert(extent.end(), outlines[i].begin(), outlines[i].end());
  }

  // A few chords of the family for the first root.
  const ShiftedCubic sc0 = shift_to_root(c, 0);
  const LimitProfile lp0(sc0);
  CsvWriter segs(path_in(cfg, "segments.csv"), {"theta", "e1_re", "e1_im", "e2_re", "e2_im"});
  std::vector<ComplexSegment> chords;
  for (int k = 0; k <= 10; ++k) {
    const double theta = k / 10.0;
    const ComplexSegment s = segment_at_theta(lp0, theta);
    const ComplexSegment g{s.e1 + sc0.shift, s.e2 + sc0.shift};
    chords.push_back(g);
    segs.row({cell(theta), cell(g.e1.real()), cell(g.e1.imag()), cell(g.e2.real()),
              cell(g.e2.imag())});
    extent.push_back(g.e1);
    extent.push_back(g.e2);
  }

  const auto [lo, hi] = bounding_box(extent, 0.08);
  SvgCanvas svg(lo, hi);
  svg.title("Ellipses E1, E2, E3 and chords of the first family");
  for (const auto& g : chords) svg.line(g.e1, g.e2, "#888888", 0.8);
  for (std::size_t i = 0; i < 3; ++i) {
    if (degenerate[i]) {
      svg.line(flat[i].e1, flat[i].e2, kColors[i], 2.0);
      continue;
    }
    svg.polyline(outlines[i], kColors[i], 1.5, true);
    for (const Complex f : foci[i]) svg.dot(f, 2.0, kColors[i]);
    svg.label(outlines[i][64], "E" + std::to_string(i + 1), kColors[i]);
  }
  draw_roots(svg, c);
  svg.save(path_in(cfg, "ellipses.svg"));
  return finish(std::move(r), cfg);
}

Report cmd_verify_ode(const RunConfig& cfg) {
  Report r = start("verify-ode", cfg);
  struct Case {
    std::string name;
    CubicConfig cubic;
  };
  const std::vector<Case> cases{{"q", cfg.cubic()},
                                {"symmetric", CubicConfig(0.0, 0.5, -0.5)}};
  CsvWriter out(path_in(cfg, "verify_ode.csv"), {"cubic", "shift", "re", "im", "residual"});
  for (const Case& cs : cases) {
    const auto pts = exterior_points(cs.cubic, kOdePoints);
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const ShiftedCubic sc = shift_to_root(cs.cubic, i);
      for (const Complex z : pts) {
        const double res = std::abs(heun_ode_residual(sc, z - sc.shift).residual);
        worst = std::max(worst, res);
        out.row({cs.name, cell(i + 1), cell(z.real()), cell(z.imag()), cell(res)});
      }
    }
    r.check_less(cs.name + ".max_residual", worst, 1e-8);
  }

  // Negative control: the same check with a perturbed Q'' coefficient.
  std::mt19937_64 gen(cfg.seed);
  std::uniform_real_distribution<double> dist(0.1, 0.3);
  const double delta = dist(gen);
  HeunCoefficients wrong;
  wrong.c2 *= 1.0 + delta;
  const ShiftedCubic sc = shift_to_root(cases[0].cubic, 0);
  double control = 0.0;
  for (const Complex z : exterior_points(cases[0].cubic, kOdePoints)) {
    control = std::max(control, std::abs(heun_ode_residual(sc, z - sc.shift, wrong).residual));
  }
  r.info("negative_control.delta", delta);
  r.check_greater("negative_control.max_residual", control, 1e-3);
  return finish(std::move(r), cfg);
}

Report cmd_special(const RunConfig& cfg) {
  Report r = start("special", cfg);
  const auto rows = solve_special_ode(cfg.s_min, cfg.s_max, cfg.samples);
  CsvWriter out(path_in(cfg, "special.csv"), {"s", "ode", "quadrature", "deviation"});
  double dev = 0.0;
  int violations = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double d = std::abs(rows[k].ode - rows[k].quadrature);
    dev = std::max(dev, d);
    if (k > 0 && !(rows[k].quadrature < rows[k - 1].quadrature)) ++violations;
    out.row({cell(rows[k].s), cell(rows[k].ode), cell(rows[k].quadrature), cell(d)});
  }
  r.check_less("max_ode_quadrature_deviation", dev, 1e-6);
  r.check_less("monotonicity_violations", violations, 0.5);

  double rel = 0.0, ode = 0.0;
  for (const double s : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    rel = std::max(rel, check_special_relations(s).max_abs());
    ode = std::max(ode, std::abs(special_ode_residual(s)));
  }
  r.check_less("max_relation_residual", rel, 1e-8);
  r.check_less("max_equation_residual", ode, 1e-8);
  r.check_greater("divergence_gap", I_nu_special(1e-6, 0).value - I_nu_special(1e-2, 0).value,
                  1.0);
  r.check_less("y1_homogeneous_residual", std::abs(y1_homogeneous_check(1.0)), 1e-6);
  r.info("y1_modulus_reading_residual",
         std::abs(y1_homogeneous_check(1.0, EllipticConvention::Modulus)));

  const auto curve = solve_special_ode(cfg.s_min, cfg.s_max, 200);
  std::vector<Complex> line, box;
  for (const auto& row : curve) line.emplace_back(row.s, row.ode);
  box = line;
  for (const auto& row : rows) box.emplace_back(row.s, row.quadrature);
  const auto [lo, hi] = bounding_box(box, 0.05);
  SvgCanvas svg(lo, hi, 640, false);
  svg.title("I_0(s): initial-value solution (curve) and quadrature (dots)");
  svg.polyline(line, kColors[0], 1.5);
  for (const auto& row : rows) svg.dot(Complex(row.s, row.quadrature), 3.0, kColors[1]);
  svg.save(path_in(cfg, "special.svg"));
  return finish(std::move(r), cfg);
}

Report cmd_takemura(const RunConfig& cfg) {
  Report r = start("takemura", cfg);
  const CubicConfig c = cfg.cubic();
  TraceOptions to;
  to.step = cfg.step;
  const TakemuraTree tree = trace_tree(c, to);
  CsvWriter out(path_in(cfg, "takemura_tree.csv"), {"curve", "index", "re", "im"});
  std::vector<Complex> extent(c.roots().begin(), c.roots().end());
  for (const TracedCurve& cv : tree.curves) {
    for (std::size_t k = 0; k < cv.points.size(); ++k) {
      out.row({cell(cv.root + 1), cell(k), cell(cv.points[k].real()), cell(cv.points[k].imag())});
    }
    const std::string name = "gamma" + std::to_string(cv.root + 1);
    r.info(name + ".vertices", static_cast<double>(cv.points.size()));
    r.info(name + ".straightness",
           hausdorff_distance(cv.points, {c.root(cv.root), tree.common_point}));
  }
  r.info("common_point_re", tree.common_point.real());
  r.info("common_point_im", tree.common_point.imag());
  r.info("mismatch_radius", tree.mismatch_radius);
  r.info("step", tree.curves.front().step);

  std::vector<Complex> atoms;
  if (cfg.overlay) {
    atoms = compute_spectrum(c, cfg.p_choice(), cfg.n, 0, root_options(cfg)).measure.atoms;
    CsvWriter ov(path_in(cfg, "takemura_overlay.csv"), {"re", "im", "distance"});
    std::vector<double> dist;
    for (const Complex z : atoms) {
      dist.push_back(distance_to_tree(tree, z));
      ov.row({cell(z.real()), cell(z.imag()), cell(dist.back())});
    }
    const auto near = std::count_if(dist.begin(), dist.end(), [](double d) { return d < 0.05; });
    r.check_at_least("overlay.fraction_within_0.05",
                     static_cast<double>(near) / static_cast<double>(dist.size()), 0.95);
    r.info("overlay.p95_distance", percentile95(dist));
    extent.insert(extent.end(), atoms.begin(), atoms.end());
  }

  const auto [lo, hi] = bounding_box(extent, 0.1);
  SvgCanvas svg(lo, hi);
  svg.title("Limiting root tree");
  draw_hull(svg, c);
  for (const TracedCurve& cv : tree.curves) svg.polyline(cv.points, kColors[cv.root], 1.5);
  for (const Complex z : atoms) svg.dot(z, 2.0, "#555555");
  svg.dot(tree.common_point, 3.0, "orange");
  draw_roots(svg, c);
  svg.save(path_in(cfg, "takemura_tree.svg"));
  return finish(std::move(r), cfg);
}

Report cmd_balayage(const RunConfig& cfg) {
  Report r = start("balayage", cfg);
  const CubicConfig c = cfg.cubic();
  const auto pts = exterior_points(c, cfg.points);

  std::array<ShiftedCubic, 3> shifts{shift_to_root(c, 0), shift_to_root(c, 1), shift_to_root(c, 2)};
  double pairwise = 0.0;
  for (const Complex z : pts) {
    std::array<Complex, 3> cm;
    for (std::size_t i = 0; i < 3; ++i) cm[i] = cauchy_M(LimitProfile(shifts[i]), z - shifts[i].shift);
    pairwise = std::max({pairwise, std::abs(cm[0] - cm[1]), std::abs(cm[0] - cm[2]),
                         std::abs(cm[1] - cm[2])});
  }
  r.check_less("pairwise_M_agreement", pairwise, 1e-7);

  const PChoice main = cfg.p_choice();
  const PChoice alt = cfg.p ? PChoice::lame() : PChoice::explicit_poly(derivative_poly(c));
  CsvWriter out(path_in(cfg, "balayage.csv"),
                {"n", "point", "re", "im", "cauchy_deviation", "potential_deviation",
                 "p_independence"});
  std::vector<double> cauchy_dev, pind_dev;
  for (const int n : cfg.ns) {
    const EmpiricalMeasure mu = compute_spectrum(c, main, n, 0, root_options(cfg)).measure;
    const EmpiricalMeasure mu2 = compute_spectrum(c, alt, n, 0, root_options(cfg)).measure;
    const auto dev = compare_transforms(mu, shifts[0], pts);
    double cmax = 0.0, pmax = 0.0, imax = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double ind = std::abs(cauchy_transform_empirical(mu, pts[k]) -
                                  cauchy_transform_empirical(mu2, pts[k]));
      cmax = std::max(cmax, dev[k].cauchy);
      pmax = std::max(pmax, dev[k].potential);
      imax = std::max(imax, ind);
      out.row({cell(n), cell(k), cell(pts[k].real()), cell(pts[k].imag()), cell(dev[k].cauchy),
               cell(dev[k].potential), cell(ind)});
    }
    const std::string tag = "n" + std::to_string(n);
    r.info(tag + ".cauchy_deviation", cmax);
    r.info(tag + ".potential_deviation", pmax);
    r.info(tag + ".p_independence", imax);
    cauchy_dev.push_back(cmax);
    pind_dev.push_back(imax);
  }
  auto increases = [](const std::vector<double>& v) {
    int count = 0;
    for (std::size_t k = 1; k < v.size(); ++k) count += v[k] >= v[k - 1];
    return count;
  };
  r.check_less("cauchy_deviation_increases", increases(cauchy_dev), 0.5);
  r.check_less("cauchy_deviation_final", cauchy_dev.back(), 0.05);
  r.check_less("p_independence_increases", increases(pind_dev), 0.5);
  r.check_less("p_independence_final", pind_dev.back(), 0.05);
  return finish(std::move(r), cfg);
}

Report cmd_all(const RunConfig& cfg) {
  Report r = start("all", cfg);
  for (const std::string& name : command_names()) {
    if (name != "all") r.absorb(run_command(name, cfg));
  }
  return finish(std::move(r), cfg);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectral", "ellipse",  "verify-ode", "special",
                                              "takemura", "balayage", "all"};
  return names;
}

Report run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "spectral") return cmd_spectral(cfg);
  if (name == "ellipse") return cmd_ellipse(cfg);
  if (name == "verify-ode") return cmd_verify_ode(cfg);
  if (name == "special") return cmd_special(cfg);
  if (name == "takemura") return cmd_takemura(cfg);
  if (name == "balayage") return cmd_balayage(cfg);
  if (name == "all") return cmd_all(cfg);
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + name + "'");
}

}  // namespace heun::cli
