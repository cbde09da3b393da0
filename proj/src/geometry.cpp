#include "emw/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <vector>

#include "emw/error.hpp"

namespace emw {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Minimize f over [lo, hi] by golden-section search; returns the minimizing abscissa.
template <class F>
double golden_min(F&& f, double lo, double hi, int iters = 80) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters && hi - lo > 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// Distance from (rho, z) to a parametric meridian curve c(t) sampled at sorted ts.
template <class Curve>
double curve_distance(Curve&& curve, const std::vector<double>& ts, double rho, double z) {
  auto d2 = [&](double t) {
    const auto [cr, cz] = curve(t);
    return (rho - cr) * (rho - cr) + (z - cz) * (z - cz);
  };
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double v = d2(ts[k]);
    if (v < best_d2) {
      best_d2 = v;
      best = k;
    }
  }
  const double lo = ts[best == 0 ? 0 : best - 1];
  const double hi = ts[best + 1 == ts.size() ? best : best + 1];
  if (hi > lo) best_d2 = std::min(best_d2, d2(golden_min(d2, lo, hi)));
  return std::sqrt(best_d2);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

double segment_distance(double rho, double z, double s_lo, double s_hi) {
  const double s = std::clamp(rho, s_lo, s_hi);
  return std::hypot(rho - s, z);
}

// Half ellipse rho = A cos t, z = alpha sin t, t in [0, pi/2], plus the apron a <= rho <= A.
double spheroid_cut_distance(double rho, double z, double a, double alpha) {
  const double big_a = std::sqrt(a * a + alpha * alpha);
  static const std::vector<double> ts = linspace(0.0, 0.5 * kPi, 129);
  auto arc = [&](double t) { return std::array<double, 2>{big_a * std::cos(t), alpha * std::sin(t)}; };
  const double d_arc = curve_distance(arc, ts, rho, z);
  return std::min(d_arc, segment_distance(rho, z, a, big_a));
}

// Meridian curve p = chi(q), q in [0, a], at fixed phi.
double chi_curve_distance(const BranchCut& cut, double rho, double z, double phi, double a) {
  auto curve = [&](double q) {
    const double p = cut.cut_function(q, phi);
    const double r2 = std::max(0.0, (p * p + a * a) * (a * a - q * q));
    return std::array<double, 2>{std::sqrt(r2) / a, p * q / a};
  };
  std::vector<double> ts = linspace(0.0, a, 257);
  const double eps = cut.kind() == CutKind::SmoothSpheroid ? cut.epsilon() : 1e-6 * a;
  const double x_max = std::atan(a / eps);
  for (int k = 1; k < 128; ++k) ts.push_back(eps * std::tan(x_max * k / 128.0));
  for (int k = 1; k <= 40; ++k) ts.push_back(a * std::pow(10.0, -k / 4.0));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return curve_distance(curve, ts, rho, z);
}

// Slope of chi in q, used to turn |p - chi| into a distance estimate.
double chi_slope(const BranchCut& cut, double q, double phi, double a) {
  switch (cut.kind()) {
    case CutKind::FlatDisk:
    case CutKind::UpperSpheroid:
    case CutKind::LowerSpheroid:
      return 0.0;
    case CutKind::SmoothSpheroid: {
      const double eps = cut.epsilon();
      return cut.alpha() * (2.0 / kPi) * eps / (eps * eps + q * q);
    }
    case CutKind::Custom: {
      const double h = 1e-6 * a;
      return (cut.cut_function(q + h, phi) - cut.cut_function(q - h, phi)) / (2.0 * h);
    }
  }
  return 0.0;
}

void throw_on_cut(const Vec3& r, const char* what) {
  throw Error(ErrorCode::OnCut, std::string(what) + " at (" + std::to_string(r.x) + ", " +
                                    std::to_string(r.y) + ", " + std::to_string(r.z) + ")");
}

// Throws OnCut when r lies within the cut tolerance; h = p - chi(q) on the continued sheet.
void check_on_cut(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg, double p, double q,
                  double h) {
  const double a = cfg.a_len();
  const double tol = cut.tolerance() * a;
  const Cylindrical cyl = to_cylindrical(r, cfg);
  if (std::hypot(cyl.rho - a, cyl.z) < tol) throw_on_cut(r, "point on the branch circle");
  const bool spheroid = cut.kind() == CutKind::UpperSpheroid || cut.kind() == CutKind::LowerSpheroid;
  if (spheroid) {
    const double big_a = std::sqrt(a * a + cut.alpha() * cut.alpha());
    if (segment_distance(cyl.rho, cyl.z, a, big_a) < tol) throw_on_cut(r, "point on the apron");
  }
  const double d2 = p * p + q * q;
  const double gp2 = (p * p + a * a) / d2;
  const double gq2 = std::max(0.0, a * a - q * q) / d2;
  const double slope = chi_slope(cut, q, cyl.phi, a);
  const double estimate = std::fabs(h) / std::sqrt(gp2 + slope * slope * gq2);
  if (estimate < 1e3 * tol && cut_distance(cut, r, cfg) < tol) throw_on_cut(r, "point on the cut");
}

}  // namespace

SourceConfig::SourceConfig(const Vec3& a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!is_finite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "source parameters must be finite");
  }
  a_len_ = norm(a);
  if (!(a_len_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "|a| must be positive");
  if (!(std::fabs(b) > a_len_)) throw Error(ErrorCode::InvalidArgument, "|b| must exceed |a|");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "propagation speed must be positive");
  axis_ = a / a_len_;
  const Vec3 helper = std::fabs(axis_.x) > 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
  e1_ = normalized(helper - dot(helper, axis_) * axis_);
  e2_ = cross(axis_, e1_);
}

Cylindrical to_cylindrical(const Vec3& r, const SourceConfig& cfg) {
  const double x1 = dot(r, cfg.e1());
  const double x2 = dot(r, cfg.e2());
  double phi = std::atan2(x2, x1);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return {std::hypot(x1, x2), phi, dot(r, cfg.axis())};
}

Vec3 e_rho(double phi, const SourceConfig& cfg) {
  return std::cos(phi) * cfg.e1() + std::sin(phi) * cfg.e2();
}

Vec3 e_phi(double phi, const SourceConfig& cfg) {
  return -std::sin(phi) * cfg.e1() + std::cos(phi) * cfg.e2();
}

Vec3 from_cylindrical(const Cylindrical& c, const SourceConfig& cfg) {
  return c.rho * e_rho(c.phi, cfg) + c.z * cfg.axis();
}

PrincipalDistance complex_distance_principal(const Vec3& r, const SourceConfig& cfg) {
  const Vec3& a = cfg.a();
  const double wr = dot(r, r) - dot(a, a);
  const double wi = -2.0 * dot(a, r);
  PrincipalDistance out{};
  principal_sqrt(wr, wi, out.p, out.q);
  out.sigma = cplx(out.p, -out.q);
  out.on_reference_cut = out.p == 0.0 && out.q > 0.0;
  return out;
}

OblateCoords to_oblate(const Vec3& r, const SourceConfig& cfg) {
  const PrincipalDistance pd = complex_distance_principal(r, cfg);
  return {pd.p, pd.q, to_cylindrical(r, cfg).phi};
}

Vec3 from_oblate(const OblateCoords& oc, const SourceConfig& cfg, Side side) {
  const double a = cfg.a_len();
  if (!(std::fabs(oc.q) <= a)) throw Error(ErrorCode::InvalidArgument, "|q| must not exceed |a|");
  const double rho = std::sqrt((oc.p * oc.p + a * a) * (a * a - oc.q * oc.q)) / a;
  const double z = std::fabs(oc.p * oc.q) / a;
  return from_cylindrical({rho, oc.phi, side == Side::Upper ? z : -z}, cfg);
}

Vec3 spheroid_point(double alpha, double q, double phi, const SourceConfig& cfg) {
  const double a = cfg.a_len();
  if (!(std::fabs(q) <= a)) throw Error(ErrorCode::InvalidArgument, "|q| must not exceed |a|");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be non-negative");
  const double rho = std::sqrt((alpha * alpha + a * a) * (a * a - q * q)) / a;
  return from_cylindrical({rho, phi, alpha * q / a}, cfg);
}

double smooth_cut_function(double q, double alpha, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing width must be positive");
  return alpha * (2.0 / kPi) * std::atan(q / eps);
}

BranchCut::BranchCut(CutKind kind, double alpha, double eps, std::shared_ptr<const CutFunction> chi)
    : kind_(kind), alpha_(alpha), eps_(eps), chi_(std::move(chi)) {}

BranchCut BranchCut::flat_disk() { return BranchCut(CutKind::FlatDisk, 0.0, 0.0, nullptr); }

BranchCut BranchCut::upper_spheroid(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  return BranchCut(CutKind::UpperSpheroid, alpha, 0.0, nullptr);
}

BranchCut BranchCut::lower_spheroid(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  return BranchCut(CutKind::LowerSpheroid, alpha, 0.0, nullptr);
}

BranchCut BranchCut::smooth_spheroid(double alpha, double eps) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  return BranchCut(CutKind::SmoothSpheroid, alpha, eps, nullptr);
}

BranchCut BranchCut::custom(CutFunction chi, double a_len) {
  if (!chi) throw Error(ErrorCode::InvalidArgument, "custom cut needs a function");
  if (!(a_len > 0.0)) throw Error(ErrorCode::InvalidArgument, "|a| must be positive");
  for (int i = 0; i <= 40; ++i) {
    const double q = a_len * i / 40.0;
    for (int j = 0; j < 16; ++j) {
      const double phi = kTwoPi * j / 16.0;
      const double v = chi(q, phi);
      const double scale = 1e-9 * (a_len + std::fabs(v));
      if (!std::isfinite(v) || std::fabs(chi(-q, phi) + v) > scale) {
        throw Error(ErrorCode::InvalidArgument, "cut function must be odd in q");
      }
      if (j == 0 && std::fabs(chi(q, kTwoPi) - v) > scale) {
        throw Error(ErrorCode::InvalidArgument, "cut function must be 2 pi periodic in phi");
      }
    }
  }
  return BranchCut(CutKind::Custom, 0.0, 0.0, std::make_shared<const CutFunction>(std::move(chi)));
}

BranchCut BranchCut::with_tolerance(double rel) const {
  if (!(rel > 0.0)) throw Error(ErrorCode::InvalidArgument, "cut tolerance must be positive");
  BranchCut out = *this;
  out.tol_ = rel;
  return out;
}

double BranchCut::cut_function(double q, double phi) const {
  switch (kind_) {
    case CutKind::FlatDisk: return 0.0;
    case CutKind::UpperSpheroid: return alpha_ * sgn(q);
    case CutKind::LowerSpheroid: return -alpha_ * sgn(q);
    case CutKind::SmoothSpheroid: return smooth_cut_function(q, alpha_, eps_);
    case CutKind::Custom: return (*chi_)(q, phi);
  }
  return 0.0;
}

double cut_distance(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg) {
  const double a = cfg.a_len();
  const Cylindrical c = to_cylindrical(r, cfg);
  const double d_rim = std::hypot(c.rho - a, c.z);
  switch (cut.kind()) {
    case CutKind::FlatDisk:
      return c.rho <= a ? std::fabs(c.z) : d_rim;
    case CutKind::UpperSpheroid:
      return std::min(d_rim, spheroid_cut_distance(c.rho, c.z, a, cut.alpha()));
    case CutKind::LowerSpheroid:
      return std::min(d_rim, spheroid_cut_distance(c.rho, -c.z, a, cut.alpha()));
    case CutKind::SmoothSpheroid:
    case CutKind::Custom:
      return std::min(d_rim, chi_curve_distance(cut, c.rho, c.z, c.phi, a));
  }
  return d_rim;
}

int cut_sign(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg) {
  if (cut.kind() == CutKind::FlatDisk) return 1;
  if (cut.kind() == CutKind::Custom) return cut_sign_by_continuation(cut, r, cfg);
  const PrincipalDistance pd = complex_distance_principal(r, cfg);
  const double h = pd.p - cut.cut_function(pd.q, 0.0);
  check_on_cut(cut, r, cfg, pd.p, pd.q, h);
  return h < 0.0 ? -1 : 1;
}

int cut_sign_by_continuation(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg,
                             const ContinuationOptions& opts) {
  const double a = cfg.a_len();
  const Vec3 anchor = (opts.anchor_distance * a) * cfg.axis();
  const Vec3 span = r - anchor;
  const double length = norm(span);

  cplx sc = complex_distance_principal(anchor, cfg).sigma;
  auto h_of = [&](cplx s, const Vec3& x) {
    return s.real() - cut.cut_function(-s.imag(), to_cylindrical(x, cfg).phi);
  };
  double h_prev = h_of(sc, anchor);
  int flips = 0;
  double s = 0.0;
  long steps = 0;
  while (s < 1.0 && length > 0.0) {
    const Vec3 x = anchor + s * span;
    const double sig2 = std::norm(sc);
    const double step = std::max(opts.step_fraction * sig2 / std::sqrt(norm2(x) + a * a), 1e-12 * a);
    const double s_next = std::min(1.0, s + step / length);
    const Vec3 x_next = anchor + s_next * span;
    cplx cand = complex_distance_principal(x_next, cfg).sigma;
    if (std::abs(cand - sc) > std::abs(cand + sc)) cand = -cand;
    const double h = h_of(cand, x_next);
    if ((h < 0.0) != (h_prev < 0.0)) ++flips;
    sc = cand;
    h_prev = h;
    s = s_next;
    if (++steps > opts.max_steps) {
      throw Error(ErrorCode::OnBranchCircle, "continuation path passes through the branch circle");
    }
  }
  check_on_cut(cut, r, cfg, sc.real(), -sc.imag(), h_prev);
  const cplx s_cut = (flips % 2 == 0) ? sc : -sc;
  const cplx s0 = complex_distance_principal(r, cfg).sigma;
  return std::abs(s_cut - s0) <= std::abs(s_cut + s0) ? 1 : -1;
}

cplx complex_distance(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg) {
  const cplx s0 = complex_distance_principal(r, cfg).sigma;
  return static_cast<double>(cut_sign(cut, r, cfg)) * s0;
}

ComplexDistanceSample frame(const Vec3& r, const SourceConfig& cfg) {
  const PrincipalDistance pd = complex_distance_principal(r, cfg);
  const double p = pd.p;
  const double q = pd.q;
  const double d2 = p * p + q * q;
  if (d2 == 0.0) throw Error(ErrorCode::OnBranchCircle, "frame undefined on the branch circle");
  const Vec3& a = cfg.a();
  const double a2 = cfg.a_len() * cfg.a_len();

  ComplexDistanceSample out{};
  out.sigma = pd.sigma;
  out.p = p;
  out.q = q;
  out.phi = to_cylindrical(r, cfg).phi;
  const Vec3 np = p * r + q * a;
  const Vec3 nq = p * a - q * r;
  out.grad_p = np / d2;
  out.grad_q = nq / d2;
  out.u = CVec3::from_parts(out.grad_p, -out.grad_q);
  out.e_p = np / (std::sqrt(d2) * std::sqrt(p * p + a2));
  const double gq = norm(nq);
  out.e_q = gq > 0.0 ? nq / gq : Vec3{};
  return out;
}

ComplexDistanceSample frame(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg) {
  const int s = cut_sign(cut, r, cfg);
  ComplexDistanceSample out = frame(r, cfg);
  if (s < 0) {
    out.sigma = -out.sigma;
    out.p = -out.p;
    out.q = -out.q;
    out.grad_p = -out.grad_p;
    out.grad_q = -out.grad_q;
    out.u = -out.u;
  }
  return out;
}

}  // namespace emw
