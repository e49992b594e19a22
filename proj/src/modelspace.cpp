#include "ptone/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ptone/errors.hpp"

namespace ptone {

namespace {

// |c t^2| below this switches to the series. Truncation error is O(x^5/9!).
constexpr double kSeriesCutoff = 1e-3;

void check_conjugate(double c, double t, const char* who) {
  if (!(t >= 0.0)) throw DomainError(std::string(who) + ": t must be >= 0");
  if (c > 0.0 && t >= conjugate_radius(c)) {
    throw DomainError(std::string(who) + ": t beyond the conjugate point pi/sqrt(c)");
  }
}

}  // namespace

double conjugate_radius(double c) {
  return c > 0.0 ? std::numbers::pi / std::sqrt(c) : std::numeric_limits<double>::infinity();
}

double s_c(double c, double t) {
  check_conjugate(c, t, "s_c");
  const double x = c * t * t;
  if (std::abs(x) < kSeriesCutoff) {
    return t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0 * (1.0 - x / 72.0))));
  }
  if (c > 0.0) {
    const double k = std::sqrt(c);
    return std::sin(k * t) / k;
  }
  const double k = std::sqrt(-c);
  return std::sinh(k * t) / k;
}

double ds_c(double c, double t) {
  check_conjugate(c, t, "ds_c");
  const double x = c * t * t;
  if (std::abs(x) < kSeriesCutoff) {
    return 1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0 * (1.0 - x / 56.0)));
  }
  if (c > 0.0) return std::cos(std::sqrt(c) * t);
  return std::cosh(std::sqrt(-c) * t);
}

double cot_c(double c, double t) {
  check_conjugate(c, t, "cot_c");
  if (t == 0.0) throw DomainError("cot_c: undefined at the pole t = 0");
  const double x = c * t * t;
  if (std::abs(x) < kSeriesCutoff) {
    return (1.0 - x / 3.0 - x * x / 45.0 - 2.0 * x * x * x / 945.0) / t;
  }
  if (c > 0.0) {
    const double k = std::sqrt(c);
    return k / std::tan(k * t);
  }
  const double k = std::sqrt(-c);
  return k / std::tanh(k * t);
}

void SpaceFormParams::validate() const {
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  if (!std::isfinite(c)) throw InvalidInput("curvature c must be finite");
}

void SpaceFormParams::check_radius(double r) const {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  if (c > 0.0 && r >= conjugate_radius(c)) {
    throw DomainError("radius at or beyond the conjugate point pi/sqrt(c)");
  }
}

// ---------------------------------------------------------------------------

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, double left_slope)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw InvalidInput("monotone cubic needs >= 2 matching samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw InvalidInput("interpolation nodes must be strictly increasing");
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) {
        d_[k] = 0.0;
      } else {
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
      }
    }
    // Three-point endpoint slopes, limited to preserve monotonicity.
    auto end_slope = [](double h0, double h1, double m0, double m1) {
      double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
      if (d * m0 <= 0.0) {
        d = 0.0;
      } else if (m0 * m1 <= 0.0 && std::abs(d) > 3.0 * std::abs(m0)) {
        d = 3.0 * m0;
      }
      return d;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  if (!std::isnan(left_slope)) d_[0] = left_slope;
}

WarpValues MonotoneCubic::eval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, x_.size() - 2);
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double y0 = y_[k], y1 = y_[k + 1], d0 = d_[k] * h, d1 = d_[k + 1] * h;
  // Cubic in s: a + b s + c s^2 + e s^3.
  const double a = y0;
  const double b = d0;
  const double c = 3.0 * (y1 - y0) - 2.0 * d0 - d1;
  const double e = 2.0 * (y0 - y1) + d0 + d1;
  WarpValues out;
  out.f = a + s * (b + s * (c + s * e));
  out.df = (b + s * (2.0 * c + 3.0 * s * e)) / h;
  out.d2f = (2.0 * c + 6.0 * s * e) / (h * h);
  return out;
}

// ---------------------------------------------------------------------------

WarpingProfile WarpingProfile::space_form(double c, double r_max) {
  if (!std::isfinite(c)) throw InvalidInput("curvature must be finite");
  WarpingProfile w;
  w.kind_ = Kind::SpaceForm;
  w.c_ = c;
  if (r_max <= 0.0) {
    r_max = c > 0.0 ? conjugate_radius(c) * (1.0 - 1e-12) : 10.0;
  }
  if (c > 0.0 && r_max >= conjugate_radius(c)) {
    throw DomainError("space form r_max must stay below the conjugate point");
  }
  w.r_max_ = r_max;
  return w;
}

WarpingProfile WarpingProfile::perturbed(double c, double eps, double r_max) {
  if (!(eps >= 0.0)) throw InvalidInput("perturbation eps must be >= 0");
  WarpingProfile w = space_form(c, c > 0.0 ? std::min(r_max, conjugate_radius(c) * (1.0 - 1e-12)) : r_max);
  w.kind_ = Kind::Perturbed;
  w.eps_ = eps;
  return w;
}

WarpingProfile WarpingProfile::tabulated(std::vector<double> t, std::vector<double> f) {
  if (t.size() < 3 || f.size() != t.size()) {
    throw InvalidInput("tabulated profile needs >= 3 (t, f) samples");
  }
  if (t.front() != 0.0) throw InvalidInput("tabulated profile must start at t = 0");
  if (f.front() != 0.0) throw InvalidInput("tabulated profile must satisfy f(0) = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(f[i] > 0.0)) throw InvalidInput("tabulated profile must be positive away from the pole");
  }
  WarpingProfile w;
  w.kind_ = Kind::Tabulated;
  w.c_ = std::numeric_limits<double>::quiet_NaN();
  w.r_max_ = t.back();
  w.table_ = MonotoneCubic(std::move(t), std::move(f), 1.0);
  const double t1 = w.table_.nodes()[1];
  const double A = (w.table_.values()[1] - t1) / (t1 * t1 * t1);
  const double B = (w.table_.slopes()[1] - 1.0) / (t1 * t1);
  w.pole_b_ = (B - 3.0 * A) / (2.0 * t1 * t1);
  w.pole_a_ = A - w.pole_b_ * t1 * t1;
  return w;
}

WarpingProfile WarpingProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty profile CSV");
  line.erase(std::remove_if(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }),
             line.end());
  if (line != "t,f") throw InvalidInput("profile CSV header must be `t,f`");
  std::vector<double> t, f;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw InvalidInput("malformed profile CSV row " + std::to_string(lineno));
    }
    try {
      t.push_back(std::stod(a));
      f.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InvalidInput("non-numeric profile CSV row " + std::to_string(lineno));
    }
  }
  return tabulated(std::move(t), std::move(f));
}

WarpValues WarpingProfile::eval(double t) const {
  if (!(t >= 0.0) || t > r_max_) {
    throw DomainError("warping evaluated outside [0, r_max]: t = " + std::to_string(t));
  }
  switch (kind_) {
    case Kind::SpaceForm: {
      const double s = s_c(c_, t);
      return {s, ds_c(c_, t), -c_ * s};
    }
    case Kind::Perturbed: {
      const double s = s_c(c_, t);
      const double ds = ds_c(c_, t);
      const double d2s = -c_ * s;
      const double g = 1.0 + eps_ * t * t;
      return {s * g, ds * g + 2.0 * eps_ * t * s, d2s * g + 4.0 * eps_ * t * ds + 2.0 * eps_ * s};
    }
    case Kind::Tabulated: {
      if (t >= table_.nodes()[1]) return table_.eval(t);
      const double t2 = t * t;
      return {t * (1.0 + t2 * (pole_a_ + pole_b_ * t2)), 1.0 + t2 * (3.0 * pole_a_ + 5.0 * pole_b_ * t2),
              t * (6.0 * pole_a_ + 20.0 * pole_b_ * t2)};
    }
  }
  return {};
}

std::string WarpingProfile::label() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::SpaceForm:
      os << "S(" << c_ << ")";
      break;
    case Kind::Perturbed:
      os << "P(" << c_ << "," << eps_ << ")";
      break;
    case Kind::Tabulated:
      os << "tab[" << table_.nodes().size() << "]";
      break;
  }
  return os.str();
}

CurvatureReport verify_curvature_bound(const WarpingProfile& profile, double c,
                                       std::span<const double> nodes, double tol) {
  CurvatureReport rep;
  for (const double t : nodes) {
    if (!(t > 0.0)) continue;
    const WarpValues w = profile.eval(t);
    const double k = -w.d2f / w.f;
    const double margin = c + tol - k;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_t = t;
      rep.worst_curvature = k;
    }
  }
  rep.ok = rep.worst_margin >= 0.0;
  return rep;
}

std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
  if (n < 2) throw InvalidInput("uniform grid needs >= 2 nodes");
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

}  // namespace ptone
