#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ptone {

// ---------------------------------------------------------------------------
// Space-form model functions.
//
// S_c(t) = sin(sqrt(c) t)/sqrt(c)   c > 0
//        = t                        c = 0
//        = sinh(sqrt(-c) t)/sqrt(-c) c < 0
//
// Near t = 0 (and for tiny |c|) the series t - c t^3/6 + c^2 t^5/120 - ...
// is used so that the three branches agree continuously in c.
// ---------------------------------------------------------------------------

/// First conjugate radius pi/sqrt(c) for c > 0, +inf otherwise.
double conjugate_radius(double c);

double s_c(double c, double t);
/// S_c'(t).
double ds_c(double c, double t);
/// S_c'(t) / S_c(t). Throws DomainError at t = 0.
double cot_c(double c, double t);

struct SpaceFormParams {
  double c = 0.0;
  int m = 2;

  /// Throws InvalidInput unless m >= 1 and c finite.
  void validate() const;
  /// Throws DomainError if r is at or beyond the conjugate point.
  void check_radius(double r) const;
};

/// Value and first two derivatives of a warping function.
struct WarpValues {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// The slope at the left endpoint can be pinned, which is how tabulated
/// warpings enforce f'(0) = 1.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y,
                double left_slope = std::numeric_limits<double>::quiet_NaN());

  [[nodiscard]] WarpValues eval(double x) const;
  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }
  [[nodiscard]] const std::vector<double>& nodes() const { return x_; }
  [[nodiscard]] const std::vector<double>& values() const { return y_; }
  [[nodiscard]] const std::vector<double>& slopes() const { return d_; }

 private:
  std::vector<double> x_, y_, d_;
};

/// Radial geometry of a rotationally symmetric model dt^2 + f(t)^2 dtheta^2.
class WarpingProfile {
 public:
  enum class Kind { SpaceForm, Perturbed, Tabulated };

  /// f = S_c on [0, r_max]. For c > 0 the default r_max stops just short of
  /// the conjugate point; for c <= 0 it defaults to 10.
  static WarpingProfile space_form(double c, double r_max = 0.0);
  /// f = S_c(t) (1 + eps t^2), eps >= 0.
  static WarpingProfile perturbed(double c, double eps, double r_max = 10.0);
  /// Samples (t_i, f_i) with t_0 = 0, f_0 = 0, strictly increasing t.
  /// The first cell uses t + a t^3 + b t^5 matched to the value and slope at
  /// t_1, so that f'' vanishes at the pole and -f''/f stays bounded.
  static WarpingProfile tabulated(std::vector<double> t, std::vector<double> f);
  /// Two-column CSV with header `t,f`.
  static WarpingProfile from_csv(const std::filesystem::path& path);

  [[nodiscard]] Kind kind() const { return kind_; }
  /// Model curvature c of SpaceForm / Perturbed kinds (NaN for Tabulated).
  [[nodiscard]] double model_curvature() const { return c_; }
  [[nodiscard]] double epsilon() const { return eps_; }
  [[nodiscard]] double r_max() const { return r_max_; }
  [[nodiscard]] bool is_space_form() const { return kind_ == Kind::SpaceForm; }
  [[nodiscard]] bool is_flat() const { return kind_ == Kind::SpaceForm && c_ == 0.0; }

  /// (f, f', f'') at t in [0, r_max]; throws DomainError outside.
  [[nodiscard]] WarpValues eval(double t) const;
  [[nodiscard]] double f(double t) const { return eval(t).f; }

  /// Short identifier, e.g. "S(-1)", "P(0,0.1)", "tab[64]".
  [[nodiscard]] std::string label() const;

 private:
  WarpingProfile() = default;

  Kind kind_ = Kind::SpaceForm;
  double c_ = 0.0;
  double eps_ = 0.0;
  double r_max_ = 0.0;
  MonotoneCubic table_;
  double pole_a_ = 0.0;
  double pole_b_ = 0.0;
};

/// Alias kept for call sites that only need the triple.
inline WarpValues warping_eval(const WarpingProfile& profile, double t) { return profile.eval(t); }

struct CurvatureReport {
  bool ok = true;
  double worst_t = 0.0;
  /// min over nodes of (c + tol - K(t)); negative means violated.
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_curvature = 0.0;
};

inline constexpr double kCurvatureTol = 1e-9;

/// Checks the radial curvature K(t) = -f''/f <= c + tol at every node.
CurvatureReport verify_curvature_bound(const WarpingProfile& profile, double c,
                                       std::span<const double> nodes,
                                       double tol = kCurvatureTol);

/// n uniform nodes on [a, b] (both endpoints included).
std::vector<double> uniform_nodes(double a, double b, std::size_t n);

}  // namespace ptone
