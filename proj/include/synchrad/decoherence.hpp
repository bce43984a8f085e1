#pragma once

#include <limits>
#include <vector>

#include "synchrad/semiclassical.hpp"

namespace synchrad {

/// Period-averaged decoherence exponent
/// S(r, t) = t Z^2/c int sin(theta) d theta sum_n n w0 [cot^2 J_n^2 + beta^2 J_n'^2]
///           (1 - J0(r n w0 sin(theta0) sin(theta)/c) exp(i r n w0 cos(theta0) cos(theta)/c)),
/// theta0 the angle of r to the field axis. The imaginary part vanishes by the
/// u -> -u symmetry and is not computed. Harmonics are summed as in
/// sum_over_harmonics; each angular integral resolves the oscillations of the
/// factor, so cost grows with r n w0 / c.
double s_averaged(double r, double theta0, double t, const BeamParams& beam, const Tolerance& tol = {1e-7, 0.0});

/// Ultrarelativistic Airy form of the same quantity: harmonic number as a
/// continuous variable s from epsilon^-3 up, theta within pi/2 +- epsilon,
/// kernels Ai^2 and Ai'^2 of (s/2)^(2/3) (1 - beta^2 sin^2 theta).
double s_ultrarel(double r, double theta0, double t, const BeamParams& beam, double epsilon,
                  const Tolerance& tol = {1e-7, 0.0});

/// 1/gamma << epsilon << 1, taken as 10/gamma <= epsilon <= 0.3.
bool ultrarel_window_ok(const BeamParams& beam, double epsilon);

enum class Axis { transverse, longitudinal };

/// Photon emission rate binned over the projection K of the photon momentum
/// relevant to one axis: the in-plane magnitude n w0 sin(theta)/c for the
/// transverse axis (theta0 = pi/2), the field component n w0 cos(theta)/c for
/// the longitudinal one (theta0 = 0). Bins are logarithmic. Inside a bin the
/// rate is modelled as proportional to K (transverse) or flat (longitudinal)
/// on a sub-interval matching the bin's mean K^2, and the oscillating factor is
/// integrated exactly against that model, so s_rate is cheap and stable at
/// any r.
class AxisProfile {
 public:
  AxisProfile(const BeamParams& beam, Axis axis, int bins_per_decade = 40);

  Axis axis() const { return axis_; }
  const BeamParams& beam() const { return beam_; }
  /// Sum of all bins; the total photon emission rate.
  double rate() const { return rate_; }
  /// S(r, t)/t along the axis. Exactly 0 at r = 0.
  double s_rate(double r) const;
  double s(double r, double t) const { return t * s_rate(r); }

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& masses() const { return masses_; }

 private:
  BeamParams beam_;
  Axis axis_;
  std::vector<double> edges_;   // edges_[0] = 0
  std::vector<double> masses_;  // rate in [edges_[i], edges_[i+1])
  std::vector<double> lo_;      // support of the in-bin model, chosen so that
  std::vector<double> hi_;      // the bin's mean K^2 is reproduced exactly
  double rate_ = 0.0;
};

/// S sampled on a (r, theta0) grid by s_averaged, row-major in r.
struct DecoherenceField {
  BeamParams beam;
  double t = 0.0;
  std::vector<double> r;
  std::vector<double> theta0;
  std::vector<double> values;  // values[i * theta0.size() + j]

  double at(std::size_t i, std::size_t j) const { return values[i * theta0.size() + j]; }
};

DecoherenceField decoherence_field(const BeamParams& beam, double t, const std::vector<double>& r,
                                   const std::vector<double>& theta0, const Tolerance& tol = {1e-7, 0.0},
                                   int threads = 1);

/// G = exp(-S) on the same grid.
std::vector<double> coherence_kernel(const DecoherenceField& field);

/// A kernel slice along one axis, r[0] = 0 and increasing, g[0] = 1.
struct KernelSlice {
  std::vector<double> r;
  std::vector<double> g;
};

struct ChiSpectrum {
  std::vector<double> k;    // k[0] = 0, increasing
  std::vector<double> gk;   // Fourier transform of the slice, clamped at 0
  std::vector<double> chi;  // sqrt(gk), phase 0
};

/// Cosine transform G_k = 2 int_0^inf g(r) cos(k r) dr of the piecewise-linear
/// slice (zero beyond the last sample), on a k grid from 0.01/r_max to
/// 100/r[1]. Values below -neg_tol * max throw DomainError; smaller negative
/// values are clamped to 0.
ChiSpectrum chi_spectrum(const KernelSlice& slice, int points_per_decade = 64, double neg_tol = 1e-3);

/// rms position width of |chi|^2, from int (d chi/dk)^2 dk / int chi^2 dk.
double rms_width(const ChiSpectrum& spectrum);

inline constexpr double kUnboundedWidth = std::numeric_limits<double>::infinity();

struct WidthOptions {
  double r_min = 1e-3;
  double r_max = 1e7;
  int points = 512;         // log grid on [r_min, r_max]
  double edge_tol = 1e-3;   // background-subtracted kernel must fall below this at r_max
  double refine_tol = 0.01; // grid doubled until the width changes less than this
  int max_doublings = 4;
};

/// Slice of the background-subtracted kernel (exp(-S) - exp(-N))/(1 - exp(-N)),
/// N = t * rate, on the log grid of the options with r = 0 prepended.
KernelSlice kernel_slice(const AxisProfile& profile, double t, const WidthOptions& options = {});

/// rms width of |chi|^2 along the profile's axis at time t, bohr.
/// kUnboundedWidth when exp(-N) >= 1/2 (barely any emission), when the
/// kernel has not decayed at r_max, or when extending the grid to 10 r_max
/// moves the width by more than refine_tol (a tail with no finite rms).
double localization_width(const AxisProfile& profile, double t, const WidthOptions& options = {});

/// Time at which localization_width falls to target_width, by bisection in
/// ln t on [t_lo, t_hi]. Throws RangeError if the target is not bracketed.
double localization_time(const AxisProfile& profile, double target_width, double t_lo = 1e2, double t_hi = 1e20,
                         const WidthOptions& options = {});

}  // namespace synchrad
