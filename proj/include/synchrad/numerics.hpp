#pragma once

#include <functional>
#include <vector>

#include "synchrad/errors.hpp"

namespace synchrad::numerics {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286;

/// Stopping tolerance for adaptive procedures: converged when the error
/// estimate is at most max(abs, rel * |value|).
struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;

  /// Throws DomainError unless rel >= 0, abs >= 0 and not both zero.
  void validate() const;
  double bound(double magnitude) const;
};

/// A real function of one real variable together with the interval on which
/// it is declared total.
struct RealFn1D {
  std::function<double(double)> f;
  double lo = -1e308;
  double hi = 1e308;

  double operator()(double x) const { return f(x); }
};

// ---------------------------------------------------------------------------
// Bessel functions of integer order

inline constexpr int kBesselMaxOrder = 1'000'000;
inline constexpr double kBesselMaxArg = 1e8;

struct BesselPair {
  double j = 0.0;      // J_n(x)
  double jprime = 0.0; // J_n'(x)
};

/// J_n(x). Throws RangeError for n < 0, n > 1e6 or |x| > 1e8.
double bessel_j(int n, double x);

/// J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2, with J_0' = -J_1.
double bessel_j_prime(int n, double x);

/// J_n(x) and J_n'(x) from a single recurrence pass.
BesselPair bessel_j_with_prime(int n, double x);

/// J_nu(nu z) and J_nu'(nu z) for real order nu >= 1 and 0 < z < 1 from the
/// Airy-type uniform asymptotic expansion (leading term plus the first
/// correction). The argument is passed as w2 = 1 - z^2 so that values of z
/// close to 1 lose no precision. Relative accuracy improves like nu^-2;
/// around 1e-7 at nu = 256.
BesselPair bessel_j_uniform(double nu, double w2);

// ---------------------------------------------------------------------------
// Airy function

struct AiryPair {
  double ai = 0.0;
  double aiprime = 0.0;
};

/// Ai(x) on [-20, 200]; RangeError outside. Underflows to 0 for large x.
double airy_ai(double x);
/// Ai'(x) on [-20, 200]; RangeError outside.
double airy_ai_prime(double x);

/// Ai and Ai' for any x >= -20 without the upper range check (0 beyond
/// underflow). Used by the uniform Bessel expansion.
AiryPair airy_unchecked(double x);

// ---------------------------------------------------------------------------
// Sine and cosine integrals

double sin_integral(double x);
/// Ci(x) for x > 0; DomainError otherwise.
double cos_integral(double x);
/// Cin(x) = integral_0^x (1 - cos t)/t dt = gamma + ln|x| - Ci(|x|); even, Cin(0) = 0.
double cos_integral_entire(double x);

// ---------------------------------------------------------------------------
// Quadrature

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

inline constexpr int kDefaultMaxSubdivisions = 2000;

/// Globally adaptive Gauss-Kronrod (10/21) bisection. Throws
/// ConvergenceError carrying the best estimate when the subdivision budget
/// is exhausted; DomainError for a >= b, non-finite limits or limits outside
/// the declared domain of f.
IntegralResult adaptive_integral(const RealFn1D& f, double a, double b, const Tolerance& tol,
                                 int max_subdivisions = kDefaultMaxSubdivisions);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);
/// Gauss-Hermite rule for the standard normal weight exp(-x^2/2)/sqrt(2 pi);
/// weights sum to 1.
GaussRule gauss_hermite_normal(int n);

// ---------------------------------------------------------------------------
// Series

struct SeriesResult {
  double value = 0.0;       // partial sum plus tail estimate
  double partial_sum = 0.0; // sum of the terms actually evaluated
  double error = 0.0;       // truncation error estimate
  int terms = 0;
  bool converged = false;
};

/// Sum_{n>=1} term(n) with compensated accumulation and a tail estimate
/// fitted to the last terms (geometric, power-law or mixed decay). Never
/// throws; check `converged`. The fitted tail is only trusted once it is at
/// most max_tail_fraction of the total, for terms that follow the model
/// only roughly. An optional bound(n) >= |term(n)| with regular decay is used
/// when the terms themselves oscillate: the tail is then taken as 0 with the
/// fitted tail of the bound as its error.
SeriesResult harmonic_sum_partial(const std::function<double(int)>& term, const Tolerance& tol,
                                  int n_max_cap, int min_terms = 4, double max_tail_fraction = 1.0,
                                  const std::function<double(int)>& bound = {});

/// As harmonic_sum_partial but throws ConvergenceError (carrying the partial
/// sum) when the cap is reached first.
double harmonic_sum(const std::function<double(int)>& term, const Tolerance& tol, int n_max_cap);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace synchrad::numerics
