#include "synchrad/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace synchrad::numerics {

void Tolerance::validate() const {
  if (!(rel >= 0.0) || !(abs >= 0.0) || (rel == 0.0 && abs == 0.0)) {
    throw DomainError("tolerance: need rel >= 0, abs >= 0, not both zero");
  }
}

double Tolerance::bound(double magnitude) const { return std::max(abs, rel * magnitude); }

IntegralResult adaptive_integral(const RealFn1D& f, double a, double b, const Tolerance& tol,
                                 int max_subdivisions) {
  tol.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("adaptive_integral: limits must be finite");
  }
  if (!(a < b)) throw DomainError("adaptive_integral: requires a < b");
  if (a < f.lo || b > f.hi) {
    throw DomainError("adaptive_integral: interval outside the function's domain");
  }
  if (max_subdivisions < 0) throw DomainError("adaptive_integral: negative subdivision budget");
  auto fn = [&f](double x) { return f.f(x); };
  const auto r = integrate<double>(fn, a, b, tol, max_subdivisions);
  if (!std::isfinite(r.value)) {
    throw DomainError("adaptive_integral: integrand produced a non-finite value");
  }
  if (!r.converged) {
    throw ConvergenceError("adaptive_integral: subdivision budget exhausted", r.value, r.error);
  }
  return {r.value, r.error, r.evaluations};
}

namespace {

GaussRule make_legendre(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    // Recompute the derivative at the converged root.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    g.nodes[i] = -z;
    g.nodes[n - 1 - i] = z;
    g.weights[i] = g.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return g;
}

// Physicists' Hermite roots by Newton iteration on orthonormal polynomials,
// then mapped to the standard normal weight.
GaussRule make_hermite(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  const double pim4 = std::pow(kPi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * g.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * g.nodes[1];
    } else {
      z = 2.0 * z - g.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-14 * std::max(1.0, std::abs(z))) {
        // One more pass for the derivative at the root.
        p1 = pim4;
        p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
               std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        break;
      }
    }
    g.nodes[i] = z;
    g.nodes[n - 1 - i] = -z;
    g.weights[i] = g.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  GaussRule out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Ascending order.
    out.nodes[i] = std::sqrt(2.0) * g.nodes[n - 1 - i];
    out.weights[i] = g.weights[n - 1 - i] / std::sqrt(kPi);
  }
  return out;
}

template <class Make>
GaussRule cached(std::map<int, GaussRule>& cache, std::mutex& mu, int n, Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  return cache.emplace(n, make(n)).first->second;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1 || n > 4096) throw DomainError("gauss_legendre: order must be in [1, 4096]");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached(cache, mu, n, make_legendre);
}

GaussRule gauss_hermite_normal(int n) {
  if (n < 1 || n > 200) throw DomainError("gauss_hermite_normal: order must be in [1, 200]");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  return cached(cache, mu, n, make_hermite);
}

}  // namespace synchrad::numerics
