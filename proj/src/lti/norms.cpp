#include <algorithm>
#include <cmath>
#include <numbers>

#include "netsmith/errors.hpp"
#include "netsmith/lti.hpp"

namespace netsmith::lti {

namespace {

constexpr int kGridPoints = 4096;
constexpr int kRefineCandidates = 5;

double magnitude_at(const RationalTF& g, double theta) {
  const Complex z = std::polar(1.0, theta);
  return std::abs(g.num()(z) / g.den()(z));
}

double golden_max(const RationalTF& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = magnitude_at(g, c);
  double fd = magnitude_at(g, d);
  double best = std::max(fc, fd);
  while ((b - a) > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = magnitude_at(g, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = magnitude_at(g, d);
    }
    best = std::max({best, fc, fd});
  }
  return std::max({best, magnitude_at(g, a), magnitude_at(g, b)});
}

}  // namespace

Complex freq_response(const RationalTF& g, double omega) {
  const double theta = omega * g.h();
  if (!(theta >= 0.0) || theta > std::numbers::pi * (1.0 + 1e-12))
    throw ValidationError("frequency outside [0, pi/h]");
  const Complex z = std::polar(1.0, theta);
  const Complex den = g.den()(z);
  if (std::abs(den) < 1e-12) throw NumericError("frequency response evaluated at a pole on the unit circle");
  return g.num()(z) / den;
}

double inf_norm(const RationalTF& g) {
  if (g.is_zero()) return 0.0;
  for (const Complex& p : g.poles()) {
    if (std::abs(std::abs(p) - 1.0) < 1e-8) throw NumericError("infinity norm undefined: pole on the unit circle");
  }
  std::vector<double> mag(kGridPoints);
  const double step = std::numbers::pi / (kGridPoints - 1);
  for (int i = 0; i < kGridPoints; ++i) mag[static_cast<size_t>(i)] = magnitude_at(g, step * i);

  std::vector<int> peaks;
  for (int i = 0; i < kGridPoints; ++i) {
    const double left = i > 0 ? mag[static_cast<size_t>(i - 1)] : -1.0;
    const double right = i + 1 < kGridPoints ? mag[static_cast<size_t>(i + 1)] : -1.0;
    if (mag[static_cast<size_t>(i)] >= left && mag[static_cast<size_t>(i)] >= right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return mag[static_cast<size_t>(a)] > mag[static_cast<size_t>(b)]; });
  if (peaks.size() > kRefineCandidates) peaks.resize(kRefineCandidates);

  double best = *std::max_element(mag.begin(), mag.end());
  for (int i : peaks) {
    const double a = std::max(0.0, step * (i - 1));
    const double b = std::min(std::numbers::pi, step * (i + 1));
    best = std::max(best, golden_max(g, a, b));
  }
  return best;
}

}  // namespace netsmith::lti
