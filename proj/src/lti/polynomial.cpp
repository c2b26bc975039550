#include <algorithm>
#include <cmath>

#include "netsmith/errors.hpp"
#include "netsmith/lti.hpp"

namespace netsmith::lti {

Polynomial::Polynomial() : coeffs_{0.0}, zero_(true) {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void Polynomial::normalize() {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ValidationError("polynomial coefficient is not finite");
  }
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  if (first == coeffs_.end()) {
    coeffs_ = {0.0};
    zero_ = true;
    return;
  }
  coeffs_.erase(coeffs_.begin(), first);
  zero_ = false;
}

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int power, double c) {
  if (power < 0) throw ValidationError("monomial power must be non-negative");
  std::vector<double> v(static_cast<size_t>(power) + 1, 0.0);
  v[0] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
  std::vector<Complex> acc{Complex(leading, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= acc[i] * r;
    }
    acc = std::move(next);
  }
  std::vector<double> out(acc.size());
  std::transform(acc.begin(), acc.end(), out.begin(), [](Complex c) { return c.real(); });
  return Polynomial(std::move(out));
}

double Polynomial::coefficient(int power) const {
  const int idx = degree() - power;
  if (power < 0 || idx < 0) return 0.0;
  return coeffs_[static_cast<size_t>(idx)];
}

int Polynomial::trailing_zeros() const {
  if (zero_) return 0;
  int k = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend() && *it == 0.0; ++it) ++k;
  return k;
}

double Polynomial::operator()(double z) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * z + c;
  return acc;
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc(0.0, 0.0);
  for (double c : coeffs_) acc = acc * z + c;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  const int n = degree();
  for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = coeffs_[static_cast<size_t>(i)] * (n - i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(double k) const {
  std::vector<double> v = coeffs_;
  for (double& c : v) c *= k;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::divide_by_power(int k) const {
  if (k == 0) return *this;
  if (k < 0 || trailing_zeros() < k) throw ValidationError("polynomial is not divisible by the requested power of z");
  std::vector<double> v(coeffs_.begin(), coeffs_.end() - k);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::deflate(double root) const {
  if (degree() < 1) throw ValidationError("cannot deflate a constant polynomial");
  std::vector<double> q(coeffs_.size() - 1);
  double acc = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    acc = acc * root + coeffs_[i];
    q[i] = acc;
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::deflate_pair(Complex root) const {
  if (degree() < 2) throw ValidationError("cannot deflate a quadratic factor from a polynomial of degree < 2");
  const double s = 2.0 * root.real();
  const double p = std::norm(root);
  std::vector<double> rem = coeffs_;
  std::vector<double> q(coeffs_.size() - 2);
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = rem[i];
    rem[i + 1] += s * q[i];
    rem[i + 2] -= p * q[i];
  }
  return Polynomial(std::move(q));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> v(n, 0.0);
  std::copy(a.coeffs_.begin(), a.coeffs_.end(), v.begin() + static_cast<long>(n - a.coeffs_.size()));
  for (size_t i = 0; i < b.coeffs_.size(); ++i) v[n - b.coeffs_.size() + i] += b.coeffs_[i];
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.zero_ || b.zero_) return Polynomial();
  std::vector<double> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

namespace {

Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex z) {
  double best = std::abs(p(z));
  for (int it = 0; it < 50 && best > 0.0; ++it) {
    const Complex d = dp(z);
    if (std::abs(d) == 0.0) break;
    const Complex cand = z - p(z) / d;
    const double val = std::abs(p(cand));
    if (!(val < best)) break;
    z = cand;
    best = val;
  }
  return z;
}

bool root_order(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

std::vector<Complex> roots(const Polynomial& p) {
  if (p.is_zero()) throw ValidationError("roots of the zero polynomial are undefined");
  if (p.degree() < 1) throw ValidationError("roots require a polynomial of degree >= 1");

  const int zeros = p.trailing_zeros();
  std::vector<Complex> out(static_cast<size_t>(zeros), Complex(0.0, 0.0));
  const Polynomial q = p.divide_by_power(zeros).scaled(1.0 / p.leading());
  const int m = q.degree();
  if (m == 0) return out;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) comp(0, j) = -q.coeffs()[static_cast<size_t>(j) + 1];
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue computation failed");

  std::vector<Complex> raw(es.eigenvalues().begin(), es.eigenvalues().end());

  // Multiple roots come back as tight clusters; merge them before polishing.
  std::vector<int> group(raw.size(), -1);
  int groups = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups;
    for (size_t j = i + 1; j < raw.size(); ++j) {
      if (group[j] >= 0) continue;
      for (size_t k = 0; k < raw.size(); ++k) {
        if (group[k] != groups) continue;
        if (std::abs(raw[j] - raw[k]) < 1e-5 * std::max(1.0, std::abs(raw[k]))) {
          group[j] = groups;
          break;
        }
      }
    }
    ++groups;
  }

  const Polynomial dq = q.derivative();
  for (int g = 0; g < groups; ++g) {
    Complex sum(0.0, 0.0);
    int mult = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
      if (group[i] == g) {
        sum += raw[i];
        ++mult;
      }
    }
    Complex z = sum / static_cast<double>(mult);
    if (mult == 1) {
      z = newton_polish(q, dq, z);
    } else {
      Polynomial base = q;
      for (int k = 0; k < mult - 1; ++k) base = base.derivative();
      z = newton_polish(base, base.derivative(), z);
    }
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
    out.insert(out.end(), static_cast<size_t>(mult), z);
  }

  // Restore exact conjugate symmetry after independent polishing.
  std::vector<Complex> upper;
  std::vector<Complex> result;
  for (const Complex& z : out) {
    if (z.imag() == 0.0) result.push_back(z);
    else if (z.imag() > 0.0) upper.push_back(z);
  }
  for (const Complex& z : upper) {
    result.push_back(z);
    result.push_back(std::conj(z));
  }
  if (result.size() != out.size()) result = out;
  std::sort(result.begin(), result.end(), root_order);
  return result;
}

}  // namespace netsmith::lti
