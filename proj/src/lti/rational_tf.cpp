#include <algorithm>
#include <cmath>

#include "netsmith/errors.hpp"
#include "netsmith/lti.hpp"

namespace netsmith::lti {

RationalTF::RationalTF() : num_(), den_(Polynomial::constant(1.0)), h_(1.0) {}

RationalTF::RationalTF(Polynomial num, Polynomial den, double h) : num_(std::move(num)), den_(std::move(den)), h_(h) {
  if (den_.is_zero()) throw ValidationError("transfer function denominator is zero");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ValidationError("sampling time must be positive");
  const double lead = den_.leading();
  if (lead != 1.0) {
    den_ = den_.scaled(1.0 / lead);
    num_ = num_.scaled(1.0 / lead);
  }
}

RationalTF RationalTF::gain(double k, double h) { return RationalTF(Polynomial::constant(k), Polynomial::constant(1.0), h); }

RationalTF RationalTF::delay(int k, double h) {
  return RationalTF(Polynomial::constant(1.0), Polynomial::monomial(k), h);
}

RationalTF RationalTF::difference(double h) { return RationalTF(Polynomial({1.0, -1.0}), Polynomial::monomial(1), h); }

Complex RationalTF::operator()(Complex z) const { return num_(z) / den_(z); }

std::vector<Complex> RationalTF::poles() const {
  if (den_.degree() < 1) return {};
  return roots(den_);
}

std::vector<Complex> RationalTF::zeros() const {
  if (num_.is_zero() || num_.degree() < 1) return {};
  return roots(num_);
}

bool RationalTF::is_stable(double margin) const {
  for (const Complex& p : poles()) {
    if (std::abs(p) > 1.0 - margin) return false;
  }
  return true;
}

RationalTF RationalTF::cancel(double tol) const {
  if (num_.is_zero()) return RationalTF(Polynomial(), Polynomial::constant(1.0), h_);
  const int k = std::min(num_.trailing_zeros(), den_.trailing_zeros());
  Polynomial n = num_.divide_by_power(k);
  Polynomial d = den_.divide_by_power(k);

  while (n.degree() >= 1 && d.degree() >= 1) {
    const std::vector<Complex> zr = roots(n);
    const std::vector<Complex> pr = roots(d);
    double best = -1.0;
    Complex bz, bp;
    for (const Complex& z : zr) {
      for (const Complex& p : pr) {
        const double dist = std::abs(z - p);
        const double scale = std::max(1.0, std::abs(p));
        if (dist < tol * scale && (best < 0.0 || dist < best)) {
          best = dist;
          bz = z;
          bp = p;
        }
      }
    }
    if (best < 0.0) break;
    const Complex avg = 0.5 * (bz + bp);
    const double scale = std::max(1.0, std::abs(avg));
    if (std::abs(bz.imag()) <= tol * scale || std::abs(bp.imag()) <= tol * scale || n.degree() < 2 || d.degree() < 2) {
      n = n.deflate(avg.real());
      d = d.deflate(avg.real());
    } else {
      n = n.deflate_pair(avg);
      d = d.deflate_pair(avg);
    }
  }
  return RationalTF(n, d, h_);
}

namespace {

void require_same_h(const RationalTF& a, const RationalTF& b) {
  if (std::abs(a.h() - b.h()) > 1e-12 * std::max(a.h(), b.h()))
    throw ValidationError("sampling times of the operands differ");
}

}  // namespace

RationalTF tf_arith(const RationalTF& lhs, const RationalTF& rhs, TfOp op) {
  switch (op) {
    case TfOp::add: {
      require_same_h(lhs, rhs);
      if (lhs.den() == rhs.den())
        return RationalTF(lhs.num() + rhs.num(), lhs.den(), lhs.h()).cancel(kArithCancelTol);
      return RationalTF(lhs.num() * rhs.den() + rhs.num() * lhs.den(), lhs.den() * rhs.den(), lhs.h())
          .cancel(kArithCancelTol);
    }
    case TfOp::mul:
      require_same_h(lhs, rhs);
      return RationalTF(lhs.num() * rhs.num(), lhs.den() * rhs.den(), lhs.h()).cancel(kArithCancelTol);
    case TfOp::feedback: {
      const Polynomial den = lhs.den() + lhs.num();
      if (den.is_zero()) throw NumericError("feedback denominator 1 + L is identically zero");
      return RationalTF(lhs.num(), den, lhs.h()).cancel(kArithCancelTol);
    }
  }
  throw ValidationError("unknown transfer function operation");
}

RationalTF operator+(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, TfOp::add); }

RationalTF operator-(const RationalTF& a) { return RationalTF(a.num().scaled(-1.0), a.den(), a.h()); }

RationalTF operator-(const RationalTF& a, const RationalTF& b) { return tf_arith(a, -b, TfOp::add); }

RationalTF operator*(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, TfOp::mul); }

RationalTF feedback(const RationalTF& loop) { return tf_arith(loop, loop, TfOp::feedback); }

}  // namespace netsmith::lti
