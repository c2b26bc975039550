#pragma once

// Discrete-time SISO building blocks: polynomials in z, rational transfer
// functions, frequency response, the infinity norm on the unit circle and
// controllable-canonical realizations.
//
// Coefficient vectors are always stored in DESCENDING powers of z:
// {1.0, -0.5} is z - 0.5.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace netsmith::lti {

using Complex = std::complex<double>;

inline constexpr double kArithCancelTol = 1e-8;
inline constexpr double kRealizeCancelTol = 1e-6;

class Polynomial {
 public:
  /// The zero polynomial.
  Polynomial();
  /// Leading zero coefficients are trimmed.
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c);
  /// c * z^power
  static Polynomial monomial(int power, double c = 1.0);
  /// leading * prod (z - r). Complex roots must come in conjugate pairs.
  static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

  bool is_zero() const { return zero_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double leading() const { return coeffs_.front(); }
  /// Coefficient of z^power (0 outside the stored range).
  double coefficient(int power) const;
  /// Number of exact zero roots (trailing zero coefficients).
  int trailing_zeros() const;

  double operator()(double z) const;
  Complex operator()(Complex z) const;

  Polynomial derivative() const;
  Polynomial scaled(double k) const;
  /// Exact division by z^k; requires trailing_zeros() >= k.
  Polynomial divide_by_power(int k) const;
  /// Synthetic division by (z - root); the remainder is discarded.
  Polynomial deflate(double root) const;
  /// Division by (z - root)(z - conj(root)); the remainder is discarded.
  Polynomial deflate_pair(Complex root) const;

  /// Largest absolute coefficient, used to scale tolerances.
  double max_abs_coeff() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void normalize();

  std::vector<double> coeffs_;
  bool zero_ = true;
};

/// All complex roots (with multiplicity) via companion-matrix eigenvalues,
/// Newton polishing and centroid merging of multiple-root clusters.
/// Sorted by decreasing real part, then decreasing imaginary part.
/// Throws ValidationError for the zero polynomial or a constant.
std::vector<Complex> roots(const Polynomial& p);

class RationalTF {
 public:
  /// The zero transfer function 0/1 with h = 1 s.
  RationalTF();
  /// The denominator is normalized to be monic. Throws on a zero denominator
  /// or a non-positive sampling time.
  RationalTF(Polynomial num, Polynomial den, double h = 1.0);

  static RationalTF gain(double k, double h = 1.0);
  /// z^{-k}
  static RationalTF delay(int k, double h = 1.0);
  /// (z - 1) / z, the discrete differentiator.
  static RationalTF difference(double h = 1.0);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  double h() const { return h_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_proper() const { return is_zero() || num_.degree() <= den_.degree(); }
  bool is_strictly_proper() const { return is_zero() || num_.degree() < den_.degree(); }
  int order() const { return den_.degree(); }

  Complex operator()(Complex z) const;
  std::vector<Complex> poles() const;
  std::vector<Complex> zeros() const;
  /// All poles strictly inside |z| <= 1 - margin.
  bool is_stable(double margin = 1e-8) const;

  /// Removes common z-powers exactly and numerator/denominator root pairs
  /// closer than tol * max(1, |root|).
  RationalTF cancel(double tol = kArithCancelTol) const;

 private:
  Polynomial num_;
  Polynomial den_;
  double h_ = 1.0;
};

RationalTF operator+(const RationalTF& a, const RationalTF& b);
RationalTF operator-(const RationalTF& a, const RationalTF& b);
RationalTF operator*(const RationalTF& a, const RationalTF& b);
RationalTF operator-(const RationalTF& a);

/// L / (1 + L)
RationalTF feedback(const RationalTF& loop);

enum class TfOp { add, mul, feedback };

/// One arithmetic step followed by cancellation at kArithCancelTol. For
/// TfOp::feedback the rhs operand is ignored and lhs is the loop gain.
RationalTF tf_arith(const RationalTF& lhs, const RationalTF& rhs, TfOp op);

/// g(e^{j omega h}) for 0 <= omega <= pi/h.
Complex freq_response(const RationalTF& g, double omega);

/// sup |g(e^{j omega h})| over [0, pi/h]: 4096-point grid plus golden-section
/// refinement around the five largest local maxima. Throws NumericError when
/// a pole lies within 1e-8 of the unit circle.
double inf_norm(const RationalTF& g);

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;  // output row stored as a column: y = c^T x + d u
  double d = 0.0;
  double h = 1.0;

  int order() const { return static_cast<int>(A.rows()); }
  Complex freq_response(double omega) const;
};

/// Controllable canonical form after cancellation at kRealizeCancelTol.
/// Throws ValidationError for improper g.
StateSpace realize(const RationalTF& g);

/// Transfer function of a realization (Faddeev-LeVerrier).
RationalTF transfer_function(const StateSpace& ss);

/// Runs a realization one sample at a time. The output is read before the
/// state update so strictly proper blocks need no input to produce y_k.
class StateSpaceBlock {
 public:
  explicit StateSpaceBlock(StateSpace ss);
  double output(double u) const { return ss_.c.dot(x_) + ss_.d * u; }
  void update(double u) { x_ = ss_.A * x_ + ss_.b * u; }
  const Eigen::VectorXd& state() const { return x_; }
  const StateSpace& model() const { return ss_; }

 private:
  StateSpace ss_;
  Eigen::VectorXd x_;
};

}  // namespace netsmith::lti
