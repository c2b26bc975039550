#include "netsmith/errors.hpp"
#include "netsmith/lti.hpp"

namespace netsmith::lti {

Complex StateSpace::freq_response(double omega) const {
  const Complex z = std::polar(1.0, omega * h);
  const int n = order();
  if (n == 0) return Complex(d, 0.0);
  Eigen::MatrixXcd m = z * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
  Eigen::VectorXcd x = m.partialPivLu().solve(b.cast<Complex>());
  return c.cast<Complex>().dot(x) + d;
}

StateSpace realize(const RationalTF& g) {
  const RationalTF m = g.cancel(kRealizeCancelTol);
  if (!m.is_proper()) throw ValidationError("cannot realize an improper transfer function");
  const int n = m.den().degree();
  StateSpace ss;
  ss.h = m.h();
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.b = Eigen::VectorXd::Zero(n);
  ss.c = Eigen::VectorXd::Zero(n);
  const double b0 = m.num().coefficient(n);
  ss.d = b0;
  if (n == 0) return ss;
  for (int j = 0; j < n; ++j) ss.A(0, j) = -m.den().coefficient(n - 1 - j);
  for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
  ss.b(0) = 1.0;
  for (int j = 0; j < n; ++j) {
    const int power = n - 1 - j;
    ss.c(j) = m.num().coefficient(power) - b0 * m.den().coefficient(power);
  }
  return ss;
}

RationalTF transfer_function(const StateSpace& ss) {
  const int n = ss.order();
  if (ss.A.cols() != n || ss.b.size() != n || ss.c.size() != n)
    throw ValidationError("state-space dimensions are inconsistent");
  if (n == 0) return RationalTF::gain(ss.d, ss.h);
  std::vector<double> den(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> num(static_cast<size_t>(n) + 1, 0.0);
  den[0] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    num[static_cast<size_t>(k)] = ss.c.dot(mk * ss.b);
    const Eigen::MatrixXd am = ss.A * mk;
    const double ck = -am.trace() / k;
    den[static_cast<size_t>(k)] = ck;
    mk = am + ck * Eigen::MatrixXd::Identity(n, n);
  }
  for (int k = 0; k <= n; ++k) num[static_cast<size_t>(k)] += ss.d * den[static_cast<size_t>(k)];
  return RationalTF(Polynomial(num), Polynomial(den), ss.h);
}

StateSpaceBlock::StateSpaceBlock(StateSpace ss) : ss_(std::move(ss)), x_(Eigen::VectorXd::Zero(ss_.order())) {}

}  // namespace netsmith::lti
