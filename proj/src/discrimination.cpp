#include "dampdisc/discrimination.hpp"

#include <cmath>
#include <sstream>

namespace dampdisc {

PriorPair::PriorPair(double p0_, double p1_) : p0(p0_), p1(p1_) {
  if (!(p0 >= 0.0 && p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "invalid priors (" << p0 << ", " << p1 << ")";
    throw NumericError(os.str());
  }
}

ComplexMatrix nonnegative_projector(const ComplexMatrix& gamma) {
  const EigenDecomposition eig = hermitian_eig(gamma);
  ComplexMatrix p(gamma.dim());
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > -kZeroEigenTol) p += eig.eigenvectors[i].projector();
  }
  return p;
}

HelstromResult helstrom(const DensityMatrix& rho0, const DensityMatrix& rho1, PriorPair priors) {
  if (rho0.dim() != rho1.dim()) {
    throw NumericError("helstrom: density matrices have different dimensions");
  }
  const ComplexMatrix gamma = priors.p0 * rho0.mat() - priors.p1 * rho1.mat();
  HelstromResult r;
  r.projector_plus = nonnegative_projector(gamma);
  r.projector_minus = ComplexMatrix::identity(rho0.dim()) - r.projector_plus;
  r.psucc = priors.p0 * (rho0.mat() * r.projector_plus).trace().real() +
            priors.p1 * (rho1.mat() * r.projector_minus).trace().real();
  return r;
}

double helstrom_psucc_equal_priors(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  return 0.5 * (1.0 + 0.5 * trace_norm(rho0 - rho1));
}

double weighted_guess_value(double w0, const ComplexMatrix& rho0, double w1,
                            const ComplexMatrix& rho1) {
  return 0.5 * (w0 + w1 + trace_norm(w0 * rho0 - w1 * rho1));
}

double pure_state_psucc(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw NumericError("pure_state_psucc: dimension mismatch");
  // 1 - |<a|b>|^2 via the Lagrange identity: no cancellation when a ~ b.
  double gap = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) gap += std::norm(a[i] * b[j] - a[j] * b[i]);
  return 0.5 * (1.0 + std::sqrt(gap));
}

void Povm::validate() const {
  if (effects.empty()) throw NumericError("POVM has no effects");
  const int dim = effects.front().dim();
  ComplexMatrix sum(dim);
  for (const ComplexMatrix& e : effects) {
    const Spectrum s = hermitian_eigenvalues(e);
    if (s.values[s.dim - 1] < -1e-10 || s.values[0] > 1.0 + 1e-10) {
      std::ostringstream os;
      os << "POVM effect has eigenvalues outside [0, 1]: [" << s.values[s.dim - 1] << ", "
         << s.values[0] << "]";
      throw NumericError(os.str());
    }
    sum += e;
  }
  const double dev = max_abs_diff(sum, ComplexMatrix::identity(dim));
  if (dev > 1e-10) {
    std::ostringstream os;
    os << "POVM effects do not sum to identity (deviation " << dev << ")";
    throw NumericError(os.str());
  }
}

BinaryPovm binary_povm(double l1, double l2, double theta, double chi) {
  const PureState u({Complex(std::cos(theta), 0.0), std::polar(std::sin(theta), chi)});
  const ComplexMatrix pu = u.projector();
  BinaryPovm m{l2 * ComplexMatrix::identity(2) + (l1 - l2) * pu};
  return m;
}

}  // namespace dampdisc
