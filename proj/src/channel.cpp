#include "dampdisc/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dampdisc {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << v;
    throw NumericError(os.str());
  }
}

ComplexMatrix sandwich(const ComplexMatrix& k, const ComplexMatrix& rho) {
  return k * rho * k.adjoint();
}

// Kraus maps accumulate tiny asymmetries from operation order; symmetrize
// before handing the result to the validating DensityMatrix constructor.
ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DampingChannel::DampingChannel(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= std::numbers::pi / 2.0)) {
    std::ostringstream os;
    os << "damping parameter eta must lie in [0, pi/2], got " << eta;
    throw NumericError(os.str());
  }
}

double DampingChannel::decay_probability() const {
  const double s = std::sin(eta_);
  return s * s;
}

PureState InputState::state() const {
  require_unit_interval(x, "x");
  return PureState({Complex(std::sqrt(1.0 - x), 0.0), std::polar(std::sqrt(x), -phi)});
}

PureState SideEntangledInput::state() const {
  require_unit_interval(y, "y");
  return PureState({0.0, std::sqrt(1.0 - y), std::sqrt(y), 0.0});
}

PureState two_shot_entangled_input(TwoShotVariant variant, double x) {
  require_unit_interval(x, "x");
  const double a = std::sqrt(1.0 - x);
  const double b = std::sqrt(x);
  if (variant == TwoShotVariant::Odd) return PureState({0.0, a, b, 0.0});
  return PureState({a, 0.0, 0.0, b});
}

ComplexMatrix dilation_hamiltonian(const DampingChannel& ch) {
  ComplexMatrix h(4);
  h(1, 2) = ch.eta();
  h(2, 1) = ch.eta();
  return h;
}

ComplexMatrix dilation_unitary(const DampingChannel& ch) {
  const double c = std::cos(ch.eta());
  const double s = std::sin(ch.eta());
  ComplexMatrix u = ComplexMatrix::identity(4);
  u(1, 1) = c;
  u(1, 2) = -kI * s;
  u(2, 1) = -kI * s;
  u(2, 2) = c;
  return u;
}

KrausPair kraus(const DampingChannel& ch) {
  KrausPair k{ComplexMatrix::diagonal({1.0, std::cos(ch.eta())}), ComplexMatrix(2)};
  k.k1(0, 1) = -kI * std::sin(ch.eta());
  return k;
}

DensityMatrix apply(const DampingChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw NumericError("apply expects a single-qubit density matrix");
  const KrausPair k = kraus(ch);
  return DensityMatrix(hermitize(sandwich(k.k0, rho) + sandwich(k.k1, rho)));
}

DensityMatrix apply_via_dilation(const DampingChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw NumericError("apply_via_dilation expects a single-qubit density matrix");
  const ComplexMatrix env0 = ComplexMatrix::diagonal({1.0, 0.0});
  const ComplexMatrix u = dilation_unitary(ch);
  const ComplexMatrix joint = u * tensor(rho.mat(), env0) * u.adjoint();
  return DensityMatrix(hermitize(partial_trace(joint, Subsystem::Second)));
}

DensityMatrix output_state(const DampingChannel& ch, const InputState& inp) {
  return apply(ch, DensityMatrix(inp.state()));
}

ComplexMatrix output_state_closed_form(const DampingChannel& ch, const InputState& inp) {
  require_unit_interval(inp.x, "x");
  const double x = inp.x;
  const double s = std::sin(ch.eta());
  const double c = std::cos(ch.eta());
  const double coh = std::sqrt(x * (1.0 - x)) * c;
  ComplexMatrix m(2);
  m(0, 0) = 1.0 - x + x * s * s;
  m(0, 1) = std::polar(coh, inp.phi);
  m(1, 0) = std::polar(coh, -inp.phi);
  m(1, 1) = x * c * c;
  return m;
}

ComplexMatrix apply_local_pair(const DampingChannel& first, const DampingChannel& second,
                               const ComplexMatrix& rho) {
  if (rho.dim() != 4) throw NumericError("apply_local_pair expects a two-qubit operator");
  const KrausPair ka = kraus(first);
  const KrausPair kb = kraus(second);
  ComplexMatrix out(4);
  for (const ComplexMatrix* a : {&ka.k0, &ka.k1})
    for (const ComplexMatrix* b : {&kb.k0, &kb.k1}) out += sandwich(tensor(*a, *b), rho);
  return hermitize(out);
}

DensityMatrix side_entangled_output(const DampingChannel& ch, const SideEntangledInput& inp) {
  const DampingChannel identity(0.0);
  return DensityMatrix(apply_local_pair(identity, ch, inp.state().projector()));
}

ComplexMatrix side_entangled_output_closed_form(const DampingChannel& ch,
                                                const SideEntangledInput& inp) {
  require_unit_interval(inp.y, "y");
  const double y = inp.y;
  const double s = std::sin(ch.eta());
  const double c = std::cos(ch.eta());
  ComplexMatrix m(4);
  m(0, 0) = (1.0 - y) * s * s;
  m(1, 1) = c * c * (1.0 - y);
  m(2, 2) = y;
  m(1, 2) = std::sqrt(y * (1.0 - y)) * c;
  m(2, 1) = m(1, 2);
  return m;
}

DensityMatrix two_shot_entangled_output(const DampingChannel& ch, TwoShotVariant variant, double x) {
  return DensityMatrix(apply_local_pair(ch, ch, two_shot_entangled_input(variant, x).projector()));
}

ComplexMatrix two_shot_entangled_closed_form(const DampingChannel& ch, TwoShotVariant variant,
                                             double x) {
  require_unit_interval(x, "x");
  const double s2 = std::pow(std::sin(ch.eta()), 2);
  const double c2 = std::pow(std::cos(ch.eta()), 2);
  const double coh = std::sqrt(x * (1.0 - x)) * c2;
  ComplexMatrix m(4);
  if (variant == TwoShotVariant::Odd) {
    m(0, 0) = s2;
    m(1, 1) = (1.0 - x) * c2;
    m(2, 2) = x * c2;
    m(1, 2) = coh;
    m(2, 1) = coh;
  } else {
    m(0, 0) = (1.0 - x) + x * s2 * s2;
    m(1, 1) = x * s2 * c2;
    m(2, 2) = x * s2 * c2;
    m(3, 3) = x * c2 * c2;
    m(0, 3) = coh;
    m(3, 0) = coh;
  }
  return m;
}

}  // namespace dampdisc
