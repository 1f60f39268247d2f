#include "starqec/metrology.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace starqec::metrology {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kDerivativeHermitianTol = 1e-9;
constexpr double kOutcomeFloor = 1e-15;

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

const char* to_string(Parameter which) {
  return which == Parameter::phi ? "phi" : "gamma";
}

Parameter parameter_from_string(std::string_view name) {
  if (name == "phi") return Parameter::phi;
  if (name == "gamma") return Parameter::gamma;
  throw std::invalid_argument("parameter must be phi or gamma, got " + std::string(name));
}

const ComplexMatrix& derivative(const source::ParamDerivativeFamily& family, Parameter which) {
  return which == Parameter::phi ? family.d_phi : family.d_gamma;
}

SldResult sld_and_qfi(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff) {
  if (rho.rows() != drho.rows() || rho.cols() != drho.cols()) {
    throw std::invalid_argument("state and derivative differ in shape");
  }
  if (qcore::hermiticity_error(drho) > kDerivativeHermitianTol) {
    throw std::invalid_argument("derivative is not Hermitian");
  }
  const auto eig = qcore::eig_hermitian(rho);
  const ComplexMatrix& v = eig.eigenvectors;
  const ComplexMatrix d = v.adjoint() * drho * v;  // d(m, n) = ⟨e_m|∂ρ|e_n⟩
  const Eigen::Index dim = rho.rows();
  ComplexMatrix l_eigen = ComplexMatrix::Zero(dim, dim);
  double j = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      const double denom = eig.eigenvalues(m) + eig.eigenvalues(n);
      if (denom <= cutoff) continue;
      l_eigen(m, n) = 2.0 * d(m, n) / denom;
      j += 2.0 * std::norm(d(m, n)) / denom;
    }
  }
  SldResult out;
  out.sld = v * l_eigen * v.adjoint();
  out.sld = (0.5 * (out.sld + out.sld.adjoint())).eval();
  out.qfi = j;
  out.rank_cutoff_used = cutoff;
  return out;
}

SldResult sld_and_qfi(const source::ParamDerivativeFamily& family, Parameter which) {
  return sld_and_qfi(family.state.matrix(), derivative(family, which));
}

double qfi(const source::ParamDerivativeFamily& family, Parameter which) {
  return sld_and_qfi(family, which).qfi;
}

Complex compatibility(const source::ParamDerivativeFamily& family) {
  const ComplexMatrix lp = sld_and_qfi(family, Parameter::phi).sld;
  const ComplexMatrix lg = sld_and_qfi(family, Parameter::gamma).sld;
  return (family.state.matrix() * (lp * lg - lg * lp)).trace();
}

double crb_variance(double qfi, long n_probes) {
  if (n_probes <= 0) throw std::invalid_argument("number of probes must be positive");
  if (!(qfi > 0.0)) throw NumericalError("unidentifiable: quantum Fisher information is zero");
  return 1.0 / (static_cast<double>(n_probes) * qfi);
}

std::array<ComplexVector, 4> local_measurement_basis(double theta) {
  const Complex phase = std::exp(kI * theta);
  ComplexVector a_plus(2), a_minus(2), b_plus(2), b_minus(2);
  a_plus << kInvSqrt2, kInvSqrt2 * phase;
  a_minus << kInvSqrt2, -kInvSqrt2 * phase;
  b_plus << kInvSqrt2, kInvSqrt2;
  b_minus << kInvSqrt2, -kInvSqrt2;
  return {qcore::tensor(a_plus, b_plus), qcore::tensor(a_plus, b_minus),
          qcore::tensor(a_minus, b_plus), qcore::tensor(a_minus, b_minus)};
}

LocalFisher local_measurement_fi(const source::ParamDerivativeFamily& family, double theta) {
  if (family.state.dim() != 4) {
    throw std::invalid_argument("local measurement acts on the two-qubit logical state");
  }
  LocalFisher out;
  for (const auto& e : local_measurement_basis(theta)) {
    const double p = (e.adjoint() * family.state.matrix() * e)(0, 0).real();
    if (p <= kOutcomeFloor) continue;
    const double dp_phi = (e.adjoint() * family.d_phi * e)(0, 0).real();
    const double dp_gamma = (e.adjoint() * family.d_gamma * e)(0, 0).real();
    out.fi_phi += dp_phi * dp_phi / p;
    out.fi_gamma += dp_gamma * dp_gamma / p;
  }
  return out;
}

double adaptive_theta(Parameter which, double phi) {
  return which == Parameter::phi ? std::numbers::pi / 2.0 - phi : -phi;
}

double error_propagation_variance(const source::ParamDerivativeFamily& family,
                                  const ObservableSpec& obs, Parameter which) {
  const ComplexMatrix& rho = family.state.matrix();
  if (obs.matrix.rows() != rho.rows()) throw std::invalid_argument("observable dimension mismatch");
  const double mean = real_trace(rho * obs.matrix);
  const double second = real_trace(rho * obs.matrix * obs.matrix);
  const double slope = real_trace(derivative(family, which) * obs.matrix);
  if (std::abs(slope) <= 1e-12) {
    throw NumericalError("vanishing sensitivity: observable mean does not depend on the parameter");
  }
  return (second - mean * mean) / (slope * slope);
}

ObservableSpec sld_observable(double alpha) {
  // ψ±^α in the |0_L1_L⟩ ± e^{iα}|1_L0_L⟩ ordering, i.e. our ψ±^{−α}.
  const ComplexVector plus = source::psi_plus(-alpha);
  const ComplexVector minus = source::psi_minus(-alpha);
  return {plus * plus.adjoint() - minus * minus.adjoint(), alpha};
}

ObservableSpec separable_observable(double alpha) {
  const auto basis = local_measurement_basis(alpha);
  static const double kParity[4] = {1.0, -1.0, -1.0, 1.0};
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) m += kParity[k] * basis[k] * basis[k].adjoint();
  return {m, alpha};
}

ObservableSpec optimal_estimator(double theta_ref, const SldResult& sld) {
  if (!(sld.qfi > 0.0)) throw NumericalError("unidentifiable: quantum Fisher information is zero");
  const Eigen::Index dim = sld.sld.rows();
  return {theta_ref * ComplexMatrix::Identity(dim, dim) + sld.sld / sld.qfi, theta_ref};
}

}  // namespace starqec::metrology
