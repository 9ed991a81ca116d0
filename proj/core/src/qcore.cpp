// Copyright 2026 The oqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqlab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oqlab/error.hpp"

namespace oqlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kMissingData: return "missing-data";
    case ErrorCode::kDegenerateData: return "degenerate-data";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Mat2 Mat2::adjoint() const {
  return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

bool Mat2::is_finite() const {
  return std::all_of(m.begin(), m.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] - b.m[k];
  return r;
}

Mat2 operator*(Complex s, const Mat2& a) {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = s * a.m[k];
  return r;
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.m[k] - b.m[k]));
  return worst;
}

JonesVector operator*(const Mat2& a, const JonesVector& v) {
  return {a(0, 0) * v.h + a(0, 1) * v.v, a(1, 0) * v.h + a(1, 1) * v.v};
}

Mat2 outer(const JonesVector& v) {
  return Mat2{{v.h * std::conj(v.h), v.h * std::conj(v.v), v.v * std::conj(v.h),
               v.v * std::conj(v.v)}};
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    invalid(std::string(name) + " must be finite");
  }
}

// Eigenvalues of a Hermitian 2x2 matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const Mat2& a) {
  const double mean = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double half_gap = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double radius = std::hypot(half_gap, std::abs(a(0, 1)));
  return {mean - radius, mean + radius};
}

}  // namespace

QubitState QubitState::from_density(const Mat2& rho) {
  if (!rho.is_finite()) invalid("density matrix has non-finite entries");
  if (max_abs_diff(rho, rho.adjoint()) > kTolerance) {
    invalid("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kTolerance) {
    std::ostringstream os;
    os << "density matrix trace " << rho.trace().real() << " differs from 1";
    invalid(os.str());
  }
  if (hermitian_eigenvalues(rho)[0] < -kTolerance) {
    invalid("density matrix is not positive semidefinite");
  }
  // Symmetrize so downstream code sees an exactly Hermitian matrix.
  Mat2 clean = 0.5 * (rho + rho.adjoint());
  return QubitState(clean);
}

QubitState QubitState::from_jones(const JonesVector& psi) {
  const double n2 = psi.norm_squared();
  if (!std::isfinite(n2) || n2 <= 0.0) invalid("Jones vector must be nonzero and finite");
  const double inv = 1.0 / std::sqrt(n2);
  return from_density(outer({psi.h * inv, psi.v * inv}));
}

QubitState QubitState::from_bloch(const BlochVector& r) {
  require_finite(r.x, "bloch x");
  require_finite(r.y, "bloch y");
  require_finite(r.z, "bloch z");
  if (r.norm() > 1.0 + kTolerance) invalid("Bloch vector lies outside the unit ball");
  // rho = (I + x sx + y sy + z sz)/2
  Mat2 rho{{Complex(0.5 * (1.0 + r.z), 0.0), Complex(0.5 * r.x, -0.5 * r.y),
            Complex(0.5 * r.x, 0.5 * r.y), Complex(0.5 * (1.0 - r.z), 0.0)}};
  return from_density(rho);
}

std::array<double, 2> QubitState::eigenvalues() const { return hermitian_eigenvalues(rho_); }

double QubitState::purity() const { return (rho_ * rho_).trace().real(); }

BlochVector bloch_vector(const QubitState& state) {
  const Mat2& r = state.density();
  // Tr(rho sx) = 2 Re rho01, Tr(rho sy) = 2 Im rho10, Tr(rho sz) = rho00 - rho11.
  return {2.0 * r(1, 0).real(), 2.0 * r(1, 0).imag(), (r(0, 0) - r(1, 1)).real()};
}

double fidelity(const QubitState& a, const QubitState& b) {
  const double overlap = (a.density() * b.density()).trace().real();
  const double dets = a.density().determinant().real() * b.density().determinant().real();
  return overlap + 2.0 * std::sqrt(std::max(0.0, dets));
}

JonesVector pure_amplitudes(double theta, double phi) {
  require_finite(theta, "theta");
  require_finite(phi, "phi");
  return {Complex(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi)};
}

QubitState make_pure_state(double theta, double phi) {
  return QubitState::from_density(outer(pure_amplitudes(theta, phi)));
}

QubitState make_mixed_state(double theta1, double theta2, double alpha) {
  require_finite(alpha, "alpha");
  if (std::abs(alpha) > 1.0) invalid("mixing parameter |alpha| must not exceed 1");
  const Mat2 first = outer(pure_amplitudes(theta1, 0.0));
  const Mat2 second = outer(pure_amplitudes(theta2, 0.0));
  return QubitState::from_density(0.5 * (1.0 + alpha) * first + 0.5 * (1.0 - alpha) * second);
}

Mat2 retarder_matrix(double angle, double retardance) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Complex e = std::polar(1.0, retardance);
  // R(angle) diag(1, e) R(-angle), R = [[c, -s], [s, c]]
  return Mat2{{c * c + s * s * e, c * s * (1.0 - e), c * s * (1.0 - e), s * s + c * c * e}};
}

Mat2 hwp_matrix(double angle) { return retarder_matrix(angle, kPi); }

Mat2 qwp_matrix(double angle) { return retarder_matrix(angle, 0.5 * kPi); }

PrepAngles PrepAngles::for_state(double theta, double phi) {
  require_finite(theta, "theta");
  require_finite(phi, "phi");
  return {(kPi + phi - theta) / 4.0, (0.5 * kPi - theta) / 2.0, kPi / 4.0};
}

namespace {

Mat2 preparation_chain(const PrepAngles& a) {
  return qwp_matrix(a.final_qwp) * hwp_matrix(a.hwp) * qwp_matrix(a.qwp);
}

}  // namespace

JonesVector waveplate_output(const PrepAngles& angles) {
  return preparation_chain(angles) * JonesVector{1.0, 0.0};
}

QubitState prepare_with_angles(const PrepAngles& angles) {
  return QubitState::from_jones(waveplate_output(angles));
}

QubitState prepare_via_waveplates(double theta, double phi) {
  return prepare_with_angles(PrepAngles::for_state(theta, phi));
}

QubitState apply_preparation_error(const QubitState& state,
                                   const std::array<double, 3>& angle_errors) {
  const BlochVector r = bloch_vector(state);
  const double len = r.norm();
  if (len < 1e-15) return state;
  const double theta = std::acos(std::clamp(r.z / len, -1.0, 1.0));
  const double phi = std::atan2(r.y, r.x);
  const PrepAngles nominal = PrepAngles::for_state(theta, phi);
  const PrepAngles actual{nominal.hwp + angle_errors[0], nominal.qwp + angle_errors[1],
                          nominal.final_qwp + angle_errors[2]};
  const Mat2 u = preparation_chain(actual) * preparation_chain(nominal).adjoint();
  return QubitState::from_density(u * state.density() * u.adjoint());
}

}  // namespace oqlab
