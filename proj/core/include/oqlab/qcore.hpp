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

// Single-qubit polarization states, Jones-calculus waveplates and the
// state families used throughout the library.
//
// Conventions: |H> = (1, 0)^T, |V> = (0, 1)^T. The Bloch z axis is the H/V
// axis and the x axis is the D/A axis, so |D> = (|H> + |V>)/sqrt(2) sits at
// x = +1. Angles are radians everywhere in this header.

#pragma once

#include <array>
#include <complex>
#include <numbers>

namespace oqlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

constexpr double radians(double degrees) { return degrees * kPi / 180.0; }
constexpr double degrees(double radians) { return radians * 180.0 / kPi; }

// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<Complex, 4> m{};

  constexpr Complex& operator()(int r, int c) { return m[2 * r + c]; }
  constexpr const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  static constexpr Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
  static constexpr Mat2 zero() { return Mat2{}; }

  Mat2 adjoint() const;
  Complex trace() const { return m[0] + m[3]; }
  Complex determinant() const { return m[0] * m[3] - m[1] * m[2]; }
  bool is_finite() const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, const Mat2& a);

// Largest absolute entry of a - b.
double max_abs_diff(const Mat2& a, const Mat2& b);

struct JonesVector {
  Complex h;
  Complex v;

  double norm_squared() const { return std::norm(h) + std::norm(v); }
};

JonesVector operator*(const Mat2& a, const JonesVector& v);

// |v><v|
Mat2 outer(const JonesVector& v);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

// A validated 2x2 density matrix: Hermitian, unit trace, positive
// semidefinite (each to 1e-12). Immutable once constructed.
class QubitState {
 public:
  static constexpr double kTolerance = 1e-12;

  // Throws Error(kInvalidArgument) when rho is not a valid density matrix.
  static QubitState from_density(const Mat2& rho);
  // Normalizes the vector; throws on a zero or non-finite vector.
  static QubitState from_jones(const JonesVector& psi);
  // Throws when |r| > 1 + 1e-12.
  static QubitState from_bloch(const BlochVector& r);

  const Mat2& density() const { return rho_; }

  // Eigenvalues in ascending order.
  std::array<double, 2> eigenvalues() const;
  double purity() const;

 private:
  explicit QubitState(const Mat2& rho) : rho_(rho) {}
  Mat2 rho_;
};

BlochVector bloch_vector(const QubitState& state);

// Uhlmann fidelity; for qubits F = Tr(rho sigma) + 2 sqrt(det rho det sigma).
double fidelity(const QubitState& a, const QubitState& b);

// cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>
JonesVector pure_amplitudes(double theta, double phi);
QubitState make_pure_state(double theta, double phi);

// (1 + alpha)/2 |Psi(theta1, 0)><..| + (1 - alpha)/2 |Psi(theta2, 0)><..|
QubitState make_mixed_state(double theta1, double theta2, double alpha);

// Rotated linear retarder with fast axis at `angle`:
// R(angle) diag(1, e^{i retardance}) R(-angle).
Mat2 retarder_matrix(double angle, double retardance);
Mat2 hwp_matrix(double angle);
Mat2 qwp_matrix(double angle);

// Waveplate settings of the preparation chain QWP(final) HWP(hwp) QWP(qwp)
// acting on |H>. The final quarter-wave plate normally stays at pi/4.
struct PrepAngles {
  double hwp = 0.0;
  double qwp = 0.0;
  double final_qwp = kPi / 4.0;

  // hwp = (pi + phi - theta)/4, qwp = (pi/2 - theta)/2.
  static PrepAngles for_state(double theta, double phi);
};

// Output Jones vector of the chain, global phase included.
JonesVector waveplate_output(const PrepAngles& angles);
QubitState prepare_with_angles(const PrepAngles& angles);
QubitState prepare_via_waveplates(double theta, double phi);

// Re-prepares `state` as if each preparation waveplate were rotated by the
// given error (radians, order hwp, qwp, final_qwp). The chain settings are
// taken from the dominant eigenvector, so the maximally mixed state is left
// untouched.
QubitState apply_preparation_error(const QubitState& state,
                                   const std::array<double, 3>& angle_errors);

}  // namespace oqlab
