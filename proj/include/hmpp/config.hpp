#pragma once

// Single source for the tolerances used across the library and its checks.
namespace hmpp::tol {

inline constexpr double geometric = 1e-8;    // exp/log roundtrip, slack floors
inline constexpr double structural = 1e-12;  // symmetry / representation checks
inline constexpr double sheet = 1e-10;       // hyperboloid constraint drift
inline constexpr double isometry = 1e-9;     // parallel transport inner products
inline constexpr double eigen_floor = 1e-14; // eigenvalue clamp before matrix log
inline constexpr double tiny_vector = 1e-12; // exp_map short-circuit threshold
inline constexpr double boundary = 1e-9;     // active-constraint detection
inline constexpr double stationarity = 1e-6; // reference solution residual
inline constexpr double monitor = 1e-7;      // Fejer slack floor for certified steps

}  // namespace hmpp::tol
