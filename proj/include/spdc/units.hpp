#pragma once

// Unit conventions used throughout:
//   wavelengths in micrometers, angles in radians, lengths in mm unless
//   a suffix says otherwise. Degrees appear only at I/O boundaries.

namespace spdc {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline constexpr double nm_to_um(double nm) { return nm * 1e-3; }
inline constexpr double um_to_nm(double um) { return um * 1e3; }

}  // namespace spdc
