#pragma once

// Natural units: hbar = c = m = 1. Lengths are in reduced Compton wavelengths
// (lambda-bar = hbar / (m c)), times in lambda-bar / c, momenta in m c and
// energies in m c^2. SI conversions are used only when labelling output.

namespace dtt {

struct UnitSystem {
  static constexpr double hbar = 1.0;
  static constexpr double c = 1.0;
  static constexpr double m = 1.0;

  /// Reduced Compton wavelength of the electron, fm (CODATA 2018).
  static constexpr double length_unit_fm = 386.15926796;
  static constexpr double speed_of_light_m_per_s = 299792458.0;

  /// lambda-bar / c in zeptoseconds (about 1.29 zs).
  static constexpr double time_unit_zs =
      length_unit_fm * 1e-15 / speed_of_light_m_per_s * 1e21;

  static constexpr double to_fm(double length) { return length * length_unit_fm; }
  static constexpr double to_zs(double time) { return time * time_unit_zs; }
};

}  // namespace dtt
