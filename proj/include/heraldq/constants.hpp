#pragma once

namespace heraldq {

/// CODATA 2018 exact / recommended values, SI.
struct PhysicalConstants {
  double c = 299792458.0;          ///< m/s
  double eps0 = 8.8541878128e-12;  ///< F/m
  double hbar = 1.054571817e-34;   ///< J s
};

inline constexpr PhysicalConstants kCodata2018{};

}  // namespace heraldq
