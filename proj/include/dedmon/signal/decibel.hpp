#pragma once

namespace dedmon::signal {

/// 1 uV, the customary AE sensor reference.
inline constexpr double kAeReferenceVolts = 1e-6;
inline constexpr double kAmplitudeFloorVolts = 1e-12;

/// 20 log10(max(|v|, 1e-12) / reference). reference must be positive.
double amplitude_db(double volts, double reference_volts = kAeReferenceVolts);

}  // namespace dedmon::signal
