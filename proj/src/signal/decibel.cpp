#include "dedmon/signal/decibel.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"

namespace dedmon::signal {

double amplitude_db(double volts, double reference_volts) {
    if (!(reference_volts > 0.0)) raise(ErrorKind::InvalidInput, "dB reference must be positive");
    return 20.0 * std::log10(std::max(std::abs(volts), kAmplitudeFloorVolts) / reference_volts);
}

}  // namespace dedmon::signal
