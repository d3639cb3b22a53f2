#pragma once

#include <string>
#include <vector>

namespace dedmon::signal {

/// Continuous AE capture from one specimen. Samples are volts; float storage
/// matches the on-disk waveform format bit for bit.
struct AeRecording {
    std::string specimen_id;
    double sample_rate_hz = 500000.0;
    std::vector<float> samples;
    double start_time_s = 0.0;

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

/// Throws InvalidInput on a non-positive rate, an empty buffer or a
/// non-finite sample.
void validate(const AeRecording& recording);

}  // namespace dedmon::signal
