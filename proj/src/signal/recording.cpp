#include "dedmon/signal/recording.hpp"

#include <cmath>

#include "dedmon/core/error.hpp"

namespace dedmon::signal {

void validate(const AeRecording& recording) {
    if (!(recording.sample_rate_hz > 0.0)) raise(ErrorKind::InvalidInput, "sample rate must be positive");
    if (recording.samples.empty()) raise(ErrorKind::InvalidInput, "recording has no samples");
    for (std::size_t i = 0; i < recording.samples.size(); ++i) {
        if (!std::isfinite(recording.samples[i])) {
            raise(ErrorKind::InvalidInput, "non-finite sample " + std::to_string(i) + " in " + recording.specimen_id);
        }
    }
}

}  // namespace dedmon::signal
