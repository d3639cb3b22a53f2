#include "dedmon/core/error.hpp"

namespace dedmon {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::EmptySignal: return "empty-signal";
    case ErrorKind::SegmentTooShort: return "segment-too-short";
    case ErrorKind::DegenerateWindow: return "degenerate-window";
    case ErrorKind::LayerExtraction: return "layer-extraction";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::InvalidGrouping: return "invalid-grouping";
    case ErrorKind::Augmentation: return "augmentation";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Split: return "split";
    case ErrorKind::Fold: return "fold";
    case ErrorKind::TrainingDiverged: return "training-diverged";
    case ErrorKind::Config: return "config";
    case ErrorKind::CorruptFile: return "corrupt-file";
    case ErrorKind::CorruptStream: return "corrupt-stream";
    case ErrorKind::Format: return "format";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace dedmon
