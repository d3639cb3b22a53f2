#pragma once

#include <stdexcept>
#include <string>

namespace dedmon {

enum class ErrorKind {
    InvalidInput,
    EmptySignal,
    SegmentTooShort,
    DegenerateWindow,
    LayerExtraction,
    Alignment,
    InvalidGrouping,
    Augmentation,
    Schema,
    Split,
    Fold,
    TrainingDiverged,
    Config,
    CorruptFile,
    CorruptStream,
    Format,
    Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace dedmon
