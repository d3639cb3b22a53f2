#pragma once

#include <functional>
#include <string>

namespace dedmon {

using WarningSink = std::function<void(const std::string&)>;

// Non-fatal conditions (clamped selections, dropped columns, skipped windows)
// are reported here. The default sink writes to stderr.
void warn(const std::string& message);

// Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace dedmon
