#pragma once

#include <string>

namespace circlot {

using WarningHandler = void (*)(const std::string& message);

/// Replace the process-wide warning sink (default prints to stderr).
/// Returns the previous handler. Intended to be set once at startup.
WarningHandler set_warning_handler(WarningHandler handler);

void emit_warning(const std::string& message);

}  // namespace circlot
