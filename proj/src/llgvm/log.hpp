#pragma once

#include <spdlog/spdlog.h>

namespace llgvm {

/// Shared library logger writing to stderr. Level comes from the LLGVM_LOG
/// environment variable (trace, debug, info, warn, error, off; default warn).
spdlog::logger& log();

}  // namespace llgvm
