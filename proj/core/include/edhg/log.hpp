#pragma once

#include <spdlog/logger.h>

namespace edhg {

// Process-wide stderr logger. Level comes from the EDHG_LOG environment
// variable (trace, debug, info, warn, error, off); default warn.
spdlog::logger& log();

}  // namespace edhg
