#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "cpath/blackbox.hpp"

namespace cpath {

struct BridgeOptions {
  std::chrono::milliseconds handshake_timeout{10000};
  std::chrono::milliseconds request_timeout{120000};
};

/// Starts `command` as a child process speaking the cpath line protocol over
/// its stdin/stdout:
///
///   parent -> child:  HELLO cpath/1
///   child  -> parent: OK <g>
///   per request:      PREDICT <n> <p>, then n comma-separated float rows;
///                     child answers n integer labels in 1..g, then END.
///
/// Any other child output is a protocol error. The handle serializes
/// requests (one in flight per child); the child must be stateless across
/// requests.
std::unique_ptr<BlackBoxModel> spawn_external_model(const std::vector<std::string>& command,
                                                    const BridgeOptions& options = {});

}  // namespace cpath
