#pragma once

#include <chrono>

#include "hwmi/registry.hpp"

namespace hwmi {

struct TimeoutError;   // ddnnf.hpp

// Cheap cooperative timeout: callers sprinkle check() into hot loops; the
// clock is consulted every 1024 ticks.
class Deadline {
public:
    Deadline() = default;
    explicit Deadline(long timeout_ms)
        : armed_(true),
          t_(std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms)) {}

    void check() const;

private:
    bool armed_ = false;
    std::chrono::steady_clock::time_point t_;
    mutable unsigned ticks_ = 0;
};

} // namespace hwmi
