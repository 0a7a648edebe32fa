#include "hwmi/deadline.hpp"

#include "hwmi/ddnnf.hpp"

namespace hwmi {

void Deadline::check() const {
    if (!armed_) return;
    if (++ticks_ % 1024 != 1) return;   // consult the clock at tick 1, 1025, ...
    if (std::chrono::steady_clock::now() > t_) throw TimeoutError("evaluation timed out");
}

} // namespace hwmi
