#pragma once

#include <stdexcept>

namespace causetlab {

// Exit-code-bearing error categories: usage 1, budget 2, io 3.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace causetlab
