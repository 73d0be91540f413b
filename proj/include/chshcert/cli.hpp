#pragma once

#include <ostream>

namespace chshcert {

enum ExitCode { kExitOk = 0, kExitRefuted = 1, kExitUsage = 2, kExitBudget = 3 };

int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace chshcert
