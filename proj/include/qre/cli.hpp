#pragma once

namespace qre {

/// Entry point behind the qre binary. Exit codes: 0 success (and zero
/// violations for verify), 1 violations or hard numerical errors, 2 usage
/// errors (bad flags, out-of-range suite parameters, malformed files).
int cli_main(int argc, const char* const* argv);

}  // namespace qre
