#pragma once

namespace iset::cli {

// Entry point shared by the iset binary and the tests.
// Exit codes: 0 ok, 1 usage, 2 input validation, 3 size cap, 4 internal bug.
int run(int argc, const char* const* argv);

} // namespace iset::cli
