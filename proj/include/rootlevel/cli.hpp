// Batch driver: config + flag parsing, volume and seed loading, one engine
// run, mask/metrics/summary export.
#pragma once

namespace rootlevel {

// Exit codes: 0 success, 2 config error, 3 data error, 4 iteration cap hit
// under --strict.
int run_cli(int argc, const char* const* argv);

}  // namespace rootlevel
