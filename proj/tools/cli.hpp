#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellviol::cli {

// One CLI invocation. Every subcommand emits a single JSON document
// {"manifest": ..., "result": ...}; the manifest records the invocation
// (argv, seed, version, wall clock) and an FNV-1a digest of the result, so
// reruns with the same seed can be compared on the "result" subtree alone.
// Returns the process exit code: 0 on success, 2 for rejected input or
// usage errors, 1 for anything else.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace bellviol::cli
