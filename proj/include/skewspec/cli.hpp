#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace skewspec::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNumericalFailure = 2,
  kUsage = 64,
  kDataFormat = 65,
};

/// Written as manifest.json next to the artifacts of every command that has
/// an output directory.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;  // file names relative to the output directory
  std::string version;
  double wall_time = 0.0;  // seconds
};

std::string version_string();

/// Parses and runs one subcommand; args excludes the program name.
/// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv entry point (used by the skewspec executable).
int main(int argc, char** argv);

}  // namespace skewspec::cli
