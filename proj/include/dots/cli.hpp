#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dots/dsl.hpp"
#include "dots/io.hpp"
#include "dots/machine.hpp"
#include "dots/ode.hpp"
#include "dots/petri.hpp"

namespace dots {

/// The window of the timeline system, as loaded from {"kind": "timeline", "horizon": T}.
struct TimelineSpec {
  std::size_t horizon = 0;
};

using Artifact = std::variant<OpenPetriNet, Machine, OdeSystem, Uwd, DirectedWiringDiagram, io::json, TimelineSpec>;

std::string kind_name(const Artifact& a);

/// Everything loaded during one command, registered by file stem per kind.
class Workspace {
 public:
  /// Reads a file; .uwd and .dwd are diagram text, anything else JSON.
  /// Loading the same file twice returns the first result. Errors are
  /// rethrown with the path prefixed.
  const Artifact& load(const std::filesystem::path& path);

  /// Registers a value under `name`; throws InvalidValue if that kind already has the name.
  const Artifact& add(const std::string& name, Artifact value);

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, Artifact> entries_;  // (kind, name)
  std::map<std::string, const Artifact*> by_path_;
};

/// Reads a whole file; IoError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// The command-line front end. Returns the process exit code: 0 on success,
/// 1 when check-map finds a failing square, 2 on errors (reported on `err`
/// as one line of JSON followed by a human-readable line).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dots
