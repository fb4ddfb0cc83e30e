#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dots/error.hpp"
#include "dots/lens.hpp"
#include "dots/wiring.hpp"

namespace dots {

/// An Error raised while reading diagram text, with a 1-based position.
class SourceError : public Error {
 public:
  SourceError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct UwdPort {
  std::string name;
  std::size_t junction = 0;
  friend bool operator==(const UwdPort&, const UwdPort&) = default;
};

struct UwdBox {
  std::string name;
  std::vector<UwdPort> ports;
  friend bool operator==(const UwdBox&, const UwdBox&) = default;
};

/// An undirected wiring diagram with its names. Port types are those of the
/// junctions they attach to; `junction_types` is empty when untyped.
struct Uwd {
  std::vector<std::string> types;
  std::vector<std::string> junctions;
  std::vector<std::size_t> junction_types;
  std::vector<UwdBox> boxes;
  std::vector<UwdPort> outer;

  bool typed() const noexcept { return !types.empty(); }
  /// Inner ports of all boxes in order -> junctions <- outer ports.
  Cospan cospan() const;
  std::vector<std::size_t> box_arities() const;
  friend bool operator==(const Uwd&, const Uwd&) = default;
};

/// Grammar in docs/uwd.md. Throws SourceError (SyntaxError, UnknownJunction, TypeClash).
Uwd parse_uwd(std::string_view text);
std::string print_uwd(const Uwd& uwd);

/// A directed wiring diagram with the text positions kept out of the value.
/// Grammar in docs/dwd.md. Throws SourceError; MultipleFeeds names the port.
DirectedWiringDiagram parse_dwd(std::string_view text);
std::string print_dwd(const DirectedWiringDiagram& d);

}  // namespace dots
