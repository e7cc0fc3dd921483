#ifndef HYPERNASH_INSTANCE_IO_HPP
#define HYPERNASH_INSTANCE_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hypernash/percolation.hpp"
#include "hypernash/randgame.hpp"

namespace hypernash {

/// Malformed instance/bond text. `line` and `column` are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Oriented-cube text format, version line "hrg 1":
//   hrg 1
//   n=<int> alpha=<decimal|unknown>
//   <n lines of 2^(n-1) mark characters>
// Line i (0-based) holds the edges of player i; position j encodes the edge
// (base=insert_zero_bit(j, i), player=i) as '>' TowardOne, '<' TowardZero,
// '=' Tie. A trailing newline is required.
void write_instance(std::ostream& os, const OrientedCube& cube);
OrientedCube read_instance(std::istream& is);

// Bond text format, version line "hrp 1", same layout with p=<decimal|derived>
// and characters 'o' (open) / 'x' (closed).
void write_bond(std::ostream& os, const BondConfig& bond);
BondConfig read_bond(std::istream& is);

void save_instance(const std::string& path, const OrientedCube& cube);
OrientedCube load_instance(const std::string& path);
void save_bond(const std::string& path, const BondConfig& bond);
BondConfig load_bond(const std::string& path);

/// Shortest decimal that round-trips the value (to_chars).
std::string format_double(double value);

}  // namespace hypernash

#endif  // HYPERNASH_INSTANCE_IO_HPP
