#include "hypernash/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hypernash {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

struct LineReader {
  std::istream& is;
  int line_no = 0;

  std::string next(const char* what) {
    std::string line;
    if (!std::getline(is, line)) {
      throw ParseError(line_no + 1, 1, std::string("missing ") + what);
    }
    ++line_no;
    return line;
  }
};

// Parses "n=<int> <param>=<decimal|none_word>" and returns (dim, value).
std::pair<Dimension, std::optional<double>> parse_header(
    const std::string& line, int line_no, const std::string& param,
    const std::string& none_word) {
  const std::string n_prefix = "n=";
  if (line.rfind(n_prefix, 0) != 0) {
    throw ParseError(line_no, 1, "expected 'n='");
  }
  const std::size_t space = line.find(' ');
  if (space == std::string::npos) {
    throw ParseError(line_no, static_cast<int>(line.size()) + 1,
                     "expected ' " + param + "='");
  }
  int n = 0;
  {
    const char* begin = line.data() + n_prefix.size();
    const char* end = line.data() + space;
    const auto res = std::from_chars(begin, end, n);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ParseError(line_no, static_cast<int>(n_prefix.size()) + 1,
                       "invalid dimension");
    }
  }
  const std::string p_prefix = param + "=";
  if (line.compare(space + 1, p_prefix.size(), p_prefix) != 0) {
    throw ParseError(line_no, static_cast<int>(space) + 2,
                     "expected '" + p_prefix + "'");
  }
  const std::size_t val_pos = space + 1 + p_prefix.size();
  const std::string value = line.substr(val_pos);
  std::optional<double> out;
  if (value != none_word) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
        !(v >= 0.0 && v <= 1.0)) {
      throw ParseError(line_no, static_cast<int>(val_pos) + 1,
                       "invalid " + param + " value '" + value + "'");
    }
    out = v;
  }
  try {
    return {Dimension(n), out};
  } catch (const std::exception& e) {
    throw ParseError(line_no, static_cast<int>(n_prefix.size()) + 1, e.what());
  }
}

void check_version(const std::string& line, int line_no, const std::string& magic) {
  if (line != magic + " 1") {
    throw ParseError(line_no, 1, "expected '" + magic + " 1'");
  }
}

template <typename WriteChar>
void write_grid(std::ostream& os, Dimension dim, WriteChar write_char) {
  const std::uint32_t half = dim.vertex_count() >> 1;
  for (int i = 0; i < dim.n(); ++i) {
    for (std::uint32_t j = 0; j < half; ++j) {
      os.put(write_char((static_cast<std::uint64_t>(i) << (dim.n() - 1)) | j));
    }
    os.put('\n');
  }
}

template <typename ApplyChar>
void read_grid(LineReader& reader, Dimension dim, ApplyChar apply_char) {
  const std::uint32_t half = dim.vertex_count() >> 1;
  for (int i = 0; i < dim.n(); ++i) {
    const std::string line = reader.next("mark line");
    if (line.size() != half) {
      throw ParseError(reader.line_no, static_cast<int>(line.size()) + 1,
                       "expected " + std::to_string(half) + " characters, got " +
                           std::to_string(line.size()));
    }
    for (std::uint32_t j = 0; j < half; ++j) {
      apply_char((static_cast<std::uint64_t>(i) << (dim.n() - 1)) | j, line[j],
                 reader.line_no, static_cast<int>(j) + 1);
    }
  }
}

}  // namespace

void write_instance(std::ostream& os, const OrientedCube& cube) {
  os << "hrg 1\n";
  os << "n=" << cube.dim.n() << " alpha="
     << (cube.alpha ? format_double(*cube.alpha) : std::string("unknown")) << "\n";
  write_grid(os, cube.dim, [&](std::uint64_t e) {
    switch (cube.marks[e]) {
      case EdgeMark::TowardOne: return '>';
      case EdgeMark::TowardZero: return '<';
      default: return '=';
    }
  });
}

OrientedCube read_instance(std::istream& is) {
  LineReader reader{is};
  check_version(reader.next("version line"), 1, "hrg");
  const auto [dim, alpha] = parse_header(reader.next("header line"), 2, "alpha", "unknown");
  OrientedCube cube{dim, std::vector<EdgeMark>(dim.edge_count()), alpha};
  read_grid(reader, dim, [&](std::uint64_t e, char c, int line, int col) {
    switch (c) {
      case '>': cube.marks[e] = EdgeMark::TowardOne; break;
      case '<': cube.marks[e] = EdgeMark::TowardZero; break;
      case '=': cube.marks[e] = EdgeMark::Tie; break;
      default:
        throw ParseError(line, col, std::string("invalid mark character '") + c + "'");
    }
  });
  return cube;
}

void write_bond(std::ostream& os, const BondConfig& bond) {
  os << "hrp 1\n";
  os << "n=" << bond.dim.n() << " p="
     << (bond.p ? format_double(*bond.p) : std::string("derived")) << "\n";
  write_grid(os, bond.dim,
             [&](std::uint64_t e) { return bond.open.test(e) ? 'o' : 'x'; });
}

BondConfig read_bond(std::istream& is) {
  LineReader reader{is};
  check_version(reader.next("version line"), 1, "hrp");
  const auto [dim, p] = parse_header(reader.next("header line"), 2, "p", "derived");
  BondConfig bond{dim, Bitset(dim.edge_count()), p};
  read_grid(reader, dim, [&](std::uint64_t e, char c, int line, int col) {
    switch (c) {
      case 'o': bond.open.set(e); break;
      case 'x': break;
      default:
        throw ParseError(line, col, std::string("invalid bond character '") + c + "'");
    }
  });
  return bond;
}

namespace {

template <typename Writer>
void save_text(const std::string& path, Writer writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  writer(os);
  os.flush();
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

template <typename Reader>
auto load_text(const std::string& path, Reader reader) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::ios_base::failure("cannot open for reading: " + path);
  return reader(is);
}

}  // namespace

void save_instance(const std::string& path, const OrientedCube& cube) {
  save_text(path, [&](std::ostream& os) { write_instance(os, cube); });
}

OrientedCube load_instance(const std::string& path) {
  return load_text(path, [](std::istream& is) { return read_instance(is); });
}

void save_bond(const std::string& path, const BondConfig& bond) {
  save_text(path, [&](std::ostream& os) { write_bond(os, bond); });
}

BondConfig load_bond(const std::string& path) {
  return load_text(path, [](std::istream& is) { return read_bond(is); });
}

}  // namespace hypernash
