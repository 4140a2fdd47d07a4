#include "beamhop/pattern_io.hpp"

#include <fstream>
#include <sstream>

#include "beamhop/errors.hpp"

namespace beamhop {

std::string pattern_to_text(const BeamHoppingPattern& x) {
  std::ostringstream out;
  out << "# schema: " << kPatternSchema << "\n";
  out << x.n_cells() << ' ' << x.n_slot() << "\n";
  for (int i = 0; i < x.n_cells(); ++i) {
    for (int t = 0; t < x.n_slot(); ++t) {
      out << (x.lit(i, t) ? '1' : '0');
    }
    out << '\n';
  }
  return out.str();
}

BeamHoppingPattern pattern_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != std::string("# schema: ") + kPatternSchema) {
    throw ParseError("pattern: expected schema line '# schema: " + std::string(kPatternSchema) + "'");
  }
  int n_cells = 0;
  int n_slot = 0;
  if (!std::getline(in, line)) {
    throw ParseError("pattern: missing dimension line");
  }
  {
    std::istringstream dims(line);
    std::string extra;
    if (!(dims >> n_cells >> n_slot) || (dims >> extra) || n_cells < 1 || n_slot < 1) {
      throw ParseError("pattern: bad dimension line '" + line + "'");
    }
  }
  Eigen::MatrixXi x(n_cells, n_slot);
  for (int i = 0; i < n_cells; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("pattern: expected " + std::to_string(n_cells) + " rows, found " + std::to_string(i));
    }
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (static_cast<int>(line.size()) != n_slot) {
      throw ParseError("pattern: row " + std::to_string(i) + " has " + std::to_string(line.size()) +
                       " entries, expected " + std::to_string(n_slot));
    }
    for (int t = 0; t < n_slot; ++t) {
      const char c = line[static_cast<std::size_t>(t)];
      if (c != '0' && c != '1') {
        throw ParseError("pattern: row " + std::to_string(i) + " contains '" + std::string(1, c) + "'");
      }
      x(i, t) = c == '1' ? 1 : 0;
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") {
      throw ParseError("pattern: trailing content after the last row");
    }
  }
  return BeamHoppingPattern(std::move(x));
}

void save_pattern(const BeamHoppingPattern& x, const std::string& path) {
  write_text_file(path, pattern_to_text(x));
}

BeamHoppingPattern load_pattern(const std::string& path) { return pattern_from_text(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path);
  }
  out << content;
  if (!out) {
    throw Error("write failed for " + path);
  }
}

} // namespace beamhop
