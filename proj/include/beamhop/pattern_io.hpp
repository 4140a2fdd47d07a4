#pragma once

#include <string>

#include "beamhop/metrics.hpp"

namespace beamhop {

inline constexpr const char* kPatternSchema = "beamhop-pattern/1";

/// Text form:
///   # schema: beamhop-pattern/1
///   <n_cells> <n_slot>
///   one line of n_slot '0'/'1' characters per cell
std::string pattern_to_text(const BeamHoppingPattern& x);

/// Throws ParseError on a missing schema line, bad dimensions or stray characters.
BeamHoppingPattern pattern_from_text(const std::string& text);

void save_pattern(const BeamHoppingPattern& x, const std::string& path);
BeamHoppingPattern load_pattern(const std::string& path);

/// Whole-file helpers; both throw Error naming the path on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace beamhop
