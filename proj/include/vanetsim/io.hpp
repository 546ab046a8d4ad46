#pragma once

#include <string>

namespace vanet {

// Reads a whole file; throws ParseError naming the path when unreadable.
std::string read_file(const std::string& path);

// Writes text to a file, creating parent directories; throws ParseError on
// failure. Overwrites silently (idempotent command contract).
void write_file(const std::string& path, const std::string& text);

}  // namespace vanet
