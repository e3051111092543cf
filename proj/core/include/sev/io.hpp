#pragma once

#include <string>

namespace sev::io {

// 17 significant digits, round-trip exact; non-finite values become "nan"/"inf".
std::string num(double x);

// Write via a temporary sibling file and rename.
void writeFileAtomic(const std::string& path, const std::string& content);

std::string readFile(const std::string& path);

} // namespace sev::io
