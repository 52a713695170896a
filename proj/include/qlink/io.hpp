#pragma once

#include <string>

namespace qlink {

// 12 significant digits, locale-independent.
std::string format_double(double x);

// Writes via a temp file in the same directory followed by a rename, so an
// interrupted run never leaves a truncated file.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace qlink
