#pragma once

#include <string>
#include <string_view>

namespace refnoise {

// Writes content to path via a temp file in the same directory plus an
// atomic rename, so readers never observe a truncated file. Throws
// std::runtime_error naming the path on any I/O failure.
void atomic_write_file(const std::string& path, std::string_view content);

}  // namespace refnoise
