#ifndef MLLOSS_IO_HPP_
#define MLLOSS_IO_HPP_

#include <string>

namespace mlloss {

// Writes via a temp file in the same directory and renames into place.
void write_file_atomic(const std::string& path, const std::string& content);

// Throws std::runtime_error naming the path if it cannot be read.
std::string read_file(const std::string& path);

bool file_exists(const std::string& path);

}  // namespace mlloss

#endif  // MLLOSS_IO_HPP_
