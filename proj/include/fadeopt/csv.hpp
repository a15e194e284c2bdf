#pragma once

#include <string>
#include <vector>

namespace fadeopt {

// Reals are serialized with 17 significant digits so a reload is
// bit-faithful.
std::string format_real(double value);

std::vector<std::string> split_csv_line(const std::string& line);

std::string join_csv(const std::vector<std::string>& fields);

}  // namespace fadeopt
