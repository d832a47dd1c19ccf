#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsacf::cli {

/// Bad flag value or flag combination; exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Runs one command line.
 *
 * Returns 0 on success, 1 on a data or numerical error and 2 on a usage
 * error. Paths given as `-` refer to in and out.
 */
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fsacf::cli
