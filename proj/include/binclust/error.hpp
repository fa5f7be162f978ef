#pragma once

#include <stdexcept>
#include <string>

namespace binclust {

// Malformed or inconsistent input data (files, label vectors, matrices).
// Parameter misuse is reported with std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace binclust
