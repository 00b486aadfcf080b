#pragma once

#include <stdexcept>
#include <string>

namespace gseq {

// Bad inputs, schema violations, impossible samples, conditioning on
// zero-probability events. The CLI maps these to exit code 2.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Accuracy failures: mass deficits beyond tolerance, solver brackets that
// never close, non-finite intermediates. The CLI maps these to exit code 3.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gseq
