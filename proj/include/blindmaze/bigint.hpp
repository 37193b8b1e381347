#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace bm {

// Exact arbitrary-precision integer used for algorithm lengths, instruction
// counts, power exponents and step budgets. Lengths routinely exceed 64 bits
// (nested powers), so these are never approximated by doubles.
using Big = boost::multiprecision::cpp_int;

}  // namespace bm
