#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace fairmatch {

/// Exact rational used for every probability, mass, distance and tolerance.
using Prob = mpq_class;

/// Parses "p/q" or "p" (optional leading minus). Throws std::invalid_argument.
Prob parse_prob(std::string_view text);

/// Canonical "p/q", or "p" when the denominator is 1.
std::string format_prob(const Prob& value);

Prob sum(const std::vector<Prob>& values);
Prob min_of(const Prob& a, const Prob& b);
Prob max_of(const Prob& a, const Prob& b);
Prob abs_of(const Prob& a);

}  // namespace fairmatch
