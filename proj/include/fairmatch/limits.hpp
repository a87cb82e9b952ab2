#pragma once

#include <cstddef>

namespace fairmatch {

/// Caps on exhaustive enumeration.
struct EnumLimits {
  unsigned long long max_profiles = 10000;  // hospital preference profiles / product laws
  int max_subset_n = 10;                    // largest ground set for subset enumeration

  /// Reads FAIRMATCH_MAX_ENUM as "<profiles>" or "<profiles>:<subset_n>"; falls back to defaults.
  static EnumLimits from_env();
};

}  // namespace fairmatch
