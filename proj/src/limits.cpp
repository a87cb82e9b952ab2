#include "fairmatch/limits.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fairmatch {

EnumLimits EnumLimits::from_env() {
  EnumLimits lim;
  const char* raw = std::getenv("FAIRMATCH_MAX_ENUM");
  if (raw == nullptr || *raw == '\0') return lim;
  std::string s(raw);
  auto colon = s.find(':');
  try {
    lim.max_profiles = std::stoull(s.substr(0, colon));
    if (colon != std::string::npos) lim.max_subset_n = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("FAIRMATCH_MAX_ENUM must look like <profiles> or <profiles>:<subset_n>");
  }
  return lim;
}

}  // namespace fairmatch
