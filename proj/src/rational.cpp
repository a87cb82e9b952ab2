#include "fairmatch/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace fairmatch {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Prob parse_prob(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Prob out(n, d);
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string format_prob(const Prob& value) {
  Prob v = value;
  v.canonicalize();
  return v.get_str(10);
}

Prob sum(const std::vector<Prob>& values) {
  Prob total = 0;
  for (const auto& v : values) total += v;
  return total;
}

Prob min_of(const Prob& a, const Prob& b) { return a < b ? a : b; }
Prob max_of(const Prob& a, const Prob& b) { return a < b ? b : a; }
Prob abs_of(const Prob& a) { return a < 0 ? Prob(-a) : a; }

}  // namespace fairmatch
