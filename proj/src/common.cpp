#include "obsnet/common.hpp"

#include <cctype>
#include <cmath>

namespace obsnet {

std::string cost_to_string(Cost c) {
  std::int64_t whole = c.micro / 1'000'000;
  std::int64_t frac = c.micro % 1'000'000;
  std::string out = std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(digits.begin(), 6 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

Cost cost_from_string(const std::string& text) {
  std::size_t i = 0;
  auto bad = [&]() { fail(errc::io_format, "malformed cost value: " + text); };
  if (text.empty()) bad();
  if (text[0] == '-') fail(errc::io_format, "negative cost: " + text);
  if (text[0] == '+') i = 1;
  std::int64_t whole = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > 1'000'000) fail(errc::validation, "cost exceeds documented limit: " + text);
    any = true;
    ++i;
  }
  std::int64_t micro = whole * 1'000'000;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::int64_t scale = 100'000;
    bool frac_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      int d = text[i] - '0';
      if (scale > 0) {
        micro += d * scale;
        scale /= 10;
      } else {
        // 7th fractional digit decides round-half-up; the rest must only
        // confirm nonzero-ness, which half-up ignores.
        if (!frac_digit) micro += (d >= 5) ? 1 : 0;
        frac_digit = true;
      }
      any = true;
      ++i;
    }
  }
  if (!any || i != text.size()) bad();
  return Cost{micro};
}

Cost cost_from_double(double units) {
  if (!(units >= 0.0)) fail(errc::io_format, "negative cost");
  if (units > 1.0e6 + 1.0) fail(errc::validation, "cost exceeds documented limit");
  return Cost{std::llround(units * 1e6)};
}

}  // namespace obsnet
