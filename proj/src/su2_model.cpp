#include "spinpcd/su2_model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace spinpcd {

namespace {

bool parse_int(std::string_view text, long long& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

HalfInteger HalfInteger::parse(const std::string& text) {
  const auto fail = [&]() -> HalfInteger {
    throw std::invalid_argument("invalid spin '" + text + "': expected n, n/2 or a multiple of 0.5");
  };
  constexpr long long kMaxTwice = 1 << 20;
  long long twice = 0;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    long long num = 0, den = 0;
    if (!parse_int(std::string_view(text).substr(0, slash), num) ||
        !parse_int(std::string_view(text).substr(slash + 1), den))
      return fail();
    if (den == 1) twice = 2 * num;
    else if (den == 2) twice = num;
    else return fail();
  } else if (long long whole = 0; parse_int(text, whole)) {
    twice = 2 * whole;
  } else {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return fail();
    const double t = 2.0 * v;
    if (t != std::round(t) || std::abs(t) > double(kMaxTwice)) return fail();
    twice = static_cast<long long>(t);
  }
  if (twice < 0 || twice > kMaxTwice) return fail();
  return from_twice(static_cast<int>(twice));
}

double LoopAmplitude::berry_phase() const {
  if (value == std::complex<double>(0.0, 0.0)) return 0.0;
  const double phase = std::arg(value);
  if (phase == 0.0) return 0.0;  // folds -0.0
  return phase <= -std::numbers::pi ? std::numbers::pi : phase;
}

}  // namespace spinpcd
