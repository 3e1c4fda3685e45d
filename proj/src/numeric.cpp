#include "creature/numeric.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

#include "creature/errors.hpp"

namespace creature {

Real to_real(const Rational& q) {
  return Real(mp::numerator(q)) / Real(mp::denominator(q));
}

Real log2(const Real& x) {
  static const Real ln2 = boost::math::constants::ln_two<Real>();
  return mp::log(x) / ln2;
}

BigInt floor_of(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt quot = num / den;
  if (num % den != 0 && num < 0) --quot;
  return quot;
}

BigInt ceil_of(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  BigInt quot = num / den;
  if (num % den != 0 && num > 0) ++quot;
  return quot;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw PreconditionError("empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw PreconditionError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(s.size() - dot - 1));
      return Rational(BigInt(digits.empty() || digits == "-" ? digits + "0" : digits), scale);
    }
    return Rational(BigInt(s));
  } catch (const PreconditionError&) {
    throw;
  } catch (const std::exception&) {
    throw PreconditionError("malformed rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

}  // namespace creature
