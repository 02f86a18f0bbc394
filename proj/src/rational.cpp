#include "ppsolve/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ppsolve {

std::size_t bits(const Integer& m) {
  if (sgn(m) == 0) return 0;
  return mpz_sizeinbase(m.get_mpz_t(), 2);
}

std::size_t bit_size(const Rational& r) {
  return bits(r.get_num()) + bits(r.get_den());
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    Integer d{std::string(den)};
    if (sgn(d) == 0) throw std::invalid_argument("zero denominator");
    value = Rational(Integer(std::string(num)), d);
    value.canonicalize();
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Integer num(whole.empty() ? std::string("0") : std::string(whole));
    Integer scale = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      scale *= 10;
    }
    value = Rational(num, scale);
    value.canonicalize();
  } else {
    if (!all_digits(text))
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    value = Rational(Integer(std::string(text)));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::string to_decimal(const Rational& r, int digits) {
  Rational magnitude = abs(r);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits < 0 ? 0 : digits));
  Integer scaled = floor(magnitude * scale);
  Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string out = (sgn(r) < 0 && sgn(scaled) != 0) ? "-" : "";
  out += whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
    out += f;
  }
  return out;
}

Rational pow2(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(p);
  return Rational(Integer(1), p);
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace ppsolve
