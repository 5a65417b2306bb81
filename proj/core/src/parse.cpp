#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "restrict4/error.hpp"
#include "restrict4/polynomial.hpp"

namespace restrict4 {
namespace {

constexpr unsigned kMaxExponent = 1000;
constexpr std::size_t kMaxTerms = 200000;

class Parser {
 public:
  Parser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  Polynomial run() {
    Polynomial p = expr(/*parenthesized=*/false);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void guard(const Polynomial& p, std::size_t at) const {
    if (p.size() > kMaxTerms) fail_at("expression too large", at);
    for (const auto& [k, c] : p.terms()) {
      for (int e : k) {
        if (e > static_cast<int>(kMaxExponent)) fail_at("exponent overflow", at);
      }
      if (!std::isfinite(c)) fail_at("coefficient overflow", at);
    }
  }

  Polynomial expr(bool parenthesized) {
    skip_ws();
    const std::size_t start = pos_;
    double lead = 1.0;
    // A sign is only allowed directly after '(' (e.g. "(-2)*x1").
    if (parenthesized && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      lead = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    Polynomial acc = term();
    acc *= lead;
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        break;
      }
      guard(acc, start);
    }
    return acc;
  }

  Polynomial term() {
    skip_ws();
    const std::size_t start = pos_;
    Polynomial acc = factor();
    while (accept('*')) {
      acc = acc * factor();
      guard(acc, start);
    }
    return acc;
  }

  Polynomial factor() {
    skip_ws();
    const std::size_t start = pos_;
    Polynomial b = base();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      const unsigned e = uint_literal();
      if (e > kMaxExponent) fail_at("exponent overflow", at);
      if (b.degree() > 0 && static_cast<unsigned>(b.degree()) * e > kMaxExponent) {
        fail_at("exponent overflow", at);
      }
      Polynomial result = Polynomial::constant(1.0, nvars_);
      for (unsigned i = 0; i < e; ++i) {
        result = result * b;
        guard(result, start);
      }
      b = std::move(result);
      guard(b, start);
    }
    return b;
  }

  Polynomial base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr(/*parenthesized=*/true);
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'x') {
      const std::size_t at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected variable index after 'x'");
      }
      const unsigned idx = uint_literal();
      if (idx == 0 || idx > nvars_) {
        fail_at("variable index x" + std::to_string(idx) + " out of range 1.." +
                    std::to_string(nvars_),
                at);
      }
      return Polynomial::variable(idx - 1, nvars_);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Polynomial::constant(number(), nvars_);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  unsigned uint_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected unsigned integer");
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{}) fail_at("exponent overflow", start);
    (void)ptr;
    return value;
  }

  double number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail_at("malformed exponent in number", start);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      fail_at("malformed number", start);
    }
    // "2x1": implicit multiplication is not part of the grammar.
    if (pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == '(')) {
      fail("implicit multiplication is not allowed");
    }
    return value;
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  std::string s(buf, ptr);
  return s;
}

std::string format_monomial(const Exponent& k) {
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(i + 1);
    if (k[i] > 1) out += '^' + std::to_string(k[i]);
  }
  return out;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars) {
  return Parser(text, nvars).run();
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    const std::string mono = format_monomial(k);
    const double mag = std::abs(c);
    std::string body;
    if (first && c < 0.0) {
      body = "(-" + format_double(mag) + ")";
      if (!mono.empty()) body += "*" + mono;
    } else if (mono.empty()) {
      body = format_double(mag);
    } else if (mag == 1.0) {
      body = mono;
    } else {
      body = format_double(mag) + "*" + mono;
    }
    if (first) {
      out = body;
    } else {
      out += c < 0.0 ? " - " : " + ";
      out += body;
    }
    first = false;
  }
  return out;
}

}  // namespace restrict4
