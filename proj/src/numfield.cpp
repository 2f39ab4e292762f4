#include "loopcurrent/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>

namespace lc {

CycloNum& CycloNum::operator+=(const CycloNum& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

// (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w
CycloNum& CycloNum::operator*=(const CycloNum& o) {
  Rational bd = b_ * o.b_;
  Rational na = a_ * o.a_ - bd;
  Rational nb = a_ * o.b_ + b_ * o.a_ - bd;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

CycloNum CycloNum::inverse() const {
  Rational n = norm();
  if (sgn(n) == 0) throw DomainError("CycloNum: inverse of zero");
  return CycloNum((a_ - b_) / n, -b_ / n);
}

std::complex<double> CycloNum::embed() const {
  return {a_.get_d() - 0.5 * b_.get_d(), 0.86602540378443864676 * b_.get_d()};
}

std::string CycloNum::str() const {
  if (sgn(b_) == 0) return a_.get_str();
  std::string s;
  if (sgn(a_) != 0) s = a_.get_str();
  Rational bb = b_;
  if (sgn(bb) < 0) {
    s += "-";
    bb = -bb;
  } else if (!s.empty()) {
    s += "+";
  }
  if (bb != 1) s += bb.get_str();
  return s + "w";
}

ComplexApprox ComplexApprox::inverse() const {
  if (is_zero()) throw DomainError("ComplexApprox: inverse of zero");
  return ComplexApprox(1.0 / v_);
}

std::string ComplexApprox::str() const {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v_.real(), v_.imag());
  return buf;
}

double rel_diff(const ComplexApprox& x, const ComplexApprox& y) {
  double scale = std::max({std::abs(x.value()), std::abs(y.value()), 1e-300});
  return std::abs(x.value() - y.value()) / scale;
}

bool approx_equal(const ComplexApprox& x, const ComplexApprox& y, double rel_tol) {
  double d = std::abs(x.value() - y.value());
  double scale = std::max(std::abs(x.value()), std::abs(y.value()));
  if (scale == 0.0) return true;
  return d <= rel_tol * scale;
}

std::uint64_t CycloSampler::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CycloNum CycloSampler::next() {
  for (;;) {
    long an = static_cast<long>(next_u64() % 9) - 4;
    long ad = static_cast<long>(next_u64() % 3) + 1;
    long bn = static_cast<long>(next_u64() % 9) - 4;
    long bd = static_cast<long>(next_u64() % 3) + 1;
    CycloNum x(Rational(an, ad), Rational(bn, bd));
    if (!x.is_zero()) return x;
  }
}

std::vector<CycloNum> sample_generic(std::uint64_t seed, int count,
                                     const std::vector<Predicate>& forbidden, int budget) {
  if (count < 1) throw SamplingError("sample_generic: count must be positive");
  CycloSampler rng(seed);
  std::vector<CycloNum> out;
  int rejected = 0;
  while (static_cast<int>(out.size()) < count) {
    CycloNum x = rng.next();
    const Predicate* bad = nullptr;
    for (const auto& p : forbidden) {
      bool ok = false;
      try {
        ok = p.ok(x);
      } catch (const DomainError&) {
        ok = false;
      }
      if (!ok) {
        bad = &p;
        break;
      }
    }
    if (!bad) {
      out.push_back(x);
      continue;
    }
    if (++rejected > budget) throw SamplingError("sample_generic: rejection budget exceeded on predicate '" + bad->name + "'");
  }
  return out;
}

namespace {

Rational parse_rational(std::string t) {
  if (t.empty() || t == "+") return 1;
  if (t == "-") return -1;
  if (t[0] == '+') t = t.substr(1);
  Rational r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational '" + t + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
  r.canonicalize();
  return r;
}

}  // namespace

CycloNum parse_cyclo(const std::string& text) {
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '*') continue;
    // UTF-8 omega U+03C9
    if (c == 0xCF && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x89) {
      s += 'w';
      ++i;
      continue;
    }
    if (c == 'q') c = 'w';
    s += static_cast<char>(c);
  }
  if (s.empty()) throw std::invalid_argument("empty scalar");
  // split into signed terms
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && i > 0 && s[i - 1] != '/') {
      terms.push_back(cur);
      cur.clear();
    }
    cur += s[i];
  }
  terms.push_back(cur);
  Rational a = 0, b = 0;
  static const std::regex term_re(R"(^[+-]?(\d+(/\d+)?)?w?$)");
  for (const auto& t : terms) {
    if (!std::regex_match(t, term_re) || t == "+" || t == "-")
      throw std::invalid_argument("bad exact scalar '" + text + "'");
    if (!t.empty() && t.back() == 'w')
      b += parse_rational(t.substr(0, t.size() - 1));
    else
      a += parse_rational(t);
  }
  return CycloNum(a, b);
}

ComplexApprox parse_complex(const std::string& text) {
  static const std::regex re_full(R"(^\s*([+-]?[0-9.eE]+(?:[eE][+-]?\d+)?)\s*([+-]\s*[0-9.eE]*(?:[eE][+-]?\d+)?)i\s*$)");
  static const std::regex re_imag(R"(^\s*([+-]?[0-9.eE]*(?:[eE][+-]?\d+)?)i\s*$)");
  static const std::regex re_real(R"(^\s*([+-]?[0-9.]+(?:[eE][+-]?\d+)?)\s*$)");
  std::smatch m;
  auto num = [&](std::string t) {
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("bad complex '" + text + "'");
    return v;
  };
  if (std::regex_match(text, m, re_real)) return ComplexApprox(num(m[1]));
  if (std::regex_match(text, m, re_full)) return ComplexApprox(num(m[1]), num(m[2]));
  if (std::regex_match(text, m, re_imag)) return ComplexApprox(0.0, num(m[1]));
  throw std::invalid_argument("bad complex scalar '" + text + "'");
}

void to_json(nlohmann::json& j, const CycloNum& x) {
  j = nlohmann::json{{"a", x.a().get_str()}, {"b", x.b().get_str()}};
}

void from_json(const nlohmann::json& j, CycloNum& x) {
  Rational a, b;
  if (a.set_str(j.at("a").get<std::string>(), 10) != 0 || b.set_str(j.at("b").get<std::string>(), 10) != 0)
    throw std::invalid_argument("bad CycloNum json");
  if (a.get_den() == 0 || b.get_den() == 0) throw std::invalid_argument("bad CycloNum json");
  x = CycloNum(a, b);
}

void to_json(nlohmann::json& j, const ComplexApprox& x) { j = nlohmann::json{{"re", x.re()}, {"im", x.im()}}; }

void from_json(const nlohmann::json& j, ComplexApprox& x) {
  x = ComplexApprox(j.at("re").get<double>(), j.at("im").get<double>());
}

}  // namespace lc
