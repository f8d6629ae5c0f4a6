#include <cctype>

#include "pfpath/polynomial.hpp"

namespace pfpath {

std::vector<Monomial> monomials_of_degree(int d) {
  std::vector<Monomial> out;
  for (int a = d; a >= 0; --a)
    for (int b = d - a; b >= 0; --b)
      for (int c = d - a - b; c >= 0; --c) {
        int e = d - a - b - c;
        out.push_back(Monomial({static_cast<uint16_t>(a), static_cast<uint16_t>(b),
                                static_cast<uint16_t>(c), static_cast<uint16_t>(e)}));
      }
  std::sort(out.begin(), out.end(), grevlex_greater);
  return out;
}

namespace {

int var_index(char c) {
  switch (c) {
    case 'x': return 0;
    case 'y': return 1;
    case 'z': return 2;
    case 'w': return 3;
    default: return -1;
  }
}

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

std::string read_integer(Cursor& cur) {
  cur.skip_ws();
  size_t start = cur.i;
  while (cur.i < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.i]))) ++cur.i;
  if (cur.i == start) throw PolynomialParseError("expected integer", start);
  return cur.s.substr(start, cur.i - start);
}

// factor := integer [ '/' integer ] | var [ '^' integer ]
void read_factor(Cursor& cur, Rational& coeff, Monomial& mono) {
  char c = cur.peek();
  if (std::isdigit(static_cast<unsigned char>(c))) {
    std::string numstr = read_integer(cur);
    if (cur.peek() == '/') {
      ++cur.i;
      std::string denstr = read_integer(cur);
      coeff *= Rational::from_string(numstr + "/" + denstr);
    } else {
      coeff *= Rational::from_string(numstr);
    }
    return;
  }
  int v = var_index(c);
  if (v < 0) throw PolynomialParseError(std::string("expected variable or number, got '") + c + "'", cur.i);
  ++cur.i;
  int power = 1;
  if (cur.peek() == '^') {
    ++cur.i;
    power = std::stoi(read_integer(cur));
  }
  mono = mono * Monomial::var(v, static_cast<uint16_t>(power));
}

}  // namespace

QPolynomial parse_polynomial(const std::string& text) {
  Cursor cur{text};
  std::vector<QPolynomial::Term> terms;
  bool first = true;
  while (!cur.done()) {
    int sign = 1;
    char c = cur.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++cur.i;
    } else if (!first) {
      throw PolynomialParseError("expected '+' or '-' between terms", cur.i);
    }
    if (cur.done()) throw PolynomialParseError("dangling sign", cur.i);
    Rational coeff(sign);
    Monomial mono;
    read_factor(cur, coeff, mono);
    while (cur.peek() == '*') {
      ++cur.i;
      read_factor(cur, coeff, mono);
    }
    terms.push_back({mono, coeff});
    first = false;
  }
  if (first) throw PolynomialParseError("empty polynomial text", 0);
  return QPolynomial::from_terms(std::move(terms));
}

std::string to_string(const QPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& t : p.terms()) {
    Rational c = t.c;
    if (out.empty()) {
      if (c.sign() < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c.sign() < 0 ? " - " : " + ";
      if (c.sign() < 0) c = -c;
    }
    bool unit = (c == Rational(1));
    if (t.m.is_one()) {
      out += c.to_string();
    } else {
      if (!unit) out += c.to_string() + "*";
      out += t.m.to_string();
    }
  }
  return out;
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: square matrix required");
  RationalMatrix a = m;
  const Eigen::Index n = a.rows();
  Rational det(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index r = col; r < n; ++r)
      if (!a(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    Rational inv = a(col, col).inverse();
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      Rational factor = a(r, col) * inv;
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

QPolynomial substitute_linear(const RationalMatrix& u, const QPolynomial& f) {
  if (u.rows() != kNumVars || u.cols() != kNumVars)
    throw std::invalid_argument("substitute_linear: 4x4 matrix required");
  if (determinant(u).is_zero()) throw std::domain_error("substitute_linear: singular matrix");

  // x_j maps to the linear form sum_i u(i,j) x_i (column-vector convention;
  // this is what makes u1.(u2.f) = (u1*u2).f hold on the nose).
  std::array<QPolynomial, kNumVars> image;
  for (int j = 0; j < kNumVars; ++j) {
    std::vector<QPolynomial::Term> ts;
    for (int i = 0; i < kNumVars; ++i) {
      Rational c = u(i, j);
      if (!c.is_zero()) ts.push_back({Monomial::var(i), c});
    }
    image[static_cast<size_t>(j)] = QPolynomial::from_terms(std::move(ts));
  }

  QPolynomial result;
  for (const auto& t : f.terms()) {
    QPolynomial term = QPolynomial::constant(t.c);
    for (int j = 0; j < kNumVars; ++j)
      for (int p = 0; p < t.m.e[static_cast<size_t>(j)]; ++p) term = term * image[static_cast<size_t>(j)];
    result += term;
  }
  return result;
}

}  // namespace pfpath
