#include <cctype>
#include <sstream>

#include "selfsim/algebra.hpp"
#include "selfsim/errors.hpp"

namespace selfsim::algebra {

IntPolynomial::IntPolynomial(std::vector<BigInt> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) throw ContractError("zero polynomial has no degree");
}

IntPolynomial::IntPolynomial(std::initializer_list<long long> ascending)
    : IntPolynomial(std::vector<BigInt>(ascending.begin(), ascending.end())) {}

IntPolynomial IntPolynomial::parse(std::string_view text) {
  std::string cleaned(text);
  for (char& c : cleaned) {
    if (c == ',' || c == '[' || c == ']' || c == '(' || c == ')') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<BigInt> coeffs;
  std::string tok;
  while (in >> tok) {
    std::size_t start = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
    if (start == tok.size()) throw ParseError(0, "bad polynomial coefficient '" + tok + "'");
    for (std::size_t i = start; i < tok.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw ParseError(0, "bad polynomial coefficient '" + tok + "'");
    }
    if (tok[0] == '+') tok.erase(0, 1);
    coeffs.emplace_back(tok);
  }
  if (coeffs.empty()) throw ParseError(0, "empty polynomial");
  try {
    return IntPolynomial(std::move(coeffs));
  } catch (const ContractError& e) {
    throw ParseError(0, e.what());
  }
}

std::string IntPolynomial::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ' ';
    out += coeffs_[i].str();
  }
  return out;
}

bool IntPolynomial::reciprocal() const {
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (coeffs_[i] != coeffs_[n - 1 - i]) return false;
  }
  return true;
}

const BigInt& IntPolynomial::coeff(int i) const {
  static const BigInt zero = 0;
  if (i < 0 || i > degree()) return zero;
  return coeffs_[i];
}

Complex IntPolynomial::evaluate(const Complex& z) const {
  Complex acc(Real(coeffs_.back()), Real(0));
  for (int i = degree() - 1; i >= 0; --i) {
    acc = acc * z;
    acc.re += Real(coeffs_[i]);
  }
  return acc;
}

Real IntPolynomial::evaluate(const Real& x) const {
  Real acc(coeffs_.back());
  for (int i = degree() - 1; i >= 0; --i) acc = acc * x + Real(coeffs_[i]);
  return acc;
}

Real IntPolynomial::abs_evaluate(const Real& r) const {
  Real acc = Real(boost::multiprecision::abs(coeffs_.back()));
  for (int i = degree() - 1; i >= 0; --i) acc = acc * r + Real(boost::multiprecision::abs(coeffs_[i]));
  return acc;
}

std::vector<BigInt> IntPolynomial::derivative() const {
  std::vector<BigInt> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[i] * i);
  return d;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(out));
}

std::vector<BigInt> power_sums(const IntPolynomial& p, int n_max) {
  if (!p.monic()) throw ContractError("algebraic integers required");
  const int deg = p.degree();
  // X^deg + c_{deg-1} X^{deg-1} + ... ; e_k = (-1)^k c_{deg-k}
  std::vector<BigInt> s(static_cast<std::size_t>(n_max) + 1, 0);
  s[0] = deg;
  for (int n = 1; n <= n_max; ++n) {
    BigInt acc = 0;
    for (int k = 1; k <= std::min(n, deg); ++k) {
      const BigInt& c = p.coeff(deg - k);
      if (k == n)
        acc -= c * n;
      else
        acc -= c * s[n - k];
    }
    s[n] = acc;
  }
  return s;
}

}  // namespace selfsim::algebra
