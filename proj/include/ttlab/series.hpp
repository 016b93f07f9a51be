#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ttlab {

// Exact integer polynomial in (z, x); zero coefficients are never stored.
class BivariatePolynomial {
 public:
  using Key = std::pair<int, int>;  // (power of z, power of x)

  void add(int zpow, int xpow, const mpz_class& c);
  mpz_class coefficient(int zpow, int xpow) const;
  const std::map<Key, mpz_class>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  // Coefficients of z^zpow as a polynomial in x.
  std::map<int, mpz_class> slice(int zpow) const;
  mpz_class slice_sum(int zpow) const;

  BivariatePolynomial& operator+=(const BivariatePolynomial& o);
  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) {
    return a += b;
  }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);
  friend bool operator==(const BivariatePolynomial&, const BivariatePolynomial&) = default;

  std::string to_string() const;

 private:
  std::map<Key, mpz_class> terms_;
};

// Power series in z with exact rational coefficients c_0..c_K.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : c_(order + 1) {}
  TruncatedSeries(int order, std::vector<mpq_class> coeffs);

  static TruncatedSeries constant(int order, const mpq_class& v);
  static TruncatedSeries variable(int order);  // z

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const mpq_class& operator[](int k) const { return c_[k]; }
  mpq_class& operator[](int k) { return c_[k]; }
  const std::vector<mpq_class>& coefficients() const noexcept { return c_; }
  bool is_zero() const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const mpq_class& s);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const mpq_class& s) { return a *= s; }
  friend TruncatedSeries operator*(const mpq_class& s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  TruncatedSeries pow(unsigned e) const;
  // Requires c_0 != 0.
  TruncatedSeries inverse() const;
  // Requires c_0 = 1.
  TruncatedSeries sqrt() const;
  // f(g(z)) for g with zero constant term.
  TruncatedSeries compose(const TruncatedSeries& g) const;

 private:
  std::vector<mpq_class> c_;
};

}  // namespace ttlab
