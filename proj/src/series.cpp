#include "ttlab/series.hpp"

#include <algorithm>
#include <sstream>

#include "ttlab/core.hpp"

namespace ttlab {

void BivariatePolynomial::add(int zpow, int xpow, const mpz_class& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(Key{zpow, xpow}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpz_class BivariatePolynomial::coefficient(int zpow, int xpow) const {
  auto it = terms_.find({zpow, xpow});
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::map<int, mpz_class> BivariatePolynomial::slice(int zpow) const {
  std::map<int, mpz_class> out;
  for (auto it = terms_.lower_bound({zpow, INT_MIN}); it != terms_.end() && it->first.first == zpow;
       ++it) {
    out.emplace(it->first.second, it->second);
  }
  return out;
}

mpz_class BivariatePolynomial::slice_sum(int zpow) const {
  mpz_class s = 0;
  for (const auto& [p, c] : slice(zpow)) s += c;
  return s;
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& o) {
  for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
  return *this;
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  BivariatePolynomial r;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) r.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
  }
  return r;
}

std::string BivariatePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    if (k.first) os << "*z^" << k.first;
    if (k.second) os << "*x^" << k.second;
  }
  return os.str();
}

TruncatedSeries::TruncatedSeries(int order, std::vector<mpq_class> coeffs) : c_(order + 1) {
  for (int k = 0; k <= order && k < static_cast<int>(coeffs.size()); ++k) c_[k] = coeffs[k];
}

TruncatedSeries TruncatedSeries::constant(int order, const mpq_class& v) {
  TruncatedSeries s(order);
  s.c_[0] = v;
  return s;
}

TruncatedSeries TruncatedSeries::variable(int order) {
  TruncatedSeries s(order);
  if (order >= 1) s.c_[1] = 1;
  return s;
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& v) { return v == 0; });
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  if (o.order() != order()) throw Error(ErrorCode::SizeMismatch, "series orders differ");
  for (int k = 0; k <= order(); ++k) c_[k] += o.c_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  if (o.order() != order()) throw Error(ErrorCode::SizeMismatch, "series orders differ");
  for (int k = 0; k <= order(); ++k) c_[k] -= o.c_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const mpq_class& s) {
  for (auto& v : c_) v *= s;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order()) throw Error(ErrorCode::SizeMismatch, "series orders differ");
  const int K = a.order();
  TruncatedSeries r(K);
  for (int i = 0; i <= K; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; i + j <= K; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

TruncatedSeries TruncatedSeries::pow(unsigned e) const {
  TruncatedSeries r = constant(order(), 1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (c_[0] == 0) throw Error(ErrorCode::InvalidArgument, "series inverse needs nonzero constant");
  const int K = order();
  TruncatedSeries r(K);
  r.c_[0] = 1 / c_[0];
  for (int k = 1; k <= K; ++k) {
    mpq_class s = 0;
    for (int j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
    r.c_[k] = -s / c_[0];
  }
  return r;
}

TruncatedSeries TruncatedSeries::sqrt() const {
  if (c_[0] != 1) throw Error(ErrorCode::InvalidArgument, "series square root needs unit constant");
  const int K = order();
  TruncatedSeries r(K);
  r.c_[0] = 1;
  // (r^2)_k = c_k  =>  2 r_k = c_k - sum_{0<j<k} r_j r_{k-j}
  for (int k = 1; k <= K; ++k) {
    mpq_class s = c_[k];
    for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
    r.c_[k] = s / 2;
  }
  return r;
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& g) const {
  if (g.c_[0] != 0) throw Error(ErrorCode::InvalidArgument, "inner series must vanish at zero");
  const int K = order();
  TruncatedSeries r(K);
  for (int k = K; k >= 0; --k) {  // Horner
    r = r * g;
    r.c_[0] += c_[k];
  }
  return r;
}

}  // namespace ttlab
