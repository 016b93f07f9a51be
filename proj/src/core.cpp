#include "ttlab/core.hpp"

#include <algorithm>
#include <map>

namespace ttlab {

std::vector<int> DisjointSets::labels() {
  std::vector<int> id(parent_.size(), -1);
  std::vector<int> out(parent_.size());
  int next = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (id[r] < 0) id[r] = next++;
    out[i] = id[r];
  }
  return out;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class catalan(unsigned k) { return binomial(2 * k, k) / (k + 1); }

bool is_involution(std::span<const int> p) {
  const int m = static_cast<int>(p.size());
  for (int i = 0; i < m; ++i) {
    if (p[i] < 0 || p[i] >= m || p[i] == i || p[p[i]] != i) return false;
  }
  return true;
}

bool is_non_crossing(std::span<const int> p) {
  std::vector<int> open;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (p[i] > i) {
      open.push_back(i);
    } else {
      if (open.empty() || open.back() != p[i]) return false;
      open.pop_back();
    }
  }
  return open.empty();
}

bool has_parity(std::span<const int> p) {
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if ((p[i] - i) % 2 == 0) return false;
  }
  return true;
}

NonCrossingPairing::NonCrossingPairing(std::vector<int> partner) : partner_(std::move(partner)) {
  if (partner_.empty() || partner_.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "pairing must have positive even length");
  }
  if (!is_involution(partner_)) {
    throw Error(ErrorCode::InvalidArgument, "pairing is not a fixed-point-free involution");
  }
  if (!is_non_crossing(partner_)) throw Error(ErrorCode::InvalidArgument, "pairing is crossing");
  if (!has_parity(partner_)) throw Error(ErrorCode::InvalidArgument, "arc joins equal parities");
}

namespace {

// Pairings of the interval [lo, hi), partner values absolute.
void pairings_of(int lo, int hi, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (lo >= hi) {
    out.push_back(cur);
    return;
  }
  for (int j = lo + 1; j < hi; j += 2) {
    cur[lo] = j;
    cur[j] = lo;
    std::vector<std::vector<int>> inner;
    pairings_of(lo + 1, j, cur, inner);
    for (auto& in : inner) {
      std::vector<std::vector<int>> outer;
      pairings_of(j + 1, hi, in, outer);
      for (auto& o : outer) out.push_back(std::move(o));
    }
  }
}

}  // namespace

std::vector<NonCrossingPairing> enumerate_pairings(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "pairing size must be positive");
  std::vector<int> cur(2 * n, -1);
  std::vector<std::vector<int>> raw;
  pairings_of(0, 2 * n, cur, raw);
  std::sort(raw.begin(), raw.end());
  std::vector<NonCrossingPairing> out;
  out.reserve(raw.size());
  for (auto& r : raw) out.emplace_back(std::move(r));
  return out;
}

bool next_dyck_word(std::string& w) {
  const int len = static_cast<int>(w.size());
  const int k = len / 2;
  // opens/closes count the prefix strictly before i.
  int opens = 0;
  for (char ch : w) opens += ch == '(';
  int closes = len - opens;
  for (int i = len - 1; i >= 0; --i) {
    if (w[i] == '(') {
      --opens;
      if (opens > closes) {
        w[i] = ')';
        int pos = i + 1;
        for (int j = 0; j < k - opens; ++j) w[pos++] = '(';
        while (pos < len) w[pos++] = ')';
        return true;
      }
    } else {
      --closes;
    }
  }
  return false;
}

namespace {

struct WordParser {
  int m;
  std::string_view word;
  std::size_t pos = 0;
  std::vector<std::array<int, 3>> tris;

  std::size_t match(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < word.size(); ++i) {
      depth += word[i] == '(' ? 1 : -1;
      if (depth == 0) return i;
    }
    throw Error(ErrorCode::Parse, "unbalanced dual-tree word");
  }

  // Chord (i, j) in sequence coordinates, m standing for vertex 0.
  void build(int i, int j) {
    if (j - i == 1) return;
    if (pos >= word.size() || word[pos] != '(') throw Error(ErrorCode::Parse, "dual-tree word too short");
    std::size_t close = match(pos);
    int left_nodes = static_cast<int>(close - pos - 1) / 2;
    int k = i + 1 + left_nodes;
    if (k >= j) throw Error(ErrorCode::Parse, "dual-tree word does not fit polygon");
    std::array<int, 3> t{i % m, k % m, j % m};
    std::sort(t.begin(), t.end());
    tris.push_back(t);
    ++pos;
    build(i, k);
    if (pos != close) throw Error(ErrorCode::Parse, "malformed dual-tree word");
    ++pos;
    build(k, j);
  }
};

}  // namespace

OuterplanarTriangulation OuterplanarTriangulation::from_word(int n, std::string_view word) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "outerplanar size must be at least 2");
  const int m = 2 * n;
  if (static_cast<int>(word.size()) != 2 * (m - 2)) {
    throw Error(ErrorCode::Parse, "dual-tree word has wrong length");
  }
  for (char ch : word) {
    if (ch != '(' && ch != ')') throw Error(ErrorCode::Parse, "dual-tree word has foreign symbol");
  }
  WordParser p{m, word, 0, {}};
  p.build(1, m);
  if (p.pos != word.size()) throw Error(ErrorCode::Parse, "trailing symbols in dual-tree word");
  OuterplanarTriangulation t;
  t.n_ = n;
  t.word_ = std::string(word);
  t.tris_ = std::move(p.tris);
  t.index();
  return t;
}

OuterplanarTriangulation OuterplanarTriangulation::from_triangles(
    int n, std::span<const std::array<int, 3>> tris) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "outerplanar size must be at least 2");
  const int m = 2 * n;
  if (static_cast<int>(tris.size()) != m - 2) {
    throw Error(ErrorCode::InvalidArgument, "wrong number of triangles");
  }
  std::map<std::pair<int, int>, int> apex;
  for (auto t : tris) {
    std::sort(t.begin(), t.end());
    if (t[0] < 0 || t[2] >= m || t[0] == t[1] || t[1] == t[2]) {
      throw Error(ErrorCode::InvalidArgument, "triangle vertex out of range");
    }
    std::array<int, 3> s = t[0] == 0 ? std::array<int, 3>{t[1], t[2], m} : t;
    if (!apex.emplace(std::pair{s[0], s[2]}, s[1]).second) {
      throw Error(ErrorCode::InvalidArgument, "two triangles on the same chord side");
    }
  }
  std::string word;
  std::function<void(int, int)> emit = [&](int i, int j) {
    if (j - i == 1) return;
    auto it = apex.find({i, j});
    if (it == apex.end()) throw Error(ErrorCode::InvalidArgument, "triangles do not dissect the polygon");
    word.push_back('(');
    emit(i, it->second);
    word.push_back(')');
    emit(it->second, j);
  };
  emit(1, m);
  return from_word(n, word);
}

void OuterplanarTriangulation::index() {
  const int m = 2 * n_;
  const int slots = 3 * num_triangles();
  bslot_.assign(m, -1);
  dtwin_.assign(slots, -1);
  blabel_.assign(slots, -1);
  std::map<std::pair<int, int>, int> seen;
  for (int s = 0; s < slots; ++s) {
    int a = tris_[s / 3][tail_corner(s) % 3];
    int b = tris_[s / 3][head_corner(s) % 3];
    if (b == (a + 1) % m) {
      bslot_[a] = s;
      blabel_[s] = a;
      continue;
    }
    auto key = std::pair{std::min(a, b), std::max(a, b)};
    auto [it, fresh] = seen.emplace(key, s);
    if (!fresh) {
      dtwin_[s] = it->second;
      dtwin_[it->second] = s;
    }
  }
}

void for_each_outerplanar(int n, const std::function<void(const OuterplanarTriangulation&)>& fn) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "outerplanar size must be at least 2");
  const int nodes = 2 * n - 2;
  std::string w = std::string(nodes, '(') + std::string(nodes, ')');
  do {
    fn(OuterplanarTriangulation::from_word(n, w));
  } while (next_dyck_word(w));
}

std::vector<OuterplanarTriangulation> enumerate_outerplanar(int n) {
  std::vector<OuterplanarTriangulation> out;
  for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) { out.push_back(t); });
  return out;
}

}  // namespace ttlab
