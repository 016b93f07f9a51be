#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace ttlab {

enum class ErrorCode {
  InvalidArgument,
  SizeMismatch,
  NotPlanar,
  NotHierarchical,
  NotApollonian,
  DegenerateSize,
  MembershipFailed,
  InvariantViolation,
  Parse,
  Cap,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t m = 0) { reset(m); }

  void reset(std::size_t m) {
    parent_.resize(m);
    size_.assign(m, 1);
    std::iota(parent_.begin(), parent_.end(), 0);
    components_ = m;
  }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // True when two components were merged.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }
  std::size_t components() const noexcept { return components_; }

  // Dense ids 0..components()-1 in first-appearance order.
  std::vector<int> labels();

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::size_t components_ = 0;
};

mpz_class catalan(unsigned k);
mpz_class binomial(unsigned n, unsigned k);

// Fixed-point-free non-crossing involution of 0..2n-1 whose arcs join positions
// of opposite parity.
class NonCrossingPairing {
 public:
  NonCrossingPairing() = default;
  explicit NonCrossingPairing(std::vector<int> partner);

  int n() const noexcept { return static_cast<int>(partner_.size() / 2); }
  int size() const noexcept { return static_cast<int>(partner_.size()); }
  int operator[](int i) const { return partner_[i]; }
  std::span<const int> partner() const noexcept { return partner_; }

  friend bool operator==(const NonCrossingPairing&, const NonCrossingPairing&) = default;
  friend auto operator<=>(const NonCrossingPairing& a, const NonCrossingPairing& b) {
    return a.partner_ <=> b.partner_;
  }

 private:
  std::vector<int> partner_;
};

bool is_involution(std::span<const int> p);
bool is_non_crossing(std::span<const int> p);
bool has_parity(std::span<const int> p);

// All Cat(n) pairings in lexicographic order of the partner array.
std::vector<NonCrossingPairing> enumerate_pairings(int n);

// Triangulation of the 2n-gon with vertices 0..2n-1 clockwise. Boundary edge i
// runs from vertex i to vertex i+1 (mod 2n); edge 0 is the root. Stored as the
// dual binary tree (a Dyck word read from the root edge) plus the triangles it
// induces, in preorder. Each triangle lists its vertices increasingly, which is
// the clockwise order.
class OuterplanarTriangulation {
 public:
  OuterplanarTriangulation() = default;
  static OuterplanarTriangulation from_word(int n, std::string_view word);
  static OuterplanarTriangulation from_triangles(int n, std::span<const std::array<int, 3>> tris);

  int n() const noexcept { return n_; }
  int boundary_size() const noexcept { return 2 * n_; }
  int num_triangles() const noexcept { return static_cast<int>(tris_.size()); }
  const std::string& word() const noexcept { return word_; }
  const std::array<int, 3>& triangle(int i) const { return tris_[i]; }
  std::span<const std::array<int, 3>> triangles() const noexcept { return tris_; }

  // Slot s of a triangle is the side opposite corner s, oriented from corner
  // s+1 to corner s+2. Boundary edge i lives at slot 3*tri+s.
  int boundary_slot(int i) const { return bslot_[i]; }
  // Partner slot across a diagonal, or -1 for a boundary side.
  int diagonal_twin(int slot) const { return dtwin_[slot]; }
  // Boundary label of a boundary slot, or -1.
  int boundary_label(int slot) const { return blabel_[slot]; }

  friend bool operator==(const OuterplanarTriangulation& a, const OuterplanarTriangulation& b) {
    return a.n_ == b.n_ && a.word_ == b.word_;
  }

 private:
  void index();

  int n_ = 0;
  std::string word_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<int> bslot_;
  std::vector<int> dtwin_;
  std::vector<int> blabel_;
};

// Global corner ids (3*tri+corner) at the ends of a slot.
inline int tail_corner(int slot) { return 3 * (slot / 3) + (slot % 3 + 1) % 3; }
inline int head_corner(int slot) { return 3 * (slot / 3) + (slot % 3 + 2) % 3; }

// Streams every member of O_n in lexicographic order of the Dyck word.
void for_each_outerplanar(int n, const std::function<void(const OuterplanarTriangulation&)>& fn);
std::vector<OuterplanarTriangulation> enumerate_outerplanar(int n);

// Lexicographically next balanced word of the same length; false at the end.
bool next_dyck_word(std::string& w);

}  // namespace ttlab
