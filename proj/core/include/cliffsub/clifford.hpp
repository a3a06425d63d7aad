#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cliffsub {

using Complex = std::complex<double>;

/// Coefficients with modulus below this value are never stored.
inline constexpr double kPruneThreshold = 1e-15;

/// Default upper bound on the number of generators of one algebra.
inline constexpr std::size_t kDefaultGeneratorCap = 32;

/// Hard limit imposed by the 64-bit blade mask.
inline constexpr std::size_t kMaxGenerators = 64;

/// Squares of the generators e_i. Each entry is +1, 0 or -1; a zero entry
/// makes e_i a Grassmann (nilpotent) generator.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<int> signs);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<int>& signs() const noexcept { return signs_; }

  std::size_t count_positive() const noexcept;
  std::size_t count_null() const noexcept;
  std::size_t count_negative() const noexcept;

  Signature concat(const Signature& other) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<int> signs_;
};

/// A basis blade: the ordered product of the generators whose bits are set.
/// Bit i corresponds to e_i, so the mask fixes the canonical ascending order.
struct Blade {
  std::uint64_t mask = 0;

  constexpr int grade() const noexcept { return __builtin_popcountll(mask); }
  constexpr bool is_scalar() const noexcept { return mask == 0; }
  constexpr bool contains(std::size_t i) const noexcept { return (mask >> i) & 1U; }

  static constexpr Blade unit() noexcept { return Blade{0}; }
  static constexpr Blade generator(std::size_t i) noexcept { return Blade{std::uint64_t{1} << i}; }

  auto operator<=>(const Blade&) const = default;
};

/// Product of two basis blades: coefficient in {+1, -1, 0} and result blade.
struct BladeProduct {
  int sign = 0;
  Blade blade;
};

/// Reordering sign of A·B: (-1)^(number of pairs i in A, j in B with i > j).
int reorder_sign(Blade a, Blade b) noexcept;

/// True when blade products in both orders coincide.
bool blades_commute(Blade a, Blade b) noexcept;

class CliffordElement;

/// Shared, immutable description of one Clifford algebra. Elements built
/// from the same context may be combined; elements from different contexts
/// may not.
class Algebra {
 public:
  /// Builds the algebra generated by e_0 .. e_{K-1} with e_i² = signs[i].
  /// Throws ConfigError when K exceeds `cap` (or the 64-bit mask limit).
  static Algebra make(const Signature& signature, std::size_t cap = kDefaultGeneratorCap);

  const Signature& signature() const;
  std::size_t generator_count() const { return signature().size(); }

  CliffordElement unit() const;
  CliffordElement zero() const;
  CliffordElement scalar(Complex value) const;
  CliffordElement generator(std::size_t i) const;
  CliffordElement blade(Blade b, Complex coefficient = 1.0) const;

  BladeProduct multiply_blades(Blade a, Blade b) const;

  bool is_valid_blade(Blade b) const noexcept;

  bool same_as(const Algebra& other) const noexcept { return impl_ == other.impl_; }
  bool bound() const noexcept { return impl_ != nullptr; }

 private:
  struct Impl;
  explicit Algebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;

  friend class CliffordElement;
};

/// Sparse multivector with complex coefficients over the blades of an
/// Algebra. A default-constructed element is an unbound zero; it adopts the
/// algebra of whatever it is first combined with.
class CliffordElement {
 public:
  using TermMap = std::map<Blade, Complex>;

  CliffordElement() = default;
  CliffordElement(Algebra algebra, TermMap terms);

  const Algebra& algebra() const noexcept { return algebra_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(Blade b) const;
  Complex scalar_part() const { return coefficient(Blade::unit()); }

  /// Largest coefficient modulus over non-empty blades.
  double non_scalar_norm() const;
  /// Largest coefficient modulus over all blades.
  double max_norm() const;
  /// Highest grade carrying a stored coefficient (0 for zero elements).
  int max_grade() const;

  CliffordElement& operator+=(const CliffordElement& other);
  CliffordElement& operator-=(const CliffordElement& other);
  CliffordElement& operator*=(Complex s);

  friend CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
  friend CliffordElement operator-(CliffordElement a, const CliffordElement& b) { return a -= b; }
  friend CliffordElement operator*(CliffordElement a, Complex s) { return a *= s; }
  friend CliffordElement operator*(Complex s, CliffordElement a) { return a *= s; }
  friend CliffordElement operator-(CliffordElement a) { return a *= -1.0; }

  /// Geometric (Clifford) product.
  friend CliffordElement operator*(const CliffordElement& x, const CliffordElement& y);

  std::string to_string() const;

 private:
  void prune();
  void require_compatible(const CliffordElement& other, const char* op);

  Algebra algebra_{nullptr};
  TermMap terms_;

  friend CliffordElement anticommutator(const CliffordElement&, const CliffordElement&);
  friend CliffordElement involution(const CliffordElement&);
};

CliffordElement multiply(const CliffordElement& x, const CliffordElement& y);

/// x·y + y·x. Only blade pairs that commute contribute, so exact zeros
/// arise structurally rather than through floating-point cancellation.
CliffordElement anticommutator(const CliffordElement& x, const CliffordElement& y);

/// x·y - y·x.
CliffordElement commutator(const CliffordElement& x, const CliffordElement& y);

/// Complex involution: fixes every blade and conjugates each coefficient.
CliffordElement involution(const CliffordElement& x);

inline Complex scalar_part(const CliffordElement& x) { return x.scalar_part(); }

/// Largest coefficient modulus of x - y.
double max_abs_diff(const CliffordElement& x, const CliffordElement& y);

/// Complex generators f_k = sqrt(|q_k|)·(a_k + i·b_k)/2 built from pairs of
/// real generators, normalized so that {f_k, f_l*} = δ_kl·q_k and
/// {f_k, f_l} = 0.
struct ComplexGeneratorSet {
  std::vector<CliffordElement> generators;
  /// The involution pairing f with f*; only coefficient conjugation exists.
  std::string involution = "coefficient-conjugation";
};

/// Uses real generators offset+2k and offset+2k+1 for norm q_k. Their signs
/// must both equal sign(q_k) (zero for q_k = 0). Throws ConfigError on a
/// signature/norm mismatch.
ComplexGeneratorSet complex_generators(const Algebra& algebra, std::span<const double> norms,
                                       std::size_t offset = 0);

}  // namespace cliffsub
