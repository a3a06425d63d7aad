#include "cliffsub/clifford.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "cliffsub/error.hpp"

namespace cliffsub {

Signature::Signature(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != 0 && s != -1) {
      throw ConfigError("signature entries must be +1, 0 or -1");
    }
  }
}

std::size_t Signature::count_positive() const noexcept {
  std::size_t n = 0;
  for (int s : signs_) n += s > 0;
  return n;
}

std::size_t Signature::count_null() const noexcept {
  std::size_t n = 0;
  for (int s : signs_) n += s == 0;
  return n;
}

std::size_t Signature::count_negative() const noexcept {
  std::size_t n = 0;
  for (int s : signs_) n += s < 0;
  return n;
}

Signature Signature::concat(const Signature& other) const {
  std::vector<int> out = signs_;
  out.insert(out.end(), other.signs_.begin(), other.signs_.end());
  return Signature(std::move(out));
}

int reorder_sign(Blade a, Blade b) noexcept {
  // Each generator of a must move past every lower-indexed generator of b.
  std::uint64_t rest = a.mask >> 1;
  int swaps = 0;
  while (rest != 0) {
    swaps += std::popcount(rest & b.mask);
    rest >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

bool blades_commute(Blade a, Blade b) noexcept {
  // BA = (-1)^(rs - c) AB for grades r, s sharing c generators.
  const int r = a.grade();
  const int s = b.grade();
  const int c = std::popcount(a.mask & b.mask);
  return ((r * s - c) & 1) == 0;
}

struct Algebra::Impl {
  Signature signature;
  std::uint64_t valid_mask = 0;
  std::uint64_t null_mask = 0;
  std::uint64_t negative_mask = 0;
};

Algebra Algebra::make(const Signature& signature, std::size_t cap) {
  if (cap > kMaxGenerators) {
    throw ConfigError("generator cap " + std::to_string(cap) + " exceeds the blade mask width");
  }
  if (signature.size() > cap) {
    throw ConfigError("signature of length " + std::to_string(signature.size()) +
                      " exceeds generator cap " + std::to_string(cap));
  }
  auto impl = std::make_shared<Impl>();
  impl->signature = signature;
  for (std::size_t i = 0; i < signature.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    impl->valid_mask |= bit;
    if (signature[i] == 0) impl->null_mask |= bit;
    if (signature[i] < 0) impl->negative_mask |= bit;
  }
  return Algebra(std::move(impl));
}

const Signature& Algebra::signature() const {
  if (!impl_) {
    static const Signature empty;
    return empty;
  }
  return impl_->signature;
}

CliffordElement Algebra::unit() const { return scalar(1.0); }

CliffordElement Algebra::zero() const { return CliffordElement(*this, {}); }

CliffordElement Algebra::scalar(Complex value) const {
  return CliffordElement(*this, {{Blade::unit(), value}});
}

CliffordElement Algebra::generator(std::size_t i) const {
  if (i >= generator_count()) {
    throw UsageError("generator index " + std::to_string(i) + " out of range");
  }
  return CliffordElement(*this, {{Blade::generator(i), 1.0}});
}

CliffordElement Algebra::blade(Blade b, Complex coefficient) const {
  return CliffordElement(*this, {{b, coefficient}});
}

bool Algebra::is_valid_blade(Blade b) const noexcept {
  const std::uint64_t valid = impl_ ? impl_->valid_mask : 0;
  return (b.mask & ~valid) == 0;
}

BladeProduct Algebra::multiply_blades(Blade a, Blade b) const {
  const std::uint64_t common = a.mask & b.mask;
  if (impl_ && (common & impl_->null_mask) != 0) return {0, Blade{}};
  int sign = reorder_sign(a, b);
  if (impl_ && (std::popcount(common & impl_->negative_mask) & 1)) sign = -sign;
  return {sign, Blade{a.mask ^ b.mask}};
}

CliffordElement::CliffordElement(Algebra algebra, TermMap terms)
    : algebra_(std::move(algebra)), terms_(std::move(terms)) {
  for (const auto& [blade, c] : terms_) {
    if (!algebra_.is_valid_blade(blade)) {
      throw UsageError("blade outside the algebra's generator range");
    }
  }
  prune();
}

void CliffordElement::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

void CliffordElement::require_compatible(const CliffordElement& other, const char* op) {
  if (!algebra_.bound()) {
    algebra_ = other.algebra_;
    return;
  }
  if (!other.algebra_.bound()) return;
  if (!algebra_.same_as(other.algebra_)) {
    throw UsageError(std::string("operands of ") + op + " belong to different algebras");
  }
}

Complex CliffordElement::coefficient(Blade b) const {
  auto it = terms_.find(b);
  return it == terms_.end() ? Complex{} : it->second;
}

double CliffordElement::non_scalar_norm() const {
  double m = 0.0;
  for (const auto& [blade, c] : terms_) {
    if (!blade.is_scalar()) m = std::max(m, std::abs(c));
  }
  return m;
}

double CliffordElement::max_norm() const {
  double m = 0.0;
  for (const auto& [blade, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

int CliffordElement::max_grade() const {
  int g = 0;
  for (const auto& [blade, c] : terms_) g = std::max(g, blade.grade());
  return g;
}

CliffordElement& CliffordElement::operator+=(const CliffordElement& other) {
  require_compatible(other, "+");
  for (const auto& [blade, c] : other.terms_) terms_[blade] += c;
  prune();
  return *this;
}

CliffordElement& CliffordElement::operator-=(const CliffordElement& other) {
  require_compatible(other, "-");
  for (const auto& [blade, c] : other.terms_) terms_[blade] -= c;
  prune();
  return *this;
}

CliffordElement& CliffordElement::operator*=(Complex s) {
  for (auto& [blade, c] : terms_) c *= s;
  prune();
  return *this;
}

CliffordElement operator*(const CliffordElement& x, const CliffordElement& y) {
  CliffordElement out;
  out.require_compatible(x, "*");
  out.require_compatible(y, "*");
  const Algebra& alg = out.algebra_;
  for (const auto& [bx, cx] : x.terms_) {
    for (const auto& [by, cy] : y.terms_) {
      const BladeProduct p = alg.multiply_blades(bx, by);
      if (p.sign == 0) continue;
      out.terms_[p.blade] += static_cast<double>(p.sign) * (cx * cy);
    }
  }
  out.prune();
  return out;
}

CliffordElement multiply(const CliffordElement& x, const CliffordElement& y) { return x * y; }

CliffordElement anticommutator(const CliffordElement& x, const CliffordElement& y) {
  CliffordElement out;
  out.require_compatible(x, "anticommutator");
  out.require_compatible(y, "anticommutator");
  const Algebra& alg = out.algebra_;
  for (const auto& [bx, cx] : x.terms_) {
    for (const auto& [by, cy] : y.terms_) {
      if (!blades_commute(bx, by)) continue;
      const BladeProduct p = alg.multiply_blades(bx, by);
      if (p.sign == 0) continue;
      out.terms_[p.blade] += static_cast<double>(2 * p.sign) * (cx * cy);
    }
  }
  out.prune();
  return out;
}

CliffordElement commutator(const CliffordElement& x, const CliffordElement& y) {
  return x * y - y * x;
}

CliffordElement involution(const CliffordElement& x) {
  CliffordElement out = x;
  for (auto& [blade, c] : out.terms_) c = std::conj(c);
  return out;
}

double max_abs_diff(const CliffordElement& x, const CliffordElement& y) {
  return (x - y).max_norm();
}

std::string CliffordElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [blade, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (blade.is_scalar()) continue;
    os << "*e";
    bool sep = false;
    for (std::size_t i = 0; i < kMaxGenerators; ++i) {
      if (!blade.contains(i)) continue;
      os << (sep ? "," : "") << i;
      sep = true;
    }
  }
  return os.str();
}

ComplexGeneratorSet complex_generators(const Algebra& algebra, std::span<const double> norms,
                                       std::size_t offset) {
  const Signature& sig = algebra.signature();
  if (offset + 2 * norms.size() > sig.size()) {
    throw ConfigError("algebra has too few real generators for the requested complex generators");
  }
  ComplexGeneratorSet set;
  set.generators.reserve(norms.size());
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const double q = norms[k];
    const int expected = q > 0 ? 1 : (q < 0 ? -1 : 0);
    const std::size_t ia = offset + 2 * k;
    const std::size_t ib = ia + 1;
    if (sig[ia] != expected || sig[ib] != expected) {
      throw ConfigError("generator signs at " + std::to_string(ia) + "," + std::to_string(ib) +
                        " do not match sign of norm " + std::to_string(q));
    }
    // With a² = b² = s: {a + ib, a - ib} = 4s, hence the 1/2 scaling.
    const double scale = (q == 0.0 ? 1.0 : std::sqrt(std::abs(q))) / 2.0;
    CliffordElement f(algebra, {{Blade::generator(ia), Complex(scale, 0.0)},
                                {Blade::generator(ib), Complex(0.0, scale)}});
    set.generators.push_back(std::move(f));
  }
  return set;
}

}  // namespace cliffsub
