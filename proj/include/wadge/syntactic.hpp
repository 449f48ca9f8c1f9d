#pragma once

// The syntactic quotient of a saturated algebra: tree types and behaviors
// identified when no context tells them apart, with complete operation
// tables over the classes.

#include <cstdint>
#include <optional>
#include <vector>

#include "wadge/algebra.hpp"
#include "wadge/bitset.hpp"

namespace wadge {

class SyntacticAlgebra {
public:
  /// Throws std::length_error when the behavior classes exceed
  /// max_behaviors (the multiplication table is quadratic).
  explicit SyntacticAlgebra(const AlgebraTables& alg, std::size_t max_behaviors = 12000);

  const AlgebraTables& tables() const { return *alg_; }
  std::uint32_t type_count() const { return nh_; }
  std::uint32_t behavior_count() const { return nv_; }
  std::uint32_t symbol_count() const { return na_; }

  std::uint32_t type_class(std::uint32_t h) const { return type_class_[h]; }
  std::uint32_t behavior_class(std::uint32_t v) const { return behavior_class_[v]; }
  /// Least algebra id in the class.
  std::uint32_t type_rep(std::uint32_t c) const { return type_rep_[c]; }
  std::uint32_t behavior_rep(std::uint32_t c) const { return behavior_rep_[c]; }

  std::uint32_t identity() const { return behavior_class_[0]; }
  bool in_l(std::uint32_t h) const { return in_l_[h]; }

  std::uint32_t leaf(Symbol a) const { return leaf_[a]; }
  std::uint32_t unary(Symbol a, Direction d, std::uint32_t h) const {
    return unary_[(a * 2 + static_cast<unsigned>(d)) * nh_ + h];
  }
  std::uint32_t binary(Symbol a, std::uint32_t l, std::uint32_t r) const { return binary_[(a * nh_ + l) * nh_ + r]; }
  /// Class of a(*) / a(-,*) (no side) or a(*,h) / a(h,*).
  std::uint32_t step(Symbol a, Direction d, std::optional<std::uint32_t> side) const {
    const std::size_t k = a * 2 + static_cast<unsigned>(d);
    return side ? side_step_[k * nh_ + *side] : plain_step_[k];
  }
  /// x ; y (x outermost).
  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return mul_[std::size_t{x} * nv_ + y]; }
  std::uint32_t apply(std::uint32_t v, std::uint32_t h) const { return apply_[std::size_t{v} * nh_ + h]; }
  /// kNone when no nonempty context of this class is known.
  std::uint32_t omega(std::uint32_t v) const { return omega_[v]; }

  /// Distinct step classes.
  const std::vector<std::uint32_t>& step_classes() const { return step_classes_; }
  /// Step classes whose side, if any, is a finite tree.
  const std::vector<std::uint32_t>& finite_step_classes() const { return finite_steps_; }
  /// Types of finite trees and behaviors of finite contexts.
  const Bitset& finite_types() const { return finite_types_; }
  const Bitset& finite_behaviors() const { return finite_behaviors_; }

  /// Sizes before quotienting.
  std::size_t raw_types() const { return alg_->type_count(); }
  std::size_t raw_behaviors() const { return alg_->behavior_count(); }

private:
  const AlgebraTables* alg_;
  std::uint32_t nh_ = 0, nv_ = 0, na_ = 0;
  std::vector<std::uint32_t> type_class_, behavior_class_, type_rep_, behavior_rep_;
  std::vector<bool> in_l_;
  std::vector<std::uint32_t> leaf_, unary_, binary_, plain_step_, side_step_;
  std::vector<std::uint32_t> mul_, apply_, omega_;
  std::vector<std::uint32_t> step_classes_, finite_steps_;
  Bitset finite_types_, finite_behaviors_;
};

}  // namespace wadge
