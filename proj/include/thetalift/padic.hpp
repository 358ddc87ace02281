/* Copyright 2026 The thetalift Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetalift/cyclotomic.hpp"
#include "thetalift/rational.hpp"

namespace thetalift {

// F = Q_p (p odd) at N significant p-adic digits.
struct FieldConfig {
    long p;
    int digits;

    static std::shared_ptr<const FieldConfig> create(long p, int digits);
    Int p_pow(int e) const;  // p^e, e >= 0
    long nonresidue() const;  // smallest positive non-residue mod p
};
using FieldPtr = std::shared_ptr<const FieldConfig>;

enum class SquareClass { One, U, Pi, UPi };

std::string square_class_name(SquareClass c);
SquareClass square_class_mul(SquareClass a, SquareClass b);

// Element of Q_p: either zero or p^val * unit. Values constructed from
// rationals stay exact (add(1,-1) = 0 is detected, never PrecisionLoss);
// Hensel-lifted values carry `known` digits and degrade arithmetic honestly.
class PadicNumber {
  public:
    PadicNumber() = default;

    static PadicNumber zero(FieldPtr f);
    static PadicNumber from_rational(FieldPtr f, const Rat& x);
    static PadicNumber from_long(FieldPtr f, long x) { return from_rational(f, Rat(x)); }
    // p^val * unit with `known` valid digits of the unit (truncated model).
    static PadicNumber truncated(FieldPtr f, long val, const Int& unit, int known);

    const FieldPtr& field() const { return f_; }
    bool is_zero() const { return zero_; }
    bool is_exact() const { return exact_.has_value(); }
    long valuation() const;            // throws ZeroInput on zero
    int known_digits() const { return exact_ ? f_->digits : known_; }
    const Rat& exact_value() const;    // throws if not exact

    // Unit part reduced mod p^digits (throws PrecisionLoss if digits > known).
    Int unit_mod(int digits) const;
    // The element as an integer multiple of p^val, i.e. unit mod p^digits.
    // Convenience for digit serialization.
    std::vector<int> unit_digit_list() const;

    PadicNumber operator-() const;
    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-(const PadicNumber& o) const;
    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator/(const PadicNumber& o) const;
    bool operator==(const PadicNumber& o) const;
    bool operator!=(const PadicNumber& o) const { return !(*this == o); }

    PadicNumber pow_int(long e) const;

    bool is_unit() const { return !zero_ && valuation() == 0; }
    int legendre_of_unit() const;  // Legendre symbol of the unit part mod p
    SquareClass square_class() const;
    bool is_square() const;
    // Hensel square root (input must be a square); result carries full digits.
    PadicNumber sqrt() const;

    std::string str() const;

  private:
    void ensure_val() const;
    void ensure_unit(int digits) const;
    FieldPtr f_;
    bool zero_ = true;
    std::optional<Rat> exact_;
    mutable bool have_val_ = false;
    mutable long val_ = 0;
    mutable Int unit_ = 0;  // mod p^known, coprime to p
    mutable int known_ = 0;
};

PadicNumber square_class_rep(FieldPtr f, SquareClass c);
SquareClass square_class_of(const PadicNumber& a);

// Tame Hilbert symbol (a,b) for odd p.
int hilbert_symbol(const PadicNumber& a, const PadicNumber& b);
int hilbert_symbol_classes(FieldPtr f, SquareClass a, SquareClass b);

// vol(c + p^n O_F) with vol(O_F) = 1.
Rat haar_volume(const FieldPtr& f, int level);

// psi_t with psi the base character: trivial on O_F, nontrivial on p^{-1}O_F,
// psi(x) = zeta_{p^m}^{e} on the fractional part of t*x.
class AdditiveCharacter {
  public:
    AdditiveCharacter() = default;
    AdditiveCharacter(FieldPtr f, PadicNumber twist);
    static AdditiveCharacter base(FieldPtr f);

    const FieldPtr& field() const { return f_; }
    const PadicNumber& twist() const { return t_; }
    // conductor exponent: psi_t trivial on p^c O_F, nontrivial below.
    long conductor() const { return -t_.valuation(); }

    AdditiveCharacter twisted(const PadicNumber& s) const;  // psi_{t*s}

    // Value psi_t(x) in the given scalar context (LevelOverflow if v(t x) < -k).
    ExactScalar eval(const ContextPtr& ctx, const PadicNumber& x) const;

  private:
    FieldPtr f_;
    PadicNumber t_;
};

}  // namespace thetalift
