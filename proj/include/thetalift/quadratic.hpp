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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetalift/padic.hpp"

namespace thetalift {

struct QuadExt;
using QuadPtr = std::shared_ptr<const QuadExt>;

// E = F(delta), delta^2 = Delta, Delta a nonsquare. Basis {1, delta}.
struct QuadExt {
    FieldPtr F;
    PadicNumber Delta;
    SquareClass delta_class;
    bool ramified;  // v(Delta) odd

    static QuadPtr create(FieldPtr F, const PadicNumber& Delta);
    static QuadPtr from_class(FieldPtr F, SquareClass c);

    long residue_degree() const { return ramified ? 1 : 2; }
    long ram_index() const { return ramified ? 2 : 1; }
    // v_E normalized so v_E(uniformizer) = 1.
    long vE_of_p() const { return ramified ? 2 : 1; }
    // Canonical non-norm square class representative in F^x.
    PadicNumber eta() const;
};

class ExtElement {
  public:
    ExtElement() = default;
    ExtElement(QuadPtr E, PadicNumber a1, PadicNumber a2);

    static ExtElement zero(QuadPtr E);
    static ExtElement one(QuadPtr E);
    static ExtElement from_base(QuadPtr E, const PadicNumber& x);
    static ExtElement delta(QuadPtr E);
    static ExtElement uniformizer(QuadPtr E);  // p if unramified, delta if ramified

    const QuadPtr& ext() const { return E_; }
    const PadicNumber& a1() const { return a1_; }
    const PadicNumber& a2() const { return a2_; }

    bool is_zero() const { return a1_.is_zero() && a2_.is_zero(); }
    long val_E() const;  // throws ZeroInput on zero

    ExtElement operator-() const;
    ExtElement operator+(const ExtElement& o) const;
    ExtElement operator-(const ExtElement& o) const;
    ExtElement operator*(const ExtElement& o) const;
    ExtElement operator/(const ExtElement& o) const;
    ExtElement scaled(const PadicNumber& c) const;
    bool operator==(const ExtElement& o) const;
    bool operator!=(const ExtElement& o) const { return !(*this == o); }

    ExtElement sigma() const;  // Galois conjugate
    PadicNumber norm() const;
    PadicNumber trace() const;
    ExtElement inverse() const;
    ExtElement pow_int(long e) const;

    std::string str() const;

  private:
    QuadPtr E_;
    PadicNumber a1_, a2_;
};

// Some zeta with N(zeta) = gamma; throws NonNorm when (gamma, Delta) = -1.
ExtElement solve_norm(const QuadPtr& E, const PadicNumber& gamma);

// Exact root of unity bookkeeping: exp(2*pi*i*exp/order).
struct RootOfUnity {
    long order = 1;
    long exp = 0;

    static RootOfUnity one() { return {1, 0}; }
    static RootOfUnity make(long order, long exp);
    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity inverse() const;
    RootOfUnity pow(long e) const;
    bool is_one() const { return exp == 0; }
    bool operator==(const RootOfUnity& o) const { return order == o.order && exp == o.exp; }
    bool operator!=(const RootOfUnity& o) const { return !(*this == o); }
    ExactScalar eval(const ContextPtr& ctx) const;
    long multiplicative_order() const { return order; }
};

// Finite quotient of E^1 (or of the unit group) with exact lifted
// representatives; multiplication happens on residue keys.
class ResidueGroup {
  public:
    using Key = std::pair<long, long>;

    const std::vector<ExtElement>& elements() const { return elems_; }
    size_t size() const { return elems_.size(); }
    long index_of(const ExtElement& x) const;  // throws if not in the group
    long mul(long i, long j) const;
    long inv(long i) const;
    long identity() const { return id_; }
    long element_order(long i) const;
    Key key_of(const ExtElement& x) const;

    const QuadPtr& ext() const { return E_; }
    int level() const { return level_; }
    int s1() const { return s1_; }
    int s2() const { return s2_; }

  protected:
    friend class E1Group;
    friend class UnitGroup;
    QuadPtr E_;
    int level_ = 0;
    int s1_ = 0, s2_ = 0;  // key digit counts for the two coordinates
    std::vector<ExtElement> elems_;
    std::map<Key, long> index_;
    long id_ = 0;
};

// E^1 / (E^1 cap (1 + p^n O_E)); cyclic for odd p.
class E1Group : public ResidueGroup {
  public:
    static std::shared_ptr<const E1Group> create(QuadPtr E, int level, size_t budget = 2000000);
    long generator() const { return gen_; }
    long dlog(long i) const { return dlog_[i]; }  // discrete log base generator
    long order() const { return static_cast<long>(elems_.size()); }
    long index_of_minus_one() const;
    // elements congruent to 1 mod p_E (the kernel probe for admissibility)
    std::vector<long> principal_unit_indices() const;

  private:
    long gen_ = 0;
    std::vector<long> dlog_;
};
using E1Ptr = std::shared_ptr<const E1Group>;

// (O_E / p_E^n)^x
class UnitGroup : public ResidueGroup {
  public:
    static std::shared_ptr<const UnitGroup> create(QuadPtr E, int level, size_t budget = 2000000);
    const std::vector<long>& generators() const { return gens_; }
    long sigma_of(long i) const { return sigma_[i]; }

  private:
    std::vector<long> gens_;
    std::vector<long> sigma_;
};
using UnitPtr = std::shared_ptr<const UnitGroup>;

// Character of E^1 at finite level, given on the cyclic generator.
class CharacterEOne {
  public:
    CharacterEOne() = default;
    CharacterEOne(E1Ptr G, RootOfUnity gen_image);

    const E1Ptr& group() const { return G_; }
    int level() const { return G_->level(); }
    RootOfUnity value_index(long i) const;
    RootOfUnity value(const ExtElement& mu) const;
    ExactScalar eval(const ContextPtr& ctx, const ExtElement& mu) const;
    long order() const;
    bool is_regular() const { return order() > 2; }
    RootOfUnity at_minus_one() const;

  private:
    E1Ptr G_;
    RootOfUnity gen_image_;
};

// Character of E^x at finite level: value at the uniformizer plus a validated
// character of the finite unit quotient.
class CharacterEStar {
  public:
    CharacterEStar() = default;
    CharacterEStar(UnitPtr U, RootOfUnity at_uniformizer, std::vector<RootOfUnity> gen_images);

    const UnitPtr& units() const { return U_; }
    const QuadPtr& ext() const { return U_->ext(); }
    int level() const { return U_->level(); }
    const RootOfUnity& at_uniformizer() const { return unif_; }
    const std::vector<RootOfUnity>& gen_images() const { return gen_images_; }

    RootOfUnity unit_value_index(long i) const { return table_[i]; }
    RootOfUnity value(const ExtElement& x) const;  // any x in E^x (precision permitting)
    ExactScalar eval(const ContextPtr& ctx, const ExtElement& x) const;
    RootOfUnity value_at_base(const PadicNumber& x) const;  // restriction to F^x

    CharacterEStar sigma_twist() const;  // Theta o sigma
    bool equals(const CharacterEStar& o) const;

  private:
    UnitPtr U_;
    RootOfUnity unif_;
    std::vector<RootOfUnity> gen_images_;
    std::vector<RootOfUnity> table_;
};

struct AdmissiblePair {
    QuadPtr E;
    CharacterEStar Theta;
};

struct AdmissibilityVerdict {
    bool admissible;
    std::string reason;
    int level;
};

AdmissibilityVerdict is_admissible(const AdmissiblePair& pair);

// theta := Theta|_{E^1} along with its regularity flag.
struct RestrictedCharacter {
    CharacterEOne theta;
    bool regular;
};
RestrictedCharacter restrict_to_E1(const CharacterEStar& Theta);

// x -> (x, Delta) * Theta(x) on F^x (the determinant character kappa (x) Theta|_F).
struct DetCharacter {
    AdmissiblePair pair;
    RootOfUnity value_root(const PadicNumber& x) const;   // the Theta(x) part with sign folded in
    ExactScalar eval(const ContextPtr& ctx, const PadicNumber& x) const;
};

}  // namespace thetalift
