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

#include <array>
#include <optional>
#include <vector>

#include "thetalift/schwartz.hpp"

namespace thetalift {

using Mat2 = std::array<std::array<PadicNumber, 2>, 2>;
using Mat4 = std::array<std::array<PadicNumber, 4>, 4>;

Mat2 mat2(FieldPtr f, const Rat& a, const Rat& b, const Rat& c, const Rat& d);
Mat2 mat2_identity(FieldPtr f);
Mat2 mat2_mul(const Mat2& x, const Mat2& y);
Mat2 mat2_inverse(const Mat2& x);
Mat2 mat2_transpose(const Mat2& x);
PadicNumber mat2_det(const Mat2& x);
bool mat2_eq(const Mat2& x, const Mat2& y);
bool is_sl2(const Mat2& x);

Mat4 mat4_identity(FieldPtr f);
Mat4 mat4_mul(const Mat4& x, const Mat4& y);
bool mat4_eq(const Mat4& x, const Mat4& y);
bool is_sp4(const Mat4& g);  // preserves the fixed form J (row vectors)
// Sp(2): every invertible 2x2 with det 1 (the form check is det here).
bool is_orthogonal_norm_form(const QuadPtr& E, const Mat2& h);

// Weil index of x -> psi(a x^2): stabilized normalized integral, exact.
// Depends on a (and the twist of psi) only through the square class.
ExactScalar gamma_weil(const ContextPtr& ctx, const AdditiveCharacter& psi, const PadicNumber& a);
// gamma_F(a, psi) = gamma_F(psi_a) / gamma_F(psi)
ExactScalar gamma_ratio(const ContextPtr& ctx, const AdditiveCharacter& psi, const PadicNumber& a);

// Rao's f map, dim 2: the square class carrier entry (c if c != 0 else d).
PadicNumber rao_f2(const Mat2& g);
// Normalized +-1 cocycle of Mp(2).
int normalized_cocycle(const Mat2& g1, const Mat2& g2);

// Canonical SL(2) Bruhat word in {t(a), u(b), w}.
struct SL2Gen {
    enum class Kind { Torus, Unip, Weyl } kind;
    PadicNumber a;  // parameter for Torus / Unip
};
using SL2Word = std::vector<SL2Gen>;
SL2Word sl2_bruhat_word(const Mat2& g);
Mat2 sl2_word_matrix(FieldPtr f, const SL2Word& w);
Mat2 sl2_gen_matrix(FieldPtr f, const SL2Gen& g);

// Bruhat factorization g = p1 tau_S p2 in Sp(4).
struct Bruhat4 {
    Mat4 p1;
    bool s1 = false, s2 = false;  // S subset of {1,2}
    Mat4 p2;
    int j() const { return (s1 ? 1 : 0) + (s2 ? 1 : 0); }
};
Mat4 tau_matrix(FieldPtr f, bool s1, bool s2);
Bruhat4 bruhat_decompose(const Mat4& g);
// f(p1 tau_S p2) = det(p1 p2 |_Y) mod squares
PadicNumber rao_f4(const Mat4& g);

// Dual pair embeddings (paper's displayed matrices).
Mat4 iota(const QuadPtr& E, const Mat2& h, const Mat2& g);
Mat2 so2_matrix(const ExtElement& mu);

// Schroedinger-model generator operators of Mp(4).
struct WeilGen {
    enum class Kind { DiagBlock, Unipotent, Tau } kind;
    Mat2 A;              // DiagBlock: [[A,0],[0,A^{-T}]]
    Mat2 B;              // Unipotent: [[I,B],[0,I]], B symmetric
    bool s1 = false, s2 = false;  // Tau subset
};
Mat4 weil_gen_matrix(const QuadPtr& E, FieldPtr f, const WeilGen& g);
SchwartzFunction weil_gen_apply(const WeilGen& g, const AdditiveCharacter& psi,
                                const SchwartzFunction& phi, int epsilon = 1);

// Normalized operator of an Sp(4) element, composed along its canonical
// Bruhat factorization (the operational definition of omega'_psi).
SchwartzFunction weil_apply(const Mat4& g, const AdditiveCharacter& psi, const SchwartzFunction& phi,
                            int epsilon = 1);

// Metaplectic elements (g, eps) with operationally computed Sp(4) cocycle.
struct MetaplecticElement {
    Mat4 g;
    int eps = 1;
};
// lift of mu in E^1 with constant sign +1
MetaplecticElement lift_E1(const QuadPtr& E, const ExtElement& mu);

// The splitting s: SL(2,F) -> Mp(4) on canonical generator words.
int splitting_sign(const QuadPtr& E, const SL2Gen& g);
MetaplecticElement splitting_s(const QuadPtr& E, const SL2Word& w, const AdditiveCharacter& psi,
                               const ContextPtr& ctx);
// operator of the splitting of one generator (sign * normalized Weil operator)
SchwartzFunction splitting_gen_apply(const QuadPtr& E, const SL2Gen& g, const AdditiveCharacter& psi,
                                     const SchwartzFunction& phi);
SchwartzFunction splitting_word_apply(const QuadPtr& E, const SL2Word& w, const AdditiveCharacter& psi,
                                      const SchwartzFunction& phi);

// Operational Sp(4) cocycle: the scalar lambda with op(g1) op(g2) = lambda op(g1 g2),
// extracted on probe functions (dual-pair image elements only).
ExactScalar cocycle4_operational(const Mat4& g1, const Mat4& g2, const AdditiveCharacter& psi,
                                 const QuadPtr& E, const ContextPtr& ctx);

MetaplecticElement mp_mul(const MetaplecticElement& x, const MetaplecticElement& y,
                          const AdditiveCharacter& psi, const QuadPtr& E, const ContextPtr& ctx);

}  // namespace thetalift
