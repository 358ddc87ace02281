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
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "thetalift/quadratic.hpp"

namespace thetalift {

// Locally constant compactly supported functions on E, stored on the
// X-coordinate system of the dual-pair basis: alpha = x1 * 1 + x2 * (-delta/Delta).
// A cell is a coordinate box c + p^{n1} O_F x p^{n2} O_F. Fractional-ideal
// cosets c + p_E^j O_E are boxes in these coordinates (for both ramification
// types), and the partial Fourier transforms stay inside the box family.
struct CellBox {
    Rat c1, c2;
    int n1, n2;

    bool operator<(const CellBox& o) const;
    bool operator==(const CellBox& o) const;
};

class SchwartzFunction {
  public:
    SchwartzFunction() = default;
    SchwartzFunction(QuadPtr E, ContextPtr ctx, size_t cell_cap = 100000);

    static SchwartzFunction zero(QuadPtr E, ContextPtr ctx, size_t cap = 100000);
    // indicator of c + p_E^j O_E (j in uniformizer powers of E)
    static SchwartzFunction indicator_frak(QuadPtr E, ContextPtr ctx, const ExtElement& center,
                                           long j, size_t cap = 100000);
    // indicator of c + p^n O_E
    static SchwartzFunction indicator_lattice(QuadPtr E, ContextPtr ctx, const ExtElement& center,
                                              int n, size_t cap = 100000);

    const QuadPtr& ext() const { return E_; }
    const ContextPtr& context() const { return ctx_; }
    size_t cell_cap() const { return cap_; }
    size_t cell_count() const { return cells_.size(); }
    const std::map<CellBox, ExactScalar>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }

    void add_cell(const CellBox& box, const ExactScalar& coeff);

    SchwartzFunction operator+(const SchwartzFunction& o) const;
    SchwartzFunction operator-(const SchwartzFunction& o) const;
    SchwartzFunction scaled(const ExactScalar& c) const;
    SchwartzFunction scaled(const Rat& c) const;
    SchwartzFunction conj() const;  // conjugate coefficients
    SchwartzFunction pointwise_mul(const SchwartzFunction& o) const;

    // X-coordinates of an extension element.
    static std::pair<PadicNumber, PadicNumber> coords_of(const ExtElement& alpha);
    static ExtElement element_of(const QuadPtr& E, const Rat& x1, const Rat& x2);

    ExactScalar evaluate(const ExtElement& alpha) const;
    ExactScalar integrate() const;  // vol(O_E) = 1

    // f(alpha) -> f(a * alpha) for a in F^x (box-wise, any shape).
    SchwartzFunction dilate_base(const PadicNumber& a) const;
    // f(alpha) -> f(zeta * alpha) for zeta in E^x (refines to ideal cells first).
    SchwartzFunction dilate_ext(const ExtElement& zeta) const;
    // f(alpha) -> f(-alpha)
    SchwartzFunction reflect() const { return dilate_base(PadicNumber::from_long(E_->F, -1)); }
    // f(alpha) -> f at coordinates (d1 x1, d2 x2)
    SchwartzFunction dilate_coords(const PadicNumber& d1, const PadicNumber& d2) const;
    // f(alpha) -> f(alpha * A) for A = diag(d1,d2) * (multiplication by zeta);
    // covers every A-block reachable from the dual pair embeddings.
    SchwartzFunction right_mult(const std::array<std::array<PadicNumber, 2>, 2>& A) const;

    // multiply by psi(q(x)), q(x) = q11 x1^2 + 2 q12 x1 x2 + q22 x2^2.
    SchwartzFunction modulate_quadratic(const AdditiveCharacter& psi, const PadicNumber& q11,
                                        const PadicNumber& q12, const PadicNumber& q22) const;
    // multiply by psi(b * N(alpha))
    SchwartzFunction modulate_norm(const AdditiveCharacter& psi, const PadicNumber& b) const;
    // multiply by psi(t * x_i)
    SchwartzFunction modulate_coord(const AdditiveCharacter& psi, int coord, const PadicNumber& t) const;

    // sigma-twisted Fourier transform: (Tf)(alpha) = m0 * int psi(Tr(z alpha^sigma)) f(z) dz.
    // `m0` is the measure constant (self-dual when produced by selfdual_constant).
    SchwartzFunction twisted_fourier(const AdditiveCharacter& psi, const ExactScalar& m0) const;

    // 1-dim Fourier in one coordinate: the appendix tau_{i} action
    // (kernel psi(-b alpha_i) against phi(-b x_i + ...), i.e. net kernel
    // psi(+b xi)); m1 is the per-axis measure constant.
    SchwartzFunction partial_fourier(const AdditiveCharacter& psi, int coord, const ExactScalar& m1) const;

    // average over the enumerated E^1 quotient against theta^{-1}
    SchwartzFunction isotypic_project(const CharacterEOne& theta) const;
    bool is_isotypic(const CharacterEOne& theta) const;

    // disjoint canonical cell list (region pushdown; exact)
    SchwartzFunction canonicalize() const;
    bool is_zero_function() const;
    bool equal_function(const SchwartzFunction& o) const;

    // support exponent m (support in p^{-m} O_E) and max lattice level n (in
    // p-power units); zero function reports (INT_MIN, INT_MIN).
    std::pair<int, int> window() const;

    // refine every cell to p_E-ideal shape (needed before ext dilation /
    // E-lattice serialization); `target_j` of -1 keeps each cell's own level.
    SchwartzFunction refine_to_ideal_cells(long target_j = -1) const;

    // cells as (center, p-power level, coeff) triples for serialization
    struct LatticeCell {
        ExtElement center;
        int level;
        ExactScalar coeff;
    };
    std::vector<LatticeCell> lattice_cells() const;

  private:
    void check_cap(size_t extra) const;
    QuadPtr E_;
    ContextPtr ctx_;
    size_t cap_ = 100000;
    std::map<CellBox, ExactScalar> cells_;
};

// Measure constant making the double transform a pure point reflection,
// discovered operationally by transforming 1_{O_E} twice.
ExactScalar selfdual_constant(const QuadPtr& E, const ContextPtr& ctx, const AdditiveCharacter& psi);

// Conductor exponent of psi_E = psi o Tr in uniformizer powers of E.
long psiE_conductor(const QuadPtr& E, const AdditiveCharacter& psi);

// Box shape of the fractional ideal p_E^j.
std::pair<int, int> frak_ideal_box(const QuadPtr& E, long j);

}  // namespace thetalift
