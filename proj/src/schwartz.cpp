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

#include "thetalift/schwartz.hpp"

#include <algorithm>
#include <climits>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {

// canonical representative of c modulo p^n O_F
Rat canon_center(const Rat& cin, int n, long p) {
    Rat c = cin;
    c.canonicalize();
    if (c == 0) return Rat(0);
    Int pz(p);
    long v = rat_valuation(c, pz);
    if (v >= n) return Rat(0);
    int m = std::max(0, -static_cast<int>(v));
    Int mod = int_pow(p, static_cast<unsigned long>(n + m));
    Rat t = c * rat_pow(Rat(p), m);
    Int num = mod_positive(t.get_num(), mod);
    Int den = mod_positive(t.get_den(), mod);
    Int res = mod_positive(num * mod_inverse(den, mod), mod);
    Rat out = Rat(res) / rat_pow(Rat(p), m);
    out.canonicalize();
    return out;
}

bool ball_contains(const Rat& c, int n, const Rat& c2, int n2, long p) {
    // c + p^n O contains c2 + p^{n2} O
    if (n2 < n) return false;
    Rat d = c2 - c;
    if (d == 0) return true;
    return rat_valuation(d, Int(p)) >= n;
}

}  // namespace

bool CellBox::operator<(const CellBox& o) const {
    if (n1 != o.n1) return n1 < o.n1;
    if (n2 != o.n2) return n2 < o.n2;
    int c = cmp(c1, o.c1);
    if (c != 0) return c < 0;
    return cmp(c2, o.c2) < 0;
}

bool CellBox::operator==(const CellBox& o) const {
    return n1 == o.n1 && n2 == o.n2 && c1 == o.c1 && c2 == o.c2;
}

SchwartzFunction::SchwartzFunction(QuadPtr E, ContextPtr ctx, size_t cap)
    : E_(std::move(E)), ctx_(std::move(ctx)), cap_(cap) {}

SchwartzFunction SchwartzFunction::zero(QuadPtr E, ContextPtr ctx, size_t cap) {
    return SchwartzFunction(std::move(E), std::move(ctx), cap);
}

std::pair<int, int> frak_ideal_box(const QuadPtr& E, long j) {
    if (!E->ramified) return {static_cast<int>(j), static_cast<int>(j)};
    long a = (j >= 0) ? (j + 1) / 2 : -((-j) / 2);      // ceil(j/2)
    long b = ((j >= 0) ? j / 2 : -((-j + 1) / 2)) + 1;  // floor(j/2) + 1
    return {static_cast<int>(a), static_cast<int>(b)};
}

void SchwartzFunction::check_cap(size_t extra) const {
    if (cells_.size() + extra > cap_) throw LevelOverflow("cell budget exceeded");
}

void SchwartzFunction::add_cell(const CellBox& box, const ExactScalar& coeff) {
    if (coeff.is_zero()) return;
    long p = E_->F->p;
    CellBox key{canon_center(box.c1, box.n1, p), canon_center(box.c2, box.n2, p), box.n1, box.n2};
    auto it = cells_.find(key);
    if (it == cells_.end()) {
        check_cap(1);
        cells_.emplace(key, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) cells_.erase(it);
    }
}

SchwartzFunction SchwartzFunction::indicator_frak(QuadPtr E, ContextPtr ctx, const ExtElement& center,
                                                  long j, size_t cap) {
    SchwartzFunction f(E, std::move(ctx), cap);
    auto [x1, x2] = coords_of(center);
    auto [b1, b2] = frak_ideal_box(E, j);
    f.add_cell({x1.is_zero() ? Rat(0) : x1.exact_value(), x2.is_zero() ? Rat(0) : x2.exact_value(),
                b1, b2},
               ExactScalar::one(f.ctx_));
    return f;
}

SchwartzFunction SchwartzFunction::indicator_lattice(QuadPtr E, ContextPtr ctx,
                                                     const ExtElement& center, int n, size_t cap) {
    long e = E->ram_index();
    return indicator_frak(std::move(E), std::move(ctx), center, e * n, cap);
}

std::pair<PadicNumber, PadicNumber> SchwartzFunction::coords_of(const ExtElement& alpha) {
    // alpha = a1 + a2 delta = x1 * 1 + x2 * (-delta/Delta): x1 = a1, x2 = -Delta a2
    return {alpha.a1(), -(alpha.ext()->Delta * alpha.a2())};
}

ExtElement SchwartzFunction::element_of(const QuadPtr& E, const Rat& x1, const Rat& x2) {
    PadicNumber a1 = PadicNumber::from_rational(E->F, x1);
    PadicNumber a2 = -(PadicNumber::from_rational(E->F, x2) / E->Delta);
    return ExtElement(E, a1, a2);
}

SchwartzFunction SchwartzFunction::operator+(const SchwartzFunction& o) const {
    SchwartzFunction r = *this;
    for (const auto& [k, c] : o.cells_) r.add_cell(k, c);
    return r;
}

SchwartzFunction SchwartzFunction::operator-(const SchwartzFunction& o) const {
    SchwartzFunction r = *this;
    for (const auto& [k, c] : o.cells_) r.add_cell(k, -c);
    return r;
}

SchwartzFunction SchwartzFunction::scaled(const ExactScalar& c) const {
    SchwartzFunction r(E_, ctx_, cap_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : cells_) r.cells_[k] = v * c;
    return r;
}

SchwartzFunction SchwartzFunction::scaled(const Rat& c) const {
    return scaled(ExactScalar::from_rational(ctx_, c));
}

SchwartzFunction SchwartzFunction::conj() const {
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [k, v] : cells_) r.cells_[k] = v.conjugate();
    return r;
}

SchwartzFunction SchwartzFunction::pointwise_mul(const SchwartzFunction& o) const {
    long p = E_->F->p;
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [a, ca] : cells_) {
        for (const auto& [b, cb] : o.cells_) {
            // box intersection: per-coordinate balls are nested or disjoint
            int n1 = std::max(a.n1, b.n1), n2 = std::max(a.n2, b.n2);
            const Rat& f1 = a.n1 >= b.n1 ? a.c1 : b.c1;
            const Rat& f2 = a.n2 >= b.n2 ? a.c2 : b.c2;
            if (!ball_contains(a.n1 >= b.n1 ? b.c1 : a.c1, std::min(a.n1, b.n1), f1, n1, p)) continue;
            if (!ball_contains(a.n2 >= b.n2 ? b.c2 : a.c2, std::min(a.n2, b.n2), f2, n2, p)) continue;
            r.add_cell({f1, f2, n1, n2}, ca * cb);
        }
    }
    return r;
}

ExactScalar SchwartzFunction::evaluate(const ExtElement& alpha) const {
    auto [x1, x2] = coords_of(alpha);
    ExactScalar out = ExactScalar::zero(ctx_);
    for (const auto& [box, coeff] : cells_) {
        PadicNumber d1 = x1 - PadicNumber::from_rational(E_->F, box.c1);
        if (!d1.is_zero() && d1.valuation() < box.n1) continue;
        PadicNumber d2 = x2 - PadicNumber::from_rational(E_->F, box.c2);
        if (!d2.is_zero() && d2.valuation() < box.n2) continue;
        out += coeff;
    }
    return out;
}

ExactScalar SchwartzFunction::integrate() const {
    int r = E_->ramified ? 1 : 0;
    ExactScalar out = ExactScalar::zero(ctx_);
    for (const auto& [box, coeff] : cells_)
        out += coeff * rat_pow(Rat(E_->F->p), r - box.n1 - box.n2);
    return out;
}

SchwartzFunction SchwartzFunction::dilate_base(const PadicNumber& a) const {
    if (a.is_zero()) throw ZeroInput();
    Rat ar = a.exact_value();
    long v = a.valuation();
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [box, coeff] : cells_) {
        CellBox nb{box.c1 / ar, box.c2 / ar, box.n1 - static_cast<int>(v),
                   box.n2 - static_cast<int>(v)};
        r.add_cell(nb, coeff);
    }
    return r;
}

SchwartzFunction SchwartzFunction::dilate_coords(const PadicNumber& d1, const PadicNumber& d2) const {
    if (d1.is_zero() || d2.is_zero()) throw ZeroInput();
    Rat r1 = d1.exact_value(), r2 = d2.exact_value();
    long v1 = d1.valuation(), v2 = d2.valuation();
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [box, coeff] : cells_) {
        CellBox nb{box.c1 / r1, box.c2 / r2, box.n1 - static_cast<int>(v1),
                   box.n2 - static_cast<int>(v2)};
        r.add_cell(nb, coeff);
    }
    return r;
}

SchwartzFunction SchwartzFunction::right_mult(
    const std::array<std::array<PadicNumber, 2>, 2>& A) const {
    // factor A = diag(d1, d2) * A_zeta, A_zeta = [[m1, -Delta m2], [-m2, m1]]
    auto f = E_->F;
    const PadicNumber &a00 = A[0][0], &a01 = A[0][1], &a10 = A[1][0], &a11 = A[1][1];
    PadicNumber det = a00 * a11 - a01 * a10;
    if (det.is_zero()) throw Error("right_mult needs an invertible matrix");
    PadicNumber d1, d2, m1, m2;
    if (a01.is_zero() && a10.is_zero()) {
        d1 = a00;
        d2 = a11;
        m1 = PadicNumber::from_long(f, 1);
        m2 = PadicNumber::zero(f);
    } else if (a00.is_zero() && a11.is_zero()) {
        // A = diag * mult by pure delta part: m1 = 0
        m1 = PadicNumber::zero(f);
        m2 = PadicNumber::from_long(f, 1);
        d1 = -a01 / E_->Delta;
        d2 = -a10;
    } else {
        m2 = PadicNumber::from_long(f, 1);
        d1 = -a01 / E_->Delta;
        d2 = -a10;
        if (d1.is_zero() || d2.is_zero()) throw Error("unsupported A-block shape");
        m1 = a00 / d1;
        if (!(a11 == d2 * m1)) throw Error("unsupported A-block shape");
    }
    ExtElement zeta(E_, m1, m2);
    if (zeta.is_zero()) throw Error("unsupported A-block shape");
    // phi(alpha A) = phi(zeta (alpha D)): dilate by zeta first, then coords
    SchwartzFunction mid = dilate_ext(zeta);
    return mid.dilate_coords(d1, d2);
}

SchwartzFunction SchwartzFunction::dilate_ext(const ExtElement& zeta) const {
    if (zeta.is_zero()) throw ZeroInput();
    long w = zeta.val_E();
    ExtElement zinv = zeta.inverse();
    SchwartzFunction src = refine_to_ideal_cells();
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [box, coeff] : src.cells_) {
        long j;
        if (!E_->ramified) {
            j = box.n1;
        } else {
            j = (box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1;
        }
        ExtElement c = element_of(E_, box.c1, box.c2);
        ExtElement nc = zinv * c;
        auto [x1, x2] = coords_of(nc);
        auto [b1, b2] = frak_ideal_box(E_, j - w);
        r.add_cell({x1.is_zero() ? Rat(0) : x1.exact_value(),
                    x2.is_zero() ? Rat(0) : x2.exact_value(), b1, b2},
                   coeff);
    }
    return r;
}

SchwartzFunction SchwartzFunction::modulate_quadratic(const AdditiveCharacter& psi,
                                                      const PadicNumber& q11, const PadicNumber& q12,
                                                      const PadicNumber& q22) const {
    long p = E_->F->p;
    long cond = psi.conductor();
    auto f = E_->F;
    auto vq = [&](const PadicNumber& x) { return x.is_zero() ? LONG_MAX / 4 : x.valuation(); };
    SchwartzFunction r(E_, ctx_, cap_);
    std::vector<std::pair<CellBox, ExactScalar>> work(cells_.begin(), cells_.end());
    size_t guard = 0;
    while (!work.empty()) {
        if (++guard > cap_ * 8) throw LevelOverflow("quadratic modulation refinement exceeded budget");
        auto [box, coeff] = work.back();
        work.pop_back();
        PadicNumber c1 = PadicNumber::from_rational(f, box.c1);
        PadicNumber c2 = PadicNumber::from_rational(f, box.c2);
        PadicNumber g1 = q11 * c1 + q12 * c2;
        PadicNumber g2 = q12 * c1 + q22 * c2;
        bool ok1 = vq(g1) + box.n1 >= cond && vq(q11) + 2 * box.n1 >= cond &&
                   vq(q12) + box.n1 + box.n2 >= cond;
        bool ok2 = vq(g2) + box.n2 >= cond && vq(q22) + 2 * box.n2 >= cond &&
                   vq(q12) + box.n1 + box.n2 >= cond;
        if (ok1 && ok2) {
            PadicNumber qc = q11 * c1 * c1 + (q12 * c1 * c2 + q12 * c1 * c2) + q22 * c2 * c2;
            r.add_cell(box, coeff * psi.eval(ctx_, qc));
            continue;
        }
        int d1 = ok1 ? 0 : 1;
        int d2 = ok2 ? 0 : 1;
        long reps1 = d1 ? p : 1, reps2 = d2 ? p : 1;
        for (long i1 = 0; i1 < reps1; ++i1) {
            for (long i2 = 0; i2 < reps2; ++i2) {
                CellBox child{box.c1 + Rat(i1) * rat_pow(Rat(p), box.n1),
                              box.c2 + Rat(i2) * rat_pow(Rat(p), box.n2), box.n1 + d1, box.n2 + d2};
                work.emplace_back(child, coeff);
            }
        }
    }
    return r;
}

SchwartzFunction SchwartzFunction::modulate_norm(const AdditiveCharacter& psi,
                                                 const PadicNumber& b) const {
    auto f = E_->F;
    PadicNumber zero = PadicNumber::zero(f);
    PadicNumber q22 = -(b / E_->Delta);
    return modulate_quadratic(psi, b, zero, q22);
}

SchwartzFunction SchwartzFunction::modulate_coord(const AdditiveCharacter& psi, int coord,
                                                  const PadicNumber& t) const {
    if (t.is_zero()) return *this;
    long p = E_->F->p;
    long cond = psi.conductor();
    long vt = t.valuation();
    auto f = E_->F;
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [box, coeff] : cells_) {
        int n = coord == 1 ? box.n1 : box.n2;
        int L = static_cast<int>(std::max<long>(n, cond - vt));
        long reps = int_pow(p, static_cast<unsigned long>(L - n)).get_si();
        for (long i = 0; i < reps; ++i) {
            Rat off = Rat(i) * rat_pow(Rat(p), n);
            CellBox child = box;
            Rat cc = coord == 1 ? box.c1 + off : box.c2 + off;
            if (coord == 1) {
                child.c1 = cc;
                child.n1 = L;
            } else {
                child.c2 = cc;
                child.n2 = L;
            }
            PadicNumber val = t * PadicNumber::from_rational(f, cc);
            r.add_cell(child, coeff * psi.eval(ctx_, val));
        }
    }
    return r;
}

SchwartzFunction SchwartzFunction::refine_to_ideal_cells(long target_j) const {
    long p = E_->F->p;
    SchwartzFunction r(E_, ctx_, cap_);
    for (const auto& [box, coeff] : cells_) {
        long j;
        if (!E_->ramified) {
            j = std::max(box.n1, box.n2);
        } else {
            j = std::max<long>(2L * box.n1 - 1, 2L * (box.n2 - 1));
            while (true) {
                auto [a, b] = frak_ideal_box(E_, j);
                if (a >= box.n1 && b >= box.n2) break;
                ++j;
            }
        }
        if (target_j != -1 && target_j > j) j = target_j;
        auto [a, b] = frak_ideal_box(E_, j);
        long reps1 = int_pow(p, static_cast<unsigned long>(a - box.n1)).get_si();
        long reps2 = int_pow(p, static_cast<unsigned long>(b - box.n2)).get_si();
        if (static_cast<size_t>(reps1) * reps2 > cap_)
            throw LevelOverflow("ideal-cell refinement exceeds the cell budget");
        for (long i1 = 0; i1 < reps1; ++i1) {
            for (long i2 = 0; i2 < reps2; ++i2) {
                r.add_cell({box.c1 + Rat(i1) * rat_pow(Rat(p), box.n1),
                            box.c2 + Rat(i2) * rat_pow(Rat(p), box.n2), a, b},
                           coeff);
            }
        }
    }
    return r;
}

long psiE_conductor(const QuadPtr& E, const AdditiveCharacter& psi) {
    long d = E->ramified ? 1 : 0;
    long vt = psi.twist().valuation();
    return -d - E->ram_index() * vt;
}

SchwartzFunction SchwartzFunction::twisted_fourier(const AdditiveCharacter& psi,
                                                   const ExactScalar& m0) const {
    long p = E_->F->p;
    int rr = E_->ramified ? 1 : 0;
    long c0 = psiE_conductor(E_, psi);
    SchwartzFunction src = refine_to_ideal_cells();
    long lmax = LONG_MIN;
    std::vector<std::tuple<CellBox, ExactScalar, long>> items;  // box, coeff, j
    for (const auto& [box, coeff] : src.cells()) {
        long j = !E_->ramified ? box.n1 : ((box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1);
        ExtElement c = element_of(E_, box.c1, box.c2);
        long vc = c.is_zero() ? j : std::min<long>(c.val_E(), j);
        lmax = std::max(lmax, c0 - vc);
        items.emplace_back(box, coeff, j);
    }
    SchwartzFunction r(E_, ctx_, cap_);
    if (items.empty()) return r;
    auto [B1, B2] = frak_ideal_box(E_, lmax);
    // global output grid: centers (g1 p^{Almin1}, g2 p^{Almin2})
    int Almin1 = INT_MAX, Almin2 = INT_MAX;
    for (const auto& [box, coeff, j] : items) {
        auto [A1, A2] = frak_ideal_box(E_, c0 - j);
        Almin1 = std::min(Almin1, A1);
        Almin2 = std::min(Almin2, A2);
    }
    long k = ctx_->k();
    Int pk = int_pow(p, static_cast<unsigned long>(k));
    long pkl = pk.get_si();
    Rat tw = psi.twist().exact_value();
    Rat DeltaR = E_->Delta.exact_value();
    std::map<std::pair<long, long>, ExactScalar> grid;
    for (const auto& [box, coeff, j] : items) {
        auto [A1, A2] = frak_ideal_box(E_, c0 - j);
        long reps1 = int_pow(p, static_cast<unsigned long>(B1 - A1)).get_si();
        long reps2 = int_pow(p, static_cast<unsigned long>(B2 - A2)).get_si();
        if (static_cast<size_t>(reps1) * reps2 > cap_ || grid.size() > cap_)
            throw LevelOverflow("Fourier output exceeds the cell budget");
        long stride1 = int_pow(p, static_cast<unsigned long>(A1 - Almin1)).get_si();
        long stride2 = int_pow(p, static_cast<unsigned long>(A2 - Almin2)).get_si();
        ExactScalar base = coeff * rat_pow(Rat(p), rr - box.n1 - box.n2);
        base = base * m0;
        // phase at the grid point a = (i1 p^{A1}, i2 p^{A2}):
        // psi_t(Tr(c a^sigma)) with Tr(c a^sigma) = 2 (c1 a1 - c2 a2 / Delta),
        // so the zeta_{p^k} exponent is linear in (i1, i2).
        Rat P1 = Rat(2) * tw * box.c1 * rat_pow(Rat(p), A1);
        Rat P2 = Rat(-2) * tw * box.c2 * rat_pow(Rat(p), A2) / DeltaR;
        long e1 = 0, e2 = 0;
        for (int which = 0; which < 2; ++which) {
            Rat P = which == 0 ? P1 : P2;
            P.canonicalize();
            long& e = which == 0 ? e1 : e2;
            if (P == 0) continue;
            Rat scaled = P * rat_pow(Rat(p), k);
            scaled.canonicalize();
            if (rat_valuation(scaled, Int(p)) < 0) throw LevelOverflow();
            Int num = mod_positive(scaled.get_num(), pk);
            Int den = mod_positive(scaled.get_den(), pk);
            Int ev = (den == 1) ? num : mod_positive(num * mod_inverse(den, pk), pk);
            e = ev.get_si();
        }
        for (long i1 = 0; i1 < reps1; ++i1) {
            unsigned long long b1e = static_cast<unsigned long long>(e1) * i1 % pkl;
            long g1 = i1 * stride1;
            for (long i2 = 0; i2 < reps2; ++i2) {
                long e = static_cast<long>((b1e + static_cast<unsigned long long>(e2) * i2) % pkl);
                auto [it, fresh] = grid.try_emplace({g1, i2 * stride2}, ctx_);
                ExactScalar& slot = it->second;
                if (fresh && grid.size() > cap_)
                    throw LevelOverflow("Fourier output exceeds the cell budget");
                for (const auto& [tk, tc] : base.terms())
                    slot.add_term(static_cast<long>(tk >> 40),
                                  Int(static_cast<long>(tk & ((uint64_t(1) << 40) - 1)) + e), tc);
            }
        }
    }
    Rat s1 = rat_pow(Rat(p), Almin1), s2 = rat_pow(Rat(p), Almin2);
    for (auto& [key, val] : grid) {
        if (val.is_zero()) continue;
        r.cells_.emplace(CellBox{Rat(key.first) * s1, Rat(key.second) * s2, B1, B2}, std::move(val));
    }
    if (r.cells_.size() > cap_) throw LevelOverflow("Fourier output exceeds the cell budget");
    return r;
}

SchwartzFunction SchwartzFunction::partial_fourier(const AdditiveCharacter& psi, int coord,
                                                   const ExactScalar& m1) const {
    long p = E_->F->p;
    long cond = psi.conductor();
    auto f = E_->F;
    long lmax = LONG_MIN;
    for (const auto& [box, coeff] : cells_) {
        Rat c = coord == 1 ? box.c1 : box.c2;
        int n = coord == 1 ? box.n1 : box.n2;
        long vc = (c == 0) ? n : std::min<long>(rat_valuation(c, Int(p)), n);
        lmax = std::max(lmax, cond - vc);
    }
    SchwartzFunction r(E_, ctx_, cap_);
    if (cells_.empty()) return r;
    for (const auto& [box, coeff] : cells_) {
        Rat c = coord == 1 ? box.c1 : box.c2;
        int n = coord == 1 ? box.n1 : box.n2;
        long A = cond - n;
        long reps = int_pow(p, static_cast<unsigned long>(lmax - A)).get_si();
        if (static_cast<size_t>(reps) > cap_)
            throw LevelOverflow("partial Fourier output exceeds the cell budget");
        ExactScalar base = coeff * rat_pow(Rat(p), -n);
        base = base * m1;
        for (long i = 0; i < reps; ++i) {
            Rat xi = Rat(i) * rat_pow(Rat(p), A);
            ExactScalar phase = ExactScalar::one(ctx_);
            if (c != 0) {
                PadicNumber arg = PadicNumber::from_rational(f, c * xi);
                phase = psi.eval(ctx_, arg);
            }
            CellBox nb = box;
            if (coord == 1) {
                nb.c1 = xi;
                nb.n1 = static_cast<int>(lmax);
            } else {
                nb.c2 = xi;
                nb.n2 = static_cast<int>(lmax);
            }
            r.add_cell(nb, base * phase);
        }
    }
    return r;
}

SchwartzFunction SchwartzFunction::isotypic_project(const CharacterEOne& theta) const {
    const auto& G = theta.group();
    SchwartzFunction acc = SchwartzFunction::zero(E_, ctx_, cap_);
    for (long i = 0; i < static_cast<long>(G->size()); ++i) {
        ExactScalar w = theta.value_index(i).inverse().eval(ctx_);
        acc = acc + dilate_ext(G->elements()[i]).scaled(w);
    }
    return acc.scaled(Rat(1, static_cast<long>(G->size())));
}

bool SchwartzFunction::is_isotypic(const CharacterEOne& theta) const {
    const auto& G = theta.group();
    long g = G->generator();
    SchwartzFunction lhs = dilate_ext(G->elements()[g]);
    SchwartzFunction rhs = scaled(theta.value_index(g).eval(ctx_));
    return lhs.equal_function(rhs);
}

SchwartzFunction SchwartzFunction::canonicalize() const {
    if (cells_.empty()) return *this;
    long p = E_->F->p;
    int N1 = INT_MAX, N2 = INT_MAX;
    for (const auto& [box, c] : cells_) {
        N1 = std::min(N1, box.n1);
        N2 = std::min(N2, box.n2);
    }
    std::map<CellBox, std::vector<std::pair<CellBox, ExactScalar>>> buckets;
    for (const auto& [box, c] : cells_) {
        CellBox key{canon_center(box.c1, N1, p), canon_center(box.c2, N2, p), N1, N2};
        buckets[key].emplace_back(box, c);
    }
    SchwartzFunction r(E_, ctx_, cap_);
    for (auto& [key, items] : buckets) {
        int L1 = N1, L2 = N2;
        for (const auto& [box, c] : items) {
            L1 = std::max(L1, box.n1);
            L2 = std::max(L2, box.n2);
        }
        for (const auto& [box, c] : items) {
            long reps1 = int_pow(p, static_cast<unsigned long>(L1 - box.n1)).get_si();
            long reps2 = int_pow(p, static_cast<unsigned long>(L2 - box.n2)).get_si();
            if (static_cast<size_t>(reps1) * reps2 > cap_)
                throw LevelOverflow("canonicalization exceeds the cell budget");
            for (long i1 = 0; i1 < reps1; ++i1)
                for (long i2 = 0; i2 < reps2; ++i2)
                    r.add_cell({box.c1 + Rat(i1) * rat_pow(Rat(p), box.n1),
                                box.c2 + Rat(i2) * rat_pow(Rat(p), box.n2), L1, L2},
                               c);
        }
    }
    return r;
}

bool SchwartzFunction::is_zero_function() const { return canonicalize().cells_.empty(); }

bool SchwartzFunction::equal_function(const SchwartzFunction& o) const {
    return (*this - o).is_zero_function();
}

std::pair<int, int> SchwartzFunction::window() const {
    if (cells_.empty()) return {INT_MIN, INT_MIN};
    long p = E_->F->p;
    int m = INT_MIN, n = INT_MIN;
    for (const auto& [box, c] : cells_) {
        // smallest mm with this box inside p^{-mm} O_E
        int mm = std::max(std::abs(box.n1), std::abs(box.n2)) + 2;
        while (mm > -64) {
            auto [a1, a2] = frak_ideal_box(E_, -static_cast<long>(E_->ram_index()) * (mm - 1));
            bool inside = box.n1 >= a1 && box.n2 >= a2 &&
                          ball_contains(Rat(0), a1, box.c1, box.n1, p) &&
                          ball_contains(Rat(0), a2, box.c2, box.n2, p);
            if (!inside) break;
            --mm;
        }
        m = std::max(m, mm);
        // smallest nn with cell lattice containing p^{nn} O_E
        int nn = -64;
        for (; nn < 64; ++nn) {
            auto [a1, a2] = frak_ideal_box(E_, static_cast<long>(E_->ram_index()) * nn);
            if (a1 >= box.n1 && a2 >= box.n2) break;
        }
        n = std::max(n, nn);
    }
    return {m, n};
}

std::vector<SchwartzFunction::LatticeCell> SchwartzFunction::lattice_cells() const {
    long e = E_->ram_index();
    SchwartzFunction canon = canonicalize();
    std::vector<LatticeCell> out;
    SchwartzFunction shaped(E_, ctx_, cap_);
    long p = E_->F->p;
    for (const auto& [box, coeff] : canon.cells()) {
        int n = E_->ramified ? std::max(box.n1, box.n2 - 1) : std::max(box.n1, box.n2);
        auto [a1, a2] = frak_ideal_box(E_, e * n);
        long reps1 = int_pow(p, static_cast<unsigned long>(a1 - box.n1)).get_si();
        long reps2 = int_pow(p, static_cast<unsigned long>(a2 - box.n2)).get_si();
        for (long i1 = 0; i1 < reps1; ++i1)
            for (long i2 = 0; i2 < reps2; ++i2)
                shaped.add_cell({box.c1 + Rat(i1) * rat_pow(Rat(p), box.n1),
                                 box.c2 + Rat(i2) * rat_pow(Rat(p), box.n2), a1, a2},
                                coeff);
    }
    for (const auto& [box, coeff] : shaped.cells()) {
        int n = E_->ramified ? std::max(box.n1, box.n2 - 1) : box.n1;
        out.push_back({element_of(E_, box.c1, box.c2), n, coeff});
    }
    return out;
}

ExactScalar selfdual_constant(const QuadPtr& E, const ContextPtr& ctx, const AdditiveCharacter& psi) {
    SchwartzFunction one_O = SchwartzFunction::indicator_lattice(E, ctx, ExtElement::zero(E), 0);
    ExactScalar unit = ExactScalar::one(ctx);
    SchwartzFunction once = one_O.twisted_fourier(psi, unit);
    SchwartzFunction twice = once.twisted_fourier(psi, unit);
    ExactScalar c = twice.evaluate(ExtElement::zero(E));
    if (c.is_zero() || !c.is_rational()) throw Error("self-dual calibration failed");
    if (!twice.equal_function(one_O.scaled(c))) throw Error("double transform is not a scalar on 1_O");
    Rat cr = c.rational_value();
    if (cr <= 0) throw Error("double transform scalar is not positive");
    ExactScalar root = ExactScalar::sqrt_positive(ctx, cr);
    return root.inverse();
}

}  // namespace thetalift
