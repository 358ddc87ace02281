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

#include "thetalift/weil.hpp"

#include <map>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {

FieldPtr field_of(const Mat2& m) { return m[0][0].field(); }
FieldPtr field_of4(const Mat4& m) { return m[0][0].field(); }

PadicNumber pz(FieldPtr f) { return PadicNumber::zero(std::move(f)); }
PadicNumber pn(FieldPtr f, long v) { return PadicNumber::from_long(std::move(f), v); }

}  // namespace

Mat2 mat2(FieldPtr f, const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    return {{{PadicNumber::from_rational(f, a), PadicNumber::from_rational(f, b)},
             {PadicNumber::from_rational(f, c), PadicNumber::from_rational(f, d)}}};
}

Mat2 mat2_identity(FieldPtr f) { return mat2(std::move(f), 1, 0, 0, 1); }

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return r;
}

PadicNumber mat2_det(const Mat2& x) { return x[0][0] * x[1][1] - x[0][1] * x[1][0]; }

Mat2 mat2_inverse(const Mat2& x) {
    PadicNumber det = mat2_det(x);
    if (det.is_zero()) throw DivisionByZero();
    Mat2 r = {{{x[1][1] / det, -(x[0][1] / det)}, {-(x[1][0] / det), x[0][0] / det}}};
    return r;
}

bool mat2_eq(const Mat2& x, const Mat2& y) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!(x[i][j] == y[i][j])) return false;
    return true;
}

bool is_sl2(const Mat2& x) { return mat2_det(x) == pn(field_of(x), 1); }

Mat2 mat2_transpose(const Mat2& m) {
    Mat2 r = m;
    std::swap(r[0][1], r[1][0]);
    return r;
}

Mat4 mat4_identity(FieldPtr f) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i][j] = (i == j) ? pn(f, 1) : pz(f);
    return r;
}

Mat4 mat4_mul(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            PadicNumber s = pz(field_of4(x));
            for (int k = 0; k < 4; ++k) s = s + x[i][k] * y[k][j];
            r[i][j] = s;
        }
    return r;
}

bool mat4_eq(const Mat4& x, const Mat4& y) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!(x[i][j] == y[i][j])) return false;
    return true;
}

bool is_sp4(const Mat4& g) {
    // J = [[0,I],[-I,0]]; row vectors act on the right: g J g^T = J
    auto f = field_of4(g);
    auto J = [&](int i, int j) -> int {
        if (i == 0 && j == 2) return 1;
        if (i == 1 && j == 3) return 1;
        if (i == 2 && j == 0) return -1;
        if (i == 3 && j == 1) return -1;
        return 0;
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            PadicNumber s = pz(f);
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    int jv = J(k, l);
                    if (jv == 0) continue;
                    PadicNumber term = g[i][k] * g[j][l];
                    s = jv == 1 ? s + term : s - term;
                }
            PadicNumber want = J(i, j) == 0 ? pz(f) : pn(f, J(i, j));
            if (!(s == want)) return false;
        }
    return true;
}

bool is_orthogonal_norm_form(const QuadPtr& E, const Mat2& h) {
    // Gram = diag(1, -Delta), row action: h Gram h^T = Gram
    auto f = E->F;
    PadicNumber D = E->Delta;
    PadicNumber g00 = h[0][0] * h[0][0] - D * (h[0][1] * h[0][1]);
    PadicNumber g01 = h[0][0] * h[1][0] - D * (h[0][1] * h[1][1]);
    PadicNumber g11 = h[1][0] * h[1][0] - D * (h[1][1] * h[1][1]);
    return g00 == pn(f, 1) && g01.is_zero() && g11 == -D;
}

namespace {

// direction of a nonzero cyclotomic integral value: I / |I|
ExactScalar direction(const ExactScalar& I) {
    ExactScalar n2 = I * I.conjugate();
    if (!n2.is_rational()) throw Error("Weil integral has non-rational modulus squared");
    Rat r = n2.rational_value();
    if (r <= 0) throw Error("Weil integral modulus vanished");
    ExactScalar mod = ExactScalar::sqrt_positive(I.context(), r);
    return I * mod.inverse();
}

struct GammaKey {
    long p;
    int cls;
    bool operator<(const GammaKey& o) const { return std::tie(p, cls) < std::tie(o.p, o.cls); }
};
std::map<GammaKey, ExactScalar> g_gamma_cache;

ExactScalar fit_context(const ExactScalar& x, const ContextPtr& target) {
    if (x.context()->k() == target->k()) return x.embed(target);
    if (x.context()->k() < target->k()) return x.embed(target);
    return x.compress(target);
}

}  // namespace

ExactScalar gamma_weil(const ContextPtr& ctx, const AdditiveCharacter& psi, const PadicNumber& a) {
    if (a.is_zero()) throw ZeroInput();
    auto f = psi.field();
    PadicNumber c = psi.twist() * a;  // effective coefficient against the base character
    GammaKey key{f->p, static_cast<int>(c.square_class())};
    auto it = g_gamma_cache.find(key);
    if (it != g_gamma_cache.end()) return fit_context(it->second, ctx);
    // compute with the canonical class representative in a private context
    PadicNumber crep = square_class_rep(f, c.square_class());
    long vc = crep.valuation();  // 0 or 1
    int kk = 8;
    auto cctx = ScalarContext::create(f->p, kk);
    AdditiveCharacter base = AdditiveCharacter::base(f);
    ExactScalar prev = ExactScalar::zero(cctx);
    bool have_prev = false;
    ExactScalar result = ExactScalar::zero(cctx);
    bool done = false;
    for (long n = 0; n <= 3 && !done; ++n) {
        long m = std::max<long>({n, n - vc, (1 - vc + 1) / 2, 0});
        // I_n = sum over x in p^{-n}O / p^m O of base(crep x^2) * p^{-m}
        long reps = int_pow(f->p, static_cast<unsigned long>(n + m)).get_si();
        ExactScalar I = ExactScalar::zero(cctx);
        for (long j = 0; j < reps; ++j) {
            Rat x = Rat(j) / rat_pow(Rat(f->p), n);
            PadicNumber arg = crep * PadicNumber::from_rational(f, x * x);
            I += base.eval(cctx, arg);
        }
        I = I * rat_pow(Rat(f->p), -m);
        if (I.is_zero()) continue;
        ExactScalar dir = direction(I);
        if (have_prev && dir == prev) {
            result = dir;
            done = true;
        }
        prev = dir;
        have_prev = true;
    }
    if (!done) throw NonStabilized();
    g_gamma_cache.emplace(key, result);
    return fit_context(result, ctx);
}

ExactScalar gamma_ratio(const ContextPtr& ctx, const AdditiveCharacter& psi, const PadicNumber& a) {
    ExactScalar ga = gamma_weil(ctx, psi, a);
    ExactScalar g1 = gamma_weil(ctx, psi, PadicNumber::from_long(psi.field(), 1));
    return ga * g1.conjugate();
}

PadicNumber rao_f2(const Mat2& g) {
    if (!g[1][0].is_zero()) return g[1][0];
    return g[1][1];
}

int normalized_cocycle(const Mat2& g1, const Mat2& g2) {
    PadicNumber f1 = rao_f2(g1), f2 = rao_f2(g2), f12 = rao_f2(mat2_mul(g1, g2));
    return hilbert_symbol(f1, f2) * hilbert_symbol(-(f1 * f2), f12);
}

SL2Word sl2_bruhat_word(const Mat2& g) {
    if (!is_sl2(g)) throw NotSymplectic();
    auto f = field_of(g);
    const PadicNumber &a = g[0][0], &b = g[0][1], &c = g[1][0], &d = g[1][1];
    SL2Word w;
    if (c.is_zero()) {
        // g = t(a) u(b/a)
        w.push_back({SL2Gen::Kind::Torus, a});
        PadicNumber x = b / a;
        if (!x.is_zero()) w.push_back({SL2Gen::Kind::Unip, x});
        return w;
    }
    // g = u(a/c) w t(-c) u(d/c)
    PadicNumber x = a / c, y = d / c;
    if (!x.is_zero()) w.push_back({SL2Gen::Kind::Unip, x});
    w.push_back({SL2Gen::Kind::Weyl, pz(f)});
    w.push_back({SL2Gen::Kind::Torus, -c});
    if (!y.is_zero()) w.push_back({SL2Gen::Kind::Unip, y});
    return w;
}

Mat2 sl2_gen_matrix(FieldPtr f, const SL2Gen& g) {
    switch (g.kind) {
        case SL2Gen::Kind::Torus: {
            if (g.a.is_zero()) throw ZeroInput();
            Mat2 m = mat2_identity(f);
            m[0][0] = g.a;
            m[1][1] = pn(f, 1) / g.a;
            return m;
        }
        case SL2Gen::Kind::Unip: {
            Mat2 m = mat2_identity(f);
            m[0][1] = g.a;
            return m;
        }
        case SL2Gen::Kind::Weyl:
            return mat2(std::move(f), 0, 1, -1, 0);
    }
    throw Error("bad generator");
}

Mat2 sl2_word_matrix(FieldPtr f, const SL2Word& w) {
    Mat2 m = mat2_identity(f);
    for (const auto& g : w) m = mat2_mul(m, sl2_gen_matrix(f, g));
    return m;
}

Mat4 tau_matrix(FieldPtr f, bool s1, bool s2) {
    Mat4 t = mat4_identity(f);
    if (s1) {
        t[0][0] = pz(f);
        t[0][2] = pn(f, 1);
        t[2][2] = pz(f);
        t[2][0] = pn(f, -1);
    }
    if (s2) {
        t[1][1] = pz(f);
        t[1][3] = pn(f, 1);
        t[3][3] = pz(f);
        t[3][1] = pn(f, -1);
    }
    return t;
}

namespace {

Mat2 block_of(const Mat4& g, int bi, int bj) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = g[2 * bi + i][2 * bj + j];
    return r;
}

Mat4 from_blocks(const Mat2& A, const Mat2& B, const Mat2& C, const Mat2& D) {
    Mat4 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            g[i][j] = A[i][j];
            g[i][j + 2] = B[i][j];
            g[i + 2][j] = C[i][j];
            g[i + 2][j + 2] = D[i][j];
        }
    return g;
}

Mat2 mat2_neg(const Mat2& m) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = -m[i][j];
    return r;
}

int mat2_rank(const Mat2& m) {
    if (!mat2_det(m).is_zero()) return 2;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!m[i][j].is_zero()) return 1;
    return 0;
}

// Siegel parabolic element [[A, B],[0, A^{-T}]]
Mat4 p_element(const Mat2& A, const Mat2& B) {
    auto f = field_of(A);
    Mat2 D = mat2_transpose(mat2_inverse(A));
    Mat2 Z = {{{pz(f), pz(f)}, {pz(f), pz(f)}}};
    return from_blocks(A, B, Z, D);
}

}  // namespace

Bruhat4 bruhat_decompose(const Mat4& g) {
    if (!is_sp4(g)) throw NotSymplectic();
    auto f = field_of4(g);
    Mat2 A = block_of(g, 0, 0), B = block_of(g, 0, 1), C = block_of(g, 1, 0), D = block_of(g, 1, 1);
    Bruhat4 out;
    int rank = mat2_rank(C);
    if (rank == 0) {
        out.p1 = g;
        out.p2 = mat4_identity(f);
        return out;
    }
    if (rank == 2) {
        out.s1 = out.s2 = true;
        Mat2 Cinv = mat2_inverse(C);
        Mat2 I = mat2_identity(f);
        out.p1 = p_element(I, mat2_mul(A, Cinv));
        Mat2 mC = mat2_neg(C), mD = mat2_neg(D);
        out.p2 = p_element(mC, mD);
        Mat4 probe = mat4_mul(out.p1, mat4_mul(tau_matrix(f, true, true), out.p2));
        if (!mat4_eq(probe, g)) throw Error("rank-2 Bruhat reassembly failed");
        return out;
    }
    // rank 1: g = p1 tau_1 p2. Work with h = p1^{-1} g; p1^{-1} = [[R, S],[0, R^{-T}]].
    out.s1 = true;
    // C = u v^T from a pivot entry
    int i0 = -1, j0 = -1;
    long best = LONG_MAX;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!C[i][j].is_zero() && C[i][j].valuation() < best) {
                best = C[i][j].valuation();
                i0 = i;
                j0 = j;
            }
    if (i0 < 0) throw Error("rank-1 block without pivot");
    PadicNumber piv = C[i0][j0];
    // u = column j0, v^T = row i0 / pivot
    std::array<PadicNumber, 2> u = {C[0][j0], C[1][j0]};
    std::array<PadicNumber, 2> v = {C[i0][0] / piv, C[i0][1] / piv};
    // left null vector n of C: n^T C = 0; for C = u v^T take n with n^T u = 0
    std::array<PadicNumber, 2> n = {-u[1], u[0]};
    // K = T(R^{-1}) with row2 = n^T, row1 = e_{i0}^T (keeps K invertible)
    Mat2 K;
    K[0][0] = i0 == 0 ? pn(f, 1) : pz(f);
    K[0][1] = i0 == 0 ? pz(f) : pn(f, 1);
    K[1][0] = n[0];
    K[1][1] = n[1];
    if (mat2_det(K).is_zero()) {
        K[0][0] = i0 == 0 ? pz(f) : pn(f, 1);
        K[0][1] = i0 == 0 ? pn(f, 1) : pz(f);
        if (mat2_det(K).is_zero()) throw Error("rank-1 normalization failed");
    }
    Mat2 R = mat2_transpose(mat2_inverse(K));
    // require row1(R A + S C) = 0: s^T C = -row1(R A), i.e. (s^T u) v^T = r^T
    Mat2 RA = mat2_mul(R, A);
    std::array<PadicNumber, 2> r = {-RA[0][0], -RA[0][1]};
    // r must be a multiple of v
    PadicNumber lambda = pz(f);
    if (!v[0].is_zero()) lambda = r[0] / v[0];
    else if (!v[1].is_zero()) lambda = r[1] / v[1];
    // consistency
    if (!((r[0] == lambda * v[0]) && (r[1] == lambda * v[1])))
        throw Error("rank-1 cell constraint violated");
    // s with s^T u = lambda
    std::array<PadicNumber, 2> s = {pz(f), pz(f)};
    if (!u[0].is_zero() && (u[1].is_zero() || u[0].valuation() <= u[1].valuation()))
        s[0] = lambda / u[0];
    else
        s[1] = lambda / u[1];
    // S row2 free; fix via the symplectic symmetry R S^T = S R^T
    Mat2 S;
    S[0][0] = s[0];
    S[0][1] = s[1];
    // unknown row2 = (x, y): (R S^T)_{01} = (R S^T)_{10}
    // (R S^T)_{10} = row2(R) . s ; (R S^T)_{01} = row1(R) . (x,y)
    PadicNumber rhs = R[1][0] * s[0] + R[1][1] * s[1];
    if (!R[0][0].is_zero()) {
        S[1][0] = rhs / R[0][0];
        S[1][1] = pz(f);
    } else {
        S[1][0] = pz(f);
        S[1][1] = rhs / R[0][1];
    }
    Mat4 p1inv = p_element(R, S);
    Mat4 h = mat4_mul(p1inv, g);
    // tau_1^{-1} h must be in P
    Mat4 tau1 = tau_matrix(f, true, false);
    Mat4 tau1inv = mat4_mul(tau1, mat4_mul(tau1, tau1));  // tau1^4 = 1, so tau1^{-1} = tau1^3
    Mat4 p2 = mat4_mul(tau1inv, h);
    if (mat2_rank(block_of(p2, 1, 0)) != 0) throw Error("rank-1 Bruhat factorization failed");
    // p1 = (p1inv)^{-1}: [[R, S],[0, R^{-T}]]^{-1} = [[R^{-1}, -R^{-1} S R^T],[0, R^T]]
    Mat2 Rinv = mat2_inverse(R);
    Mat2 p1B = mat2_neg(mat2_mul(Rinv, mat2_mul(S, mat2_transpose(R))));
    out.p1 = p_element(Rinv, p1B);
    out.p2 = p2;
    Mat4 probe = mat4_mul(out.p1, mat4_mul(tau1, out.p2));
    if (!mat4_eq(probe, g)) throw Error("rank-1 Bruhat reassembly failed");
    return out;
}

PadicNumber rao_f4(const Mat4& g) {
    Bruhat4 b = bruhat_decompose(g);
    PadicNumber d1 = mat2_det(block_of(b.p1, 1, 1));
    PadicNumber d2 = mat2_det(block_of(b.p2, 1, 1));
    return d1 * d2;
}

Mat4 iota(const QuadPtr& E, const Mat2& h, const Mat2& g) {
    auto f = E->F;
    if (!is_orthogonal_norm_form(E, h)) throw NotOrthogonal();
    if (!is_sl2(g)) throw NotSymplectic();
    const PadicNumber &t = h[0][0], &u = h[0][1], &r = h[1][0], &s = h[1][1];
    const PadicNumber &a = g[0][0], &b = g[0][1], &c = g[1][0], &d = g[1][1];
    PadicNumber D = E->Delta;
    Mat4 m;
    m[0] = {a * t, -(D * a * u), b * t, b * u};
    m[1] = {-(a * r / D), a * s, -(b * r / D), -(b * s / D)};
    m[2] = {c * t, -(D * c * u), d * t, d * u};
    m[3] = {c * r, -(D * c * s), d * r, d * s};
    if (!is_sp4(m)) throw Error("iota image is not symplectic");
    return m;
}

Mat2 so2_matrix(const ExtElement& mu) {
    auto E = mu.ext();
    Mat2 m;
    m[0][0] = mu.a1();
    m[0][1] = mu.a2();
    m[1][0] = mu.a2() * E->Delta;
    m[1][1] = mu.a1();
    return m;
}

Mat4 weil_gen_matrix(const QuadPtr& E, FieldPtr f, const WeilGen& g) {
    switch (g.kind) {
        case WeilGen::Kind::DiagBlock:
            return p_element(g.A, {{{pz(f), pz(f)}, {pz(f), pz(f)}}});
        case WeilGen::Kind::Unipotent:
            return p_element(mat2_identity(f), g.B);
        case WeilGen::Kind::Tau:
            return tau_matrix(f, g.s1, g.s2);
    }
    throw Error("bad generator");
}

SchwartzFunction weil_gen_apply(const WeilGen& g, const AdditiveCharacter& psi,
                                const SchwartzFunction& phi, int epsilon) {
    const auto& ctx = phi.context();
    auto f = psi.field();
    SchwartzFunction out = phi;
    switch (g.kind) {
        case WeilGen::Kind::DiagBlock: {
            PadicNumber det = mat2_det(g.A);
            PadicNumber half = PadicNumber::from_rational(f, Rat(1, 2));
            ExactScalar pref = gamma_weil(ctx, psi, half) *
                               gamma_weil(ctx, psi, det * half).conjugate();
            pref = pref * ExactScalar::sqrt_positive(
                              ctx, rat_pow(Rat(f->p), -det.valuation()));
            out = phi.right_mult(g.A).scaled(pref);
            break;
        }
        case WeilGen::Kind::Unipotent: {
            PadicNumber h = PadicNumber::from_rational(f, Rat(1, 2));
            out = phi.modulate_quadratic(psi, g.B[0][0] * h, g.B[0][1] * h, g.B[1][1] * h);
            break;
        }
        case WeilGen::Kind::Tau: {
            PadicNumber half = PadicNumber::from_rational(f, Rat(1, 2));
            ExactScalar ghalf_inv = gamma_weil(ctx, psi, half).conjugate();
            ExactScalar m_axis = ExactScalar::sqrt_positive(
                ctx, rat_pow(Rat(f->p), -psi.twist().valuation()));
            if (g.s1) out = out.partial_fourier(psi, 1, m_axis).scaled(ghalf_inv);
            if (g.s2) out = out.partial_fourier(psi, 2, m_axis).scaled(ghalf_inv);
            break;
        }
    }
    if (epsilon == -1) out = out.scaled(Rat(-1));
    return out;
}

SchwartzFunction weil_apply(const Mat4& g, const AdditiveCharacter& psi, const SchwartzFunction& phi,
                            int epsilon) {
    auto f = psi.field();
    Bruhat4 b = bruhat_decompose(g);
    SchwartzFunction cur = phi;
    auto apply_p = [&](const Mat4& p, SchwartzFunction x) {
        Mat2 A = block_of(p, 0, 0), B = block_of(p, 0, 1);
        Mat2 X = mat2_mul(mat2_inverse(A), B);
        if (!(X[0][1] == X[1][0])) throw Error("parabolic unipotent part is not symmetric");
        bool xzero = X[0][0].is_zero() && X[0][1].is_zero() && X[1][1].is_zero();
        if (!xzero) {
            WeilGen gu{WeilGen::Kind::Unipotent, {}, X, false, false};
            x = weil_gen_apply(gu, psi, x);
        }
        WeilGen gd{WeilGen::Kind::DiagBlock, A, {}, false, false};
        return weil_gen_apply(gd, psi, x);
    };
    // omega'(g) = omega'(p1) omega'(tau) omega'(p2): apply right factor first
    cur = apply_p(b.p2, cur);
    if (b.s1 || b.s2) {
        WeilGen gt{WeilGen::Kind::Tau, {}, {}, b.s1, b.s2};
        cur = weil_gen_apply(gt, psi, cur);
    }
    cur = apply_p(b.p1, cur);
    if (epsilon == -1) cur = cur.scaled(Rat(-1));
    return cur;
}

MetaplecticElement lift_E1(const QuadPtr& E, const ExtElement& mu) {
    Mat2 h = so2_matrix(mu);
    return {iota(E, h, mat2_identity(E->F)), 1};
}

int splitting_sign(const QuadPtr& E, const SL2Gen& g) {
    switch (g.kind) {
        case SL2Gen::Kind::Torus:
            return hilbert_symbol(g.a, E->Delta);
        case SL2Gen::Kind::Unip:
            return 1;
        case SL2Gen::Kind::Weyl:
            return hilbert_symbol(PadicNumber::from_long(E->F, -1), E->Delta);
    }
    throw Error("bad generator");
}

SchwartzFunction splitting_gen_apply(const QuadPtr& E, const SL2Gen& g, const AdditiveCharacter& psi,
                                     const SchwartzFunction& phi) {
    Mat4 m = iota(E, mat2_identity(E->F), sl2_gen_matrix(E->F, g));
    return weil_apply(m, psi, phi, splitting_sign(E, g));
}

SchwartzFunction splitting_word_apply(const QuadPtr& E, const SL2Word& w, const AdditiveCharacter& psi,
                                      const SchwartzFunction& phi) {
    SchwartzFunction cur = phi;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = splitting_gen_apply(E, *it, psi, cur);
    return cur;
}

namespace {

std::vector<SchwartzFunction> probe_functions(const QuadPtr& E, const ContextPtr& ctx) {
    std::vector<SchwartzFunction> out;
    auto f = E->F;
    out.push_back(SchwartzFunction::indicator_lattice(E, ctx, ExtElement::zero(E), 1));
    out.push_back(SchwartzFunction::indicator_lattice(E, ctx, ExtElement::one(E), 1));
    out.push_back(SchwartzFunction::indicator_lattice(E, ctx, ExtElement::delta(E), 2));
    ExtElement c(E, PadicNumber::from_rational(f, Rat(1, 3)), PadicNumber::from_long(f, 1));
    out.push_back(SchwartzFunction::indicator_lattice(E, ctx, c, 2));
    return out;
}

ExactScalar extract_scalar(const SchwartzFunction& num, const SchwartzFunction& den) {
    // num = lambda * den, exactly; anchor lambda on a point value and verify
    SchwartzFunction dc = den.canonicalize();
    if (dc.empty()) throw Error("scalar extraction against the zero function");
    const auto& [box, coeff] = *dc.cells().begin();
    ExtElement pt = SchwartzFunction::element_of(den.ext(), box.c1, box.c2);
    ExactScalar dval = den.evaluate(pt);
    if (dval.is_zero()) throw Error("anchor cell evaluated to zero");
    ExactScalar lambda = num.evaluate(pt) * dval.inverse();
    if (!num.equal_function(den.scaled(lambda))) throw Error("operators differ by more than a scalar");
    return lambda;
}

}  // namespace

ExactScalar cocycle4_operational(const Mat4& g1, const Mat4& g2, const AdditiveCharacter& psi,
                                 const QuadPtr& E, const ContextPtr& ctx) {
    Mat4 g12 = mat4_mul(g1, g2);
    for (const auto& probe : probe_functions(E, ctx)) {
        SchwartzFunction lhs = weil_apply(g1, psi, weil_apply(g2, psi, probe));
        SchwartzFunction rhs = weil_apply(g12, psi, probe);
        if (rhs.is_zero_function()) continue;
        // omega'(g1 g2) = c * omega'(g1) omega'(g2)
        return extract_scalar(rhs, lhs);
    }
    throw Error("no probe separated the cocycle");
}

MetaplecticElement mp_mul(const MetaplecticElement& x, const MetaplecticElement& y,
                          const AdditiveCharacter& psi, const QuadPtr& E, const ContextPtr& ctx) {
    ExactScalar c = cocycle4_operational(x.g, y.g, psi, E, ctx);
    ExactScalar one = ExactScalar::one(ctx);
    int sign;
    if (c == one) sign = 1;
    else if (c == -one) sign = -1;
    else throw Error("operational cocycle is not a sign");
    return {mat4_mul(x.g, y.g), x.eps * y.eps * sign};
}

MetaplecticElement splitting_s(const QuadPtr& E, const SL2Word& w, const AdditiveCharacter& psi,
                               const ContextPtr& ctx) {
    MetaplecticElement acc{mat4_identity(E->F), 1};
    for (const auto& g : w) {
        MetaplecticElement step{iota(E, mat2_identity(E->F), sl2_gen_matrix(E->F, g)),
                                splitting_sign(E, g)};
        acc = mp_mul(acc, step, psi, E, ctx);
    }
    return acc;
}

}  // namespace thetalift
