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

#include "thetalift/theta.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {

// isotypic projection of f with the E^1 quotient taken deep enough for f's cells
SchwartzFunction project_isotypic_deep(const QuadPtr& E, const CharacterEOne& theta,
                                       const SchwartzFunction& f) {
    long e = E->ram_index();
    long smax = theta.level();
    SchwartzFunction src = f.refine_to_ideal_cells();
    for (const auto& [box, coeff] : src.cells()) {
        long j = !E->ramified ? box.n1 : ((box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1);
        ExtElement c = SchwartzFunction::element_of(E, box.c1, box.c2);
        long v = c.is_zero() ? j : std::min<long>(c.val_E(), j);
        smax = std::max(smax, j - v);
    }
    auto G = E1Group::create(E, static_cast<int>(smax));
    SchwartzFunction acc = SchwartzFunction::zero(E, f.context(), f.cell_cap());
    for (long i = 0; i < static_cast<long>(G->size()); ++i) {
        const ExtElement& mu = G->elements()[i];
        ExactScalar w = theta.value(mu).inverse().eval(f.context());
        acc = acc + f.dilate_ext(mu).scaled(w);
    }
    return acc.scaled(Rat(1, static_cast<long>(G->size())));
    (void)e;
}

bool is_isotypic_deep(const QuadPtr& E, const CharacterEOne& theta, const SchwartzFunction& f) {
    if (f.empty()) return true;
    long smax = theta.level();
    SchwartzFunction src = f.refine_to_ideal_cells();
    for (const auto& [box, coeff] : src.cells()) {
        long j = !E->ramified ? box.n1 : ((box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1);
        ExtElement c = SchwartzFunction::element_of(E, box.c1, box.c2);
        long v = c.is_zero() ? j : std::min<long>(c.val_E(), j);
        smax = std::max(smax, j - v);
    }
    auto G = E1Group::create(E, static_cast<int>(smax));
    const ExtElement& g = G->elements()[G->generator()];
    ExactScalar tv = theta.value(g).eval(f.context());
    return f.dilate_ext(g).equal_function(f.scaled(tv));
}

}  // namespace

ThetaLiftRep ThetaLiftRep::create(AdmissiblePair pair, AdditiveCharacter psi, ContextPtr ctx,
                                  size_t cell_cap) {
    auto verdict = is_admissible(pair);
    if (!verdict.admissible) throw InadmissiblePair(verdict.reason);
    auto restricted = restrict_to_E1(pair.Theta);
    if (!restricted.regular) throw NotRegular();

    ThetaLiftRep rep;
    rep.pair_ = std::move(pair);
    rep.theta_ = restricted.theta;
    rep.psi_ = std::move(psi);
    rep.ctx_ = std::move(ctx);
    rep.cap_ = cell_cap;
    rep.eta_ = rep.pair_.E->eta();
    rep.selfdual_ = selfdual_constant(rep.pair_.E, rep.ctx_, rep.psi_);

    const auto& E = rep.pair_.E;
    auto f = E->F;
    int minus_one = hilbert_symbol(PadicNumber::from_long(f, -1), E->Delta);
    std::vector<ExactScalar> candidates;
    if (minus_one == 1) {
        candidates.push_back(ExactScalar::one(rep.ctx_));
        candidates.push_back(-ExactScalar::one(rep.ctx_));
    } else {
        candidates.push_back(ExactScalar::zeta8(rep.ctx_, 2));   // i
        candidates.push_back(-ExactScalar::zeta8(rep.ctx_, 2));  // -i
    }
    SchwartzFunction probe = rep.isotypic_probe();
    // relation with an odd Weyl count: w * l(1) = [[1,1],[-1,0]]
    Mat2 w = mat2(f, 0, 1, -1, 0);
    Mat2 l1 = mat2(f, 1, 0, 1, 1);
    Mat2 wl1 = mat2_mul(w, l1);
    int passing = 0;
    ExactScalar winner;
    for (const auto& cand : candidates) {
        rep.gamma_delta_ = cand;
        SchwartzFunction lhs = rep.act(w, rep.act(l1, probe));
        SchwartzFunction rhs = rep.act(wl1, probe);
        bool homomorphic = lhs.equal_function(rhs);
        // pi(w)^2 = pi(-I)
        SchwartzFunction sq = rep.act(w, rep.act(w, probe));
        SchwartzFunction minus = rep.act(mat2(f, -1, 0, 0, -1), probe);
        bool involutive = sq.equal_function(minus);
        if (homomorphic && involutive) {
            ++passing;
            if (passing == 1) winner = cand;
        }
    }
    if (passing == 0)
        throw Error("gamma(Delta, psi) resolution failed: no candidate satisfies the relations");
    if (passing > 1) throw Error("gamma(Delta, psi) resolution ambiguous at this probe");
    rep.gamma_delta_ = winner;
    // cross-check against product-of-Weil-indices style candidates (recorded only)
    {
        PadicNumber half = PadicNumber::from_rational(f, Rat(1, 2));
        PadicNumber mdelta = -E->Delta;
        ExactScalar c1 = gamma_weil(rep.ctx_, rep.psi_, half) *
                         gamma_weil(rep.ctx_, rep.psi_, mdelta * half);
        ExactScalar c2 = gamma_weil(rep.ctx_, rep.psi_, PadicNumber::from_long(f, 1)) *
                         gamma_weil(rep.ctx_, rep.psi_, mdelta);
        rep.gamma_product_match_ = (rep.gamma_delta_ == c1) || (rep.gamma_delta_ == c2) ||
                                   (rep.gamma_delta_ == c1.conjugate()) ||
                                   (rep.gamma_delta_ == c2.conjugate());
    }
    return rep;
}

SchwartzFunction ThetaLiftRep::isotypic_probe(int level) const {
    int L = level > 0 ? level : theta_.level();
    SchwartzFunction cell =
        SchwartzFunction::indicator_frak(pair_.E, ctx_, ExtElement::one(pair_.E), L, cap_);
    SchwartzFunction proj = project_isotypic_deep(pair_.E, theta_, cell);
    if (proj.is_zero_function()) throw Error("isotypic probe vanished");
    return proj;
}

SchwartzFunction ThetaLiftRep::act_gen(const SL2Gen& g, const SchwartzFunction& phi) const {
    auto f = pair_.E->F;
    switch (g.kind) {
        case SL2Gen::Kind::Torus: {
            int sign = hilbert_symbol(g.a, pair_.E->Delta);
            Rat mag = rat_pow(Rat(f->p), -g.a.valuation());
            ExactScalar c = ExactScalar::from_rational(ctx_, Rat(sign) * mag);
            return phi.dilate_base(g.a).scaled(c);
        }
        case SL2Gen::Kind::Unip:
            return phi.modulate_norm(psi_, g.a);
        case SL2Gen::Kind::Weyl:
            return phi.twisted_fourier(psi_, selfdual_).scaled(gamma_delta_);
    }
    throw Error("bad generator");
}

SchwartzFunction ThetaLiftRep::act(const Mat2& g, const SchwartzFunction& phi, bool validate) const {
    if (validate && !is_isotypic_deep(pair_.E, theta_, phi)) throw NotIsotypic();
    SL2Word w = sl2_bruhat_word(g);
    SchwartzFunction cur = phi;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = act_gen(*it, cur);
    return cur;
}

SchwartzFunction ThetaLiftRep::act_center(const PadicNumber& x, const SchwartzFunction& phi) const {
    int kappa = hilbert_symbol(x, pair_.E->Delta);
    ExactScalar v = pair_.Theta.value_at_base(x).eval(ctx_);
    if (kappa == -1) v = -v;
    return phi.scaled(v);
}

SchwartzFunction ThetaLiftRep::act_norm_diag(const PadicNumber& gamma, const SchwartzFunction& phi,
                                             bool check_zeta_independence) const {
    ExtElement zeta = solve_norm(pair_.E, gamma);
    auto apply_with = [&](const ExtElement& z) {
        ExactScalar c = pair_.Theta.value(z).eval(ctx_);
        c = c * ExactScalar::sqrt_positive(ctx_, rat_pow(Rat(pair_.E->F->p), -gamma.valuation()));
        return phi.dilate_ext(z.sigma()).scaled(c);
    };
    SchwartzFunction out = apply_with(zeta);
    if (check_zeta_independence) {
        auto G = theta_.group();
        const ExtElement& mu = G->elements()[G->generator()];
        SchwartzFunction other = apply_with(zeta * mu);
        if (!out.equal_function(other))
            throw ValidationFailed("act_norm_diag depends on the norm preimage");
    }
    return out;
}

SchwartzFunction ThetaLiftRep::act_gl2N(const Mat2& g, const SchwartzFunction& phi) const {
    PadicNumber det = mat2_det(g);
    if (det.is_zero()) throw ZeroInput();
    if (hilbert_symbol(det, pair_.E->Delta) != 1) throw NotInGL2N();
    auto f = pair_.E->F;
    Mat2 scale = mat2_identity(f);
    scale[0][0] = PadicNumber::from_long(f, 1) / det;
    Mat2 gp = mat2_mul(scale, g);  // diag(1/det, 1) g in SL2
    SchwartzFunction mid = act(gp, phi);
    return act_norm_diag(det, mid);
}

SchwartzFunction ThetaLiftRep::act_conjugate(const PadicNumber& t, const Mat2& g,
                                             const SchwartzFunction& phi) const {
    if (t.is_zero()) throw ZeroInput();
    Mat2 conj = g;
    conj[0][1] = g[0][1] * t;
    conj[1][0] = g[1][0] / t;
    return act(conj, phi);
}

GL2Class classify_gl2(const QuadPtr& E, const Mat2& g) {
    PadicNumber det = mat2_det(g);
    if (det.is_zero()) throw ZeroInput();
    if (det.square_class() == SquareClass::One) return GL2Class::Central;
    return hilbert_symbol(det, E->Delta) == 1 ? GL2Class::InGL2N : GL2Class::Outside;
}

InducedVector induced_act(const ThetaLiftRep& rep, const Mat2& g, const InducedVector& v) {
    auto f = rep.ext()->F;
    PadicNumber det = mat2_det(g);
    if (det.is_zero()) throw ZeroInput();
    PadicNumber eta = rep.eta();
    Mat2 h = mat2_identity(f);
    h[0][0] = eta;
    if (hilbert_symbol(det, rep.ext()->Delta) == 1) {
        Mat2 hgh = mat2_mul(h, mat2_mul(g, mat2_inverse(h)));
        return {rep.act_gl2N(g, v.phi1), rep.act_gl2N(hgh, v.phi2)};
    }
    Mat2 gh_inv = mat2_mul(g, mat2_inverse(h));
    Mat2 hg = mat2_mul(h, g);
    return {rep.act_gl2N(gh_inv, v.phi2), rep.act_gl2N(hg, v.phi1)};
}

// ---------------------------------------------------------------------------
// Orbit machinery for truncated intertwiner systems
// ---------------------------------------------------------------------------

namespace {

struct OrbitRegistry {
    const ThetaLiftRep* rep;
    std::map<OrbitKey, ExtElement> reps;
    std::map<OrbitKey, PadicNumber> norms;
    std::map<OrbitKey, SchwartzFunction> funcs;

    explicit OrbitRegistry(const ThetaLiftRep& r) : rep(&r) {}

    const QuadPtr& E() const { return rep->ext(); }

    OrbitKey key_of(const ExtElement& center, long level_j) const {
        OrbitKey k;
        k.level = level_j;
        if (center.is_zero() || center.val_E() >= level_j) {
            k.v = level_j;
            k.norm_res = 0;
            return k;
        }
        long v = center.val_E();
        k.v = v;
        long s = level_j - v;
        long e = E()->ram_index();
        int prec = static_cast<int>((s + e - 1) / e);
        PadicNumber N = center.norm();
        Int res = N.unit_mod(prec);
        k.norm_res = res.get_si();
        return k;
    }

    // register an orbit with a representative; returns the canonical key
    OrbitKey register_orbit(const ExtElement& center, long level_j) {
        OrbitKey k = key_of(center, level_j);
        if (!reps.count(k)) {
            reps.emplace(k, center);
            norms.emplace(k, center.is_zero() ? PadicNumber::zero(E()->F) : center.norm());
        }
        return k;
    }

    bool supported(const OrbitKey& k) const {
        // theta-isotypic support: stabilizer depth at least the theta level
        if (k.v >= k.level) return false;  // zero orbit
        return k.level - k.v >= rep->theta().level();
    }

    // normalized orbit function: value 1 at the representative
    const SchwartzFunction& function_of(const OrbitKey& k) {
        auto it = funcs.find(k);
        if (it != funcs.end()) return it->second;
        const ExtElement& c = reps.at(k);
        SchwartzFunction cell = SchwartzFunction::indicator_frak(E(), rep->context(), c, k.level,
                                                                 rep->cell_cap());
        SchwartzFunction proj = project_isotypic_deep(E(), rep->theta(), cell);
        ExactScalar val = proj.evaluate(c);
        if (val.is_zero()) throw Error("orbit function vanished at its representative");
        proj = proj.scaled(val.inverse());
        return funcs.emplace(k, std::move(proj)).first->second;
    }

    // expansion of an isotypic function over orbit functions
    std::map<OrbitKey, ExactScalar> expand(const SchwartzFunction& F) {
        std::map<OrbitKey, ExactScalar> out;
        if (F.empty()) return out;
        SchwartzFunction src = F.canonicalize().refine_to_ideal_cells();
        const auto& Eq = E();
        for (const auto& [box, coeff] : src.cells()) {
            long j = !Eq->ramified ? box.n1
                                   : ((box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1);
            ExtElement c = SchwartzFunction::element_of(Eq, box.c1, box.c2);
            OrbitKey k = key_of(c, j);
            if (!supported(k)) throw NotIsotypic();
            auto rit = reps.find(k);
            if (rit == reps.end()) {
                reps.emplace(k, c);
                norms.emplace(k, c.norm());
                out.emplace(k, coeff);
                continue;
            }
            // translate the coefficient to the registered representative:
            // F(mu alpha) = theta(mu) F(alpha) with mu = rep / c
            ExtElement mu = rit->second / c;
            ExactScalar at_rep = rep->theta().value(mu).eval(rep->context()) * coeff;
            auto oit = out.find(k);
            if (oit == out.end()) out.emplace(k, at_rep);
            else if (!(oit->second == at_rep))
                throw NotIsotypic();
        }
        for (auto it = out.begin(); it != out.end();) {
            if (it->second.is_zero()) it = out.erase(it);
            else ++it;
        }
        return out;
    }
};

// the zeta_{p^k} exponent of psi(x), or LONG_MIN on level overflow
long psi_exponent(const ContextPtr& ctx, const AdditiveCharacter& psi, const PadicNumber& x) {
    if (x.is_zero()) return 0;
    PadicNumber tx = psi.twist() * x;
    if (tx.is_zero()) return 0;
    long v = tx.valuation();
    if (v >= 0) return 0;
    long m = -v;
    if (m > ctx->k()) throw LevelOverflow();
    Int e = tx.unit_mod(static_cast<int>(m));
    Int scale = int_pow(ctx->p(), static_cast<unsigned long>(ctx->k() - m));
    return mod_positive(e * scale, Int(ctx->pk())).get_si();
}

}  // namespace

IntertwinerCertificate truncated_intertwiner_solve(const ThetaLiftRep& repA, const ThetaLiftRep& repB,
                                                   int m, int n) {
    IntertwinerCertificate cert;
    cert.m = m;
    cert.n = n;
    const auto& E = repA.ext();
    auto f = E->F;
    long p = f->p;
    long e = E->ram_index();
    long ell = repA.theta().level();
    const auto& ctx = repA.context();

    OrbitRegistry regA(repA), regB(repB);

    long u0 = f->nonresidue();
    std::vector<std::pair<std::string, Mat2>> gens;
    gens.emplace_back("t(u0)", mat2(f, Rat(u0), 0, 0, Rat(1, u0)));
    gens.emplace_back("t(p)", mat2(f, Rat(p), 0, 0, Rat(1, p)));
    gens.emplace_back("t(1/p)", mat2(f, Rat(1, p), 0, 0, Rat(p)));
    gens.emplace_back("u(1)", mat2(f, 1, 1, 0, 1));
    gens.emplace_back("u(u0)", mat2(f, 1, Rat(u0), 0, 1));
    gens.emplace_back("w", mat2(f, 0, 1, -1, 0));
    for (const auto& [name, g] : gens) cert.generators.push_back(name);

    // enumerate and register the orbit keys of a window: support p^{-mm} O_E,
    // cells at lattice exponent L (uniformizer powers)
    auto enumerate_orbits = [&](OrbitRegistry& reg, int mm, long L, std::vector<OrbitKey>& out) {
        for (long j = -static_cast<long>(e) * mm; j <= L - ell; ++j) {
            long s = L - j;
            int prec = static_cast<int>((s + e - 1) / e);
            long mod = int_pow(p, static_cast<unsigned long>(prec)).get_si();
            for (long x = 1; x < mod; ++x) {
                if (x % p == 0) continue;
                PadicNumber xu = PadicNumber::from_long(f, x);
                ExtElement y = ExtElement::one(E);
                try {
                    y = solve_norm(E, xu);
                } catch (const NonNorm&) {
                    continue;
                }
                ExtElement center = ExtElement::uniformizer(E).pow_int(j) * y;
                OrbitKey k = reg.register_orbit(center, L);
                if (!reg.supported(k)) continue;
                if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
            }
        }
    };

    std::vector<OrbitKey> inputsA, inputsB;
    enumerate_orbits(regA, m, static_cast<long>(e) * n, inputsA);
    enumerate_orbits(regB, m, static_cast<long>(e) * n, inputsB);
    cert.domain_orbits = static_cast<long>(inputsA.size());
    cert.codomain_orbits = static_cast<long>(inputsB.size());

    // phase spectra for the unipotent matching, with the diagonality guard:
    // psi_X(b N(.)) acts as the scalar psi_X(b N(rep)) on an orbit function iff
    // v + L and 2L clear the conductor of psi_X.
    std::vector<PadicNumber> bset = {PadicNumber::from_long(f, 1), PadicNumber::from_long(f, u0)};
    long dexp = e - 1;  // different exponent
    auto diag_ok = [&](const ThetaLiftRep& rep, const OrbitKey& k) {
        // psi_X(b N(.)) is scalar on a (c, p_E^L)-cell for unit b iff both the
        // trace cross term and the pure N(h) term clear the conductor
        long cond = -(rep.psi().twist().valuation());
        long tr_lb = (k.v + k.level + dexp + e - 1) / e;  // ceil
        if (k.v + k.level + dexp < 0) tr_lb = -((-(k.v + k.level + dexp)) / e);
        long nm_lb = 2 * k.level / e;
        return std::min(tr_lb, nm_lb) >= cond;
    };
    std::map<std::pair<bool, OrbitKey>, std::vector<long>> spec_cache;
    auto spectrum = [&](const ThetaLiftRep& rep, OrbitRegistry& reg, const OrbitKey& k)
        -> const std::vector<long>& {
        bool sideB = &reg == &regB;
        auto ckey = std::make_pair(sideB, k);
        auto it = spec_cache.find(ckey);
        if (it != spec_cache.end()) return it->second;
        std::vector<long> out;
        const PadicNumber& N = reg.norms.at(k);
        for (const auto& b : bset) out.push_back(psi_exponent(ctx, rep.psi(), b * N));
        return spec_cache.emplace(ckey, std::move(out)).first->second;
    };
    // pair (z, y) is forced to zero when both sides are diagonal for the unit
    // b-set and the spectra differ
    auto killed = [&](const OrbitKey& z, const OrbitKey& y) {
        if (!diag_ok(repA, y) || !diag_ok(repB, z)) return false;
        return spectrum(repA, regA, y) != spectrum(repB, regB, z);
    };

    std::map<std::pair<OrbitKey, OrbitKey>, long> unknown;  // (z, y) -> column
    auto column_of = [&](const OrbitKey& z, const OrbitKey& y) -> long {
        auto key = std::make_pair(z, y);
        auto it = unknown.find(key);
        if (it != unknown.end()) return it->second;
        if (killed(z, y)) return -1;
        long idx = static_cast<long>(unknown.size());
        unknown.emplace(key, idx);
        return idx;
    };

    // sparse incremental elimination
    using Row = std::map<long, ExactScalar>;
    std::map<long, Row> pivots;
    long rank = 0;
    auto add_row = [&](Row row) {
        while (!row.empty()) {
            long lead = row.begin()->first;
            auto pit = pivots.find(lead);
            if (pit == pivots.end()) {
                ExactScalar inv = row.begin()->second.inverse();
                Row norm;
                for (auto& [c, v] : row) {
                    ExactScalar nv = v * inv;
                    if (!nv.is_zero()) norm.emplace(c, nv);
                }
                pivots.emplace(lead, std::move(norm));
                ++rank;
                return;
            }
            ExactScalar factor = row.begin()->second;
            for (const auto& [c, v] : pit->second) {
                auto it2 = row.find(c);
                ExactScalar delta = v * factor;
                if (it2 == row.end()) {
                    row.emplace(c, -delta);
                } else {
                    it2->second -= delta;
                    if (it2->second.is_zero()) row.erase(it2);
                }
            }
        }
    };

    // phase buckets over every registered codomain key (grown incrementally)
    std::map<std::vector<long>, std::vector<OrbitKey>> bucketB;
    std::set<OrbitKey> bucketedB;
    std::vector<OrbitKey> guardfailB;
    auto refresh_buckets = [&]() {
        for (const auto& [k, repc] : regB.reps) {
            if (bucketedB.count(k)) continue;
            bucketedB.insert(k);
            if (!regB.supported(k)) continue;
            if (diag_ok(repB, k)) bucketB[spectrum(repB, regB, k)].push_back(k);
            else guardfailB.push_back(k);
        }
    };
    refresh_buckets();
    std::map<std::vector<long>, std::vector<OrbitKey>> bucket_inputsB;
    std::vector<OrbitKey> guardfail_inputsB;
    for (const auto& z : inputsB) {
        if (diag_ok(repB, z)) bucket_inputsB[spectrum(repB, regB, z)].push_back(z);
        else guardfail_inputsB.push_back(z);
    }
    auto partners_of = [&](const OrbitKey& y) {
        std::vector<OrbitKey> out;
        if (!diag_ok(repA, y)) {
            for (const auto& k : bucketedB)
                if (regB.supported(k)) out.push_back(k);
            return out;
        }
        auto it = bucketB.find(spectrum(repA, regA, y));
        if (it != bucketB.end()) out = it->second;
        out.insert(out.end(), guardfailB.begin(), guardfailB.end());
        return out;
    };

    // cached codomain-side images of surviving partners
    std::map<std::pair<std::string, OrbitKey>, std::map<OrbitKey, ExactScalar>> bimg_cache;
    auto bimg = [&](const std::string& name, const Mat2& g, const OrbitKey& z)
        -> const std::map<OrbitKey, ExactScalar>& {
        auto key = std::make_pair(name, z);
        auto it = bimg_cache.find(key);
        if (it != bimg_cache.end()) return it->second;
        SchwartzFunction img = repB.act(g, regB.function_of(z));
        return bimg_cache.emplace(key, regB.expand(img)).first->second;
    };

    long eq_count = 0;
    for (const auto& [name, g] : gens) {
        bool is_weyl = name == "w";
        for (const auto& x : inputsA) {
            std::vector<OrbitKey> zs;
            {
                std::vector<OrbitKey> cand;
                if (!diag_ok(repA, x)) cand = inputsB;
                else {
                    auto it = bucket_inputsB.find(spectrum(repA, regA, x));
                    if (it != bucket_inputsB.end()) cand = it->second;
                    cand.insert(cand.end(), guardfail_inputsB.begin(), guardfail_inputsB.end());
                }
                for (const auto& z : cand)
                    if (!killed(z, x)) zs.push_back(z);
            }
            // domain-side image data: either a materialized expansion (cheap
            // generators) or lazy point evaluation against an enumerated image
            // window (the Weyl element on deep orbits)
            std::map<OrbitKey, ExactScalar> aexp;
            std::vector<OrbitKey> ykeys;
            bool lazy = false;
            long wlevel = 0;
            if (is_weyl) {
                long c0 = psiE_conductor(E, repA.psi());
                long vx = regA.reps.at(x).val_E();
                wlevel = c0 - vx;
                long steps = std::max<long>(0, (wlevel - (c0 - x.level)));
                long log_cells = steps * (E->ramified ? 1 : 2);
                lazy = log_cells > 8;
            }
            if (!lazy) {
                SchwartzFunction imgA = repA.act(g, regA.function_of(x));
                aexp = regA.expand(imgA);
                for (const auto& [y, c] : aexp) ykeys.push_back(y);
            } else {
                // enumerate the image window arithmetically: support p_E^{c0-L},
                // cells at level wlevel; coefficients are point evaluations of
                // the transform, never materialized
                long c0 = psiE_conductor(E, repA.psi());
                long suppexp = -(c0 - x.level);  // support in p_E^{-suppexp}
                int mm = static_cast<int>((suppexp + e - 1) / e);
                enumerate_orbits(regA, mm, wlevel, ykeys);
            }
            const SchwartzFunction& xi_x = regA.function_of(x);
            SchwartzFunction xi_x_ideal = lazy ? xi_x.refine_to_ideal_cells()
                                               : SchwartzFunction::zero(E, ctx, 1);
            std::map<OrbitKey, Row> rows;
            auto lhs_coeff = [&](const OrbitKey& y) -> ExactScalar {
                if (!lazy) {
                    auto it = aexp.find(y);
                    return it == aexp.end() ? ExactScalar::zero(ctx) : it->second;
                }
                if (y.level != wlevel) return ExactScalar::zero(ctx);
                // (pi_A(w) xi_x)(pt) = gamma * m0 * sum_cells coeff vol psi_E(c pt^sigma)
                const ExtElement& pt = regA.reps.at(y);
                long c0 = psiE_conductor(E, repA.psi());
                ExactScalar acc = ExactScalar::zero(ctx);
                int rr = E->ramified ? 1 : 0;
                const SchwartzFunction& src = xi_x_ideal;
                for (const auto& [box, coeff] : src.cells()) {
                    long j = !E->ramified ? box.n1
                                          : ((box.n2 == box.n1 + 1) ? 2L * box.n1 : 2L * box.n1 - 1);
                    if (pt.val_E() < c0 - j) continue;  // outside the dual lattice
                    ExtElement c = SchwartzFunction::element_of(E, box.c1, box.c2);
                    ExactScalar phase =
                        c.is_zero() ? ExactScalar::one(ctx)
                                    : repA.psi().eval(ctx, (c * pt.sigma()).trace());
                    acc += coeff * phase * rat_pow(Rat(p), rr - box.n1 - box.n2);
                }
                return acc * repA.selfdual_vol() * repA.gamma_delta();
            };
            // materialize codomain images first so their keys are bucketed
            for (const auto& z : zs) bimg(name, g, z);
            refresh_buckets();
            for (const auto& y : ykeys) {
                std::vector<OrbitKey> partners = partners_of(y);
                if (partners.empty()) continue;
                ExactScalar ay = lhs_coeff(y);
                if (ay.is_zero()) continue;
                for (const auto& z : partners) {
                    long col = column_of(z, y);
                    if (col < 0) continue;
                    auto& row = rows[z];
                    auto rit = row.find(col);
                    if (rit == row.end()) row.emplace(col, ay);
                    else rit->second += ay;
                }
            }
            for (const auto& z : zs) {
                long colzx = column_of(z, x);
                if (colzx < 0) continue;
                for (const auto& [w2, bw] : bimg(name, g, z)) {
                    auto& row = rows[w2];
                    auto rit = row.find(colzx);
                    if (rit == row.end()) row.emplace(colzx, -bw);
                    else {
                        rit->second -= bw;
                        if (rit->second.is_zero()) row.erase(rit);
                    }
                }
            }
            for (auto& [w2, row] : rows) {
                if (row.empty()) continue;
                ++eq_count;
                add_row(std::move(row));
            }
        }
    }
    cert.survivors = static_cast<long>(unknown.size());
    cert.equations = eq_count;
    cert.solution_dim = static_cast<long>(unknown.size()) - rank;
    return cert;
}

// ---------------------------------------------------------------------------
// psi-independence witnesses
// ---------------------------------------------------------------------------

namespace {

std::vector<InducedVector> spanning_vectors(const ThetaLiftRep& rep, int count) {
    std::vector<InducedVector> out;
    const auto& E = rep.ext();
    auto f = E->F;
    int L = rep.theta().level();
    std::vector<ExtElement> centers = {
        ExtElement::one(E),
        ExtElement::one(E) + ExtElement::delta(E),
        ExtElement::delta(E),
        ExtElement::one(E).scaled(PadicNumber::from_long(f, 2)),
        ExtElement(E, PadicNumber::from_long(f, 1), PadicNumber::from_long(f, 1)),
        ExtElement(E, PadicNumber::from_rational(f, Rat(1, f->p)), PadicNumber::zero(f)),
    };
    SchwartzFunction zero = SchwartzFunction::zero(E, rep.context(), rep.cell_cap());
    int made = 0;
    for (int li = 0; li <= 1 && made < count; ++li) {
        for (const auto& c : centers) {
            if (made >= count) break;
            if (c.is_zero()) continue;
            SchwartzFunction cell = SchwartzFunction::indicator_frak(E, rep.context(), c, L + li,
                                                                     rep.cell_cap());
            SchwartzFunction proj = project_isotypic_deep(E, rep.theta(), cell);
            if (proj.is_zero_function()) continue;
            if (made % 2 == 0) out.push_back({proj, zero});
            else out.push_back({zero, proj});
            ++made;
        }
    }
    if (out.empty()) throw Error("no spanning vectors available");
    return out;
}

}  // namespace

PsiWitness psi_independence_witness(const ThetaLiftRep& repA, const PadicNumber& t,
                                    int spanning_count) {
    const auto& E = repA.ext();
    auto f = E->F;
    const auto& ctx = repA.context();
    ThetaLiftRep repB = ThetaLiftRep::create(repA.pair(), repA.psi().twisted(t), ctx, repA.cell_cap());
    PsiWitness w;
    w.t = t;
    bool is_norm = hilbert_symbol(t, E->Delta) == 1;
    PadicNumber eta = repA.eta();
    Mat2 h = mat2_identity(f);
    h[0][0] = eta;
    Mat2 h2 = mat2_mul(h, h);

    // component map candidates
    std::function<InducedVector(const InducedVector&)> U;
    if (is_norm) {
        w.kind = (t == PadicNumber::from_long(f, 1)) ? "identity" : "scaling";
        // S = pi_{Theta,psi}(diag(t,1)) intertwines component-wise
        U = [&repA, t](const InducedVector& v) {
            return InducedVector{repA.act_norm_diag(t, v.phi1), repA.act_norm_diag(t, v.phi2)};
        };
    } else {
        w.kind = "swap";
        // t = eta * nu with nu a norm; U(phi1, phi2) = (A phi2, A pi_psi(h^2) phi1),
        // A = pi_{Theta,psi}(diag(nu,1))
        PadicNumber nu = t / eta;
        if (hilbert_symbol(nu, E->Delta) != 1)
            throw ValidationFailed("twist does not factor as eta times a norm");
        U = [&repA, nu, h2](const InducedVector& v) {
            SchwartzFunction first = repA.act_norm_diag(nu, v.phi2);
            SchwartzFunction second = repA.act_norm_diag(nu, repA.act_gl2N(h2, v.phi1));
            return InducedVector{first, second};
        };
    }

    std::vector<Mat2> gens = {mat2(f, Rat(f->p), 0, 0, Rat(1, f->p)), mat2(f, 1, 1, 0, 1),
                              mat2(f, 0, 1, -1, 0)};
    auto vectors = spanning_vectors(repA, spanning_count);
    for (const auto& g : gens) {
        for (const auto& v : vectors) {
            InducedVector lhs = U(induced_act(repA, g, v));
            InducedVector rhs = induced_act(repB, g, U(v));
            if (!lhs.phi1.equal_function(rhs.phi1) || !lhs.phi2.equal_function(rhs.phi2))
                throw ValidationFailed("psi-independence witness failed on a generator");
            ++w.vectors_checked;
        }
        ++w.generators_checked;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Representation card
// ---------------------------------------------------------------------------

RepresentationCard representation_card(const AdmissiblePair& pair, const AdditiveCharacter& psi,
                                       const ContextPtr& ctx, bool persist_3) {
    ThetaLiftRep rep = ThetaLiftRep::create(pair, psi, ctx);
    const auto& E = rep.ext();
    auto f = E->F;
    RepresentationCard card{};
    card.p = f->p;
    card.delta_class = square_class_name(E->delta_class);
    card.ramified = E->ramified;
    card.theta_level = rep.theta().level();
    card.theta_order = rep.theta().order();
    card.psi_class = square_class_name(psi.twist().square_class());
    card.gamma_delta_psi = rep.gamma_delta();
    card.selfdual_vol = rep.selfdual_vol();
    card.gamma_product_match = rep.gamma_matches_product_formula();

    // central character on the four square classes via the induced action
    SchwartzFunction probe = rep.isotypic_probe();
    InducedVector v{probe, probe};
    card.central_matches_det = true;
    DetCharacter det{pair};
    for (SquareClass c :
         {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi}) {
        PadicNumber x = square_class_rep(f, c);
        Mat2 zx = mat2_identity(f);
        zx[0][0] = x;
        zx[1][1] = x;
        InducedVector got = induced_act(rep, zx, v);
        RootOfUnity expect = det.value_root(x);
        ExactScalar ev = expect.eval(ctx);
        bool match = got.phi1.equal_function(probe.scaled(ev)) &&
                     got.phi2.equal_function(probe.scaled(ev));
        if (!match) card.central_matches_det = false;
        card.central_character.emplace_back(square_class_name(c), expect);
    }

    // irreducibility certificate: zero intertwiner space against the eta twist
    ThetaLiftRep repEta = ThetaLiftRep::create(pair, psi.twisted(rep.eta()), ctx, rep.cell_cap());
    card.irreducibility = truncated_intertwiner_solve(rep, repEta, 2, 2);
    if (persist_3) card.persistence = truncated_intertwiner_solve(rep, repEta, 3, 3);

    // psi-independence witnesses: a norm twist and the eta swap
    PadicNumber tn = PadicNumber::from_long(f, f->nonresidue());
    if (hilbert_symbol(tn, E->Delta) != 1) tn = PadicNumber::from_long(f, 4);
    card.psi_norm_case = psi_independence_witness(rep, tn);
    card.psi_swap_case = psi_independence_witness(rep, rep.eta());
    return card;
}

}  // namespace thetalift
