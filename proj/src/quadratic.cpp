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

#include "thetalift/quadratic.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <queue>
#include <sstream>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {

// Residue of a p-adic integer mod p^s as a plain long (s kept small enough).
long padic_residue(const PadicNumber& a, int s, long p) {
    if (s <= 0) return 0;
    if (a.is_zero()) return 0;
    long v = a.valuation();
    if (v < 0) throw Error("residue of a non-integral element");
    if (v >= s) return 0;
    Int r = a.unit_mod(s - static_cast<int>(v)) * int_pow(p, static_cast<unsigned long>(v));
    Int m = int_pow(p, static_cast<unsigned long>(s));
    return mod_positive(r, m).get_si();
}

PadicNumber sqrt_matching(const PadicNumber& sq, long target_mod_p) {
    PadicNumber r = sq.sqrt();
    long p = r.field()->p;
    long rm = padic_residue(r, 1, p);
    if (rm != ((target_mod_p % p) + p) % p) return -r;
    return r;
}

}  // namespace

QuadPtr QuadExt::create(FieldPtr F, const PadicNumber& Delta) {
    if (Delta.is_zero()) throw ZeroInput();
    if (Delta.square_class() == SquareClass::One) throw Error("Delta must be a nonsquare");
    if (Delta.valuation() < 0 || Delta.valuation() > 1)
        throw Error("Delta must satisfy 0 <= v(Delta) <= 1 so that O_E = O_F[delta]");
    auto E = std::make_shared<QuadExt>();
    E->F = std::move(F);
    E->Delta = Delta;
    E->delta_class = Delta.square_class();
    E->ramified = (Delta.valuation() % 2 + 2) % 2 == 1;
    return E;
}

QuadPtr QuadExt::from_class(FieldPtr F, SquareClass c) {
    if (c == SquareClass::One) throw Error("Delta must be a nonsquare");
    auto rep = square_class_rep(F, c);
    return create(std::move(F), rep);
}

PadicNumber QuadExt::eta() const {
    PadicNumber e = ramified ? PadicNumber::from_long(F, F->nonresidue())
                             : PadicNumber::from_long(F, F->p);
    if (hilbert_symbol(e, Delta) != -1) throw Error("eta is unexpectedly a norm");
    return e;
}

ExtElement::ExtElement(QuadPtr E, PadicNumber a1, PadicNumber a2)
    : E_(std::move(E)), a1_(std::move(a1)), a2_(std::move(a2)) {}

ExtElement ExtElement::zero(QuadPtr E) {
    auto f = E->F;
    return ExtElement(std::move(E), PadicNumber::zero(f), PadicNumber::zero(f));
}

ExtElement ExtElement::one(QuadPtr E) {
    auto f = E->F;
    return ExtElement(std::move(E), PadicNumber::from_long(f, 1), PadicNumber::zero(f));
}

ExtElement ExtElement::from_base(QuadPtr E, const PadicNumber& x) {
    auto f = E->F;
    return ExtElement(std::move(E), x, PadicNumber::zero(f));
}

ExtElement ExtElement::delta(QuadPtr E) {
    auto f = E->F;
    return ExtElement(std::move(E), PadicNumber::zero(f), PadicNumber::from_long(f, 1));
}

ExtElement ExtElement::uniformizer(QuadPtr E) {
    if (E->ramified) return delta(std::move(E));
    auto f = E->F;
    return from_base(std::move(E), PadicNumber::from_long(f, f->p));
}

long ExtElement::val_E() const {
    if (is_zero()) throw ZeroInput();
    const bool ram = E_->ramified;
    long v1 = a1_.is_zero() ? LONG_MAX : a1_.valuation();
    long v2 = a2_.is_zero() ? LONG_MAX : a2_.valuation();
    if (!ram) return std::min(v1, v2);
    long w1 = a1_.is_zero() ? LONG_MAX : 2 * v1;
    long w2 = a2_.is_zero() ? LONG_MAX : 2 * v2 + E_->Delta.valuation();
    return std::min(w1, w2);
}

ExtElement ExtElement::operator-() const { return ExtElement(E_, -a1_, -a2_); }

ExtElement ExtElement::operator+(const ExtElement& o) const {
    return ExtElement(E_, a1_ + o.a1_, a2_ + o.a2_);
}

ExtElement ExtElement::operator-(const ExtElement& o) const {
    return ExtElement(E_, a1_ - o.a1_, a2_ - o.a2_);
}

ExtElement ExtElement::operator*(const ExtElement& o) const {
    return ExtElement(E_, a1_ * o.a1_ + E_->Delta * (a2_ * o.a2_), a1_ * o.a2_ + a2_ * o.a1_);
}

ExtElement ExtElement::scaled(const PadicNumber& c) const {
    return ExtElement(E_, a1_ * c, a2_ * c);
}

ExtElement ExtElement::sigma() const { return ExtElement(E_, a1_, -a2_); }

PadicNumber ExtElement::norm() const { return a1_ * a1_ - E_->Delta * (a2_ * a2_); }

PadicNumber ExtElement::trace() const { return a1_ + a1_; }

ExtElement ExtElement::inverse() const {
    if (is_zero()) throw DivisionByZero();
    PadicNumber n = norm();
    PadicNumber one = PadicNumber::from_long(E_->F, 1);
    return sigma().scaled(one / n);
}

ExtElement ExtElement::operator/(const ExtElement& o) const { return *this * o.inverse(); }

bool ExtElement::operator==(const ExtElement& o) const { return a1_ == o.a1_ && a2_ == o.a2_; }

ExtElement ExtElement::pow_int(long e) const {
    ExtElement base = e >= 0 ? *this : inverse();
    unsigned long n = static_cast<unsigned long>(e >= 0 ? e : -e);
    ExtElement acc = one(E_);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

std::string ExtElement::str() const {
    std::ostringstream os;
    os << "(" << a1_.str() << ") + (" << a2_.str() << ")*delta";
    return os.str();
}

ExtElement solve_norm(const QuadPtr& E, const PadicNumber& gamma) {
    if (gamma.is_zero()) throw ZeroInput();
    if (hilbert_symbol(gamma, E->Delta) != 1) throw NonNorm();
    auto f = E->F;
    long p = f->p;
    // square gammas solve inside F (smallest representative first)
    if (gamma.square_class() == SquareClass::One) {
        PadicNumber r = gamma.sqrt();
        return ExtElement::from_base(E, r);
    }
    long v = gamma.valuation();
    if ((v % 2 + 2) % 2 == 1) {
        // peel one delta: N(delta) = -Delta
        PadicNumber gp = gamma / (-E->Delta);
        return ExtElement::delta(E) * solve_norm(E, gp);
    }
    PadicNumber scale = PadicNumber::from_long(f, p).pow_int(v / 2);
    PadicNumber gu = gamma / (scale * scale);
    if (E->ramified) {
        // (gu, Delta) = 1 forces the unit part to be a residue
        PadicNumber r = gu.sqrt();
        return ExtElement::from_base(E, r).scaled(scale);
    }
    // unramified: residue search, then one Hensel lift on the unit coordinate
    long gur = padic_residue(gu, 1, p);
    long dr = padic_residue(E->Delta, 1, p);
    for (long x = 0; x < p; ++x) {
        for (long y = 0; y < p; ++y) {
            if (((x * x - dr * y * y) % p + p) % p != gur) continue;
            PadicNumber a1, a2;
            if ((2 * x) % p != 0) {
                a2 = PadicNumber::from_long(f, y);
                a1 = sqrt_matching(gu + E->Delta * a2 * a2, x);
            } else {
                a1 = PadicNumber::from_long(f, x);
                a2 = sqrt_matching((a1 * a1 - gu) / E->Delta, y);
            }
            return ExtElement(E, a1, a2).scaled(scale);
        }
    }
    throw Error("norm equation residue search failed unexpectedly");
}

RootOfUnity RootOfUnity::make(long order, long exp) {
    if (order <= 0) throw Error("root order must be positive");
    exp = ((exp % order) + order) % order;
    if (exp == 0) return {1, 0};
    long g = std::gcd(order, exp);
    return {order / g, exp / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    long l = std::lcm(order, o.order);
    return make(l, exp * (l / order) + o.exp * (l / o.order));
}

RootOfUnity RootOfUnity::inverse() const { return make(order, -exp); }

RootOfUnity RootOfUnity::pow(long e) const {
    long em = ((e % order) + order) % order;
    return make(order, exp * em);
}

ExactScalar RootOfUnity::eval(const ContextPtr& ctx) const {
    return ExactScalar::root_of_order(ctx, order, exp);
}

long ResidueGroup::index_of(const ExtElement& x) const {
    auto it = index_.find(key_of(x));
    if (it == index_.end()) throw Error("element not in the residue group");
    return it->second;
}

ResidueGroup::Key ResidueGroup::key_of(const ExtElement& x) const {
    long p = E_->F->p;
    return {padic_residue(x.a1(), s1_, p), padic_residue(x.a2(), s2_, p)};
}

long ResidueGroup::mul(long i, long j) const { return index_of(elems_[i] * elems_[j]); }

long ResidueGroup::inv(long i) const {
    if (i == id_) return id_;
    long x = i, prev = i;
    while (x != id_) {
        prev = x;
        x = mul(x, i);
    }
    return prev;
}

long ResidueGroup::element_order(long i) const {
    long n = 1;
    long x = i;
    while (x != id_) {
        x = mul(x, i);
        ++n;
    }
    return n;
}

std::shared_ptr<const E1Group> E1Group::create(QuadPtr E, int level, size_t budget) {
    if (level < 1) throw Error("E^1 level must be >= 1");
    // idempotent cache; duplicate computation is harmless, recomputation is not cheap
    static std::map<std::tuple<long, std::string, int>, std::shared_ptr<const E1Group>> cache;
    std::string dkey = E->Delta.exact_value().get_str();
    auto ck = std::make_tuple(E->F->p, dkey, level);
    auto cit = cache.find(ck);
    if (cit != cache.end() && cit->second->ext() == E) return cit->second;
    auto G = std::make_shared<E1Group>();
    G->E_ = E;
    G->level_ = level;
    long p = E->F->p;
    int digits = E->F->digits;
    if (E->ramified) {
        G->s1_ = (level + 1) / 2;
        G->s2_ = level / 2;
    } else {
        G->s1_ = level;
        G->s2_ = level;
    }
    if (2 * G->s1_ + 2 > digits) throw Error("field precision too small for this E^1 level");
    auto f = E->F;
    auto push_elem = [&](const ExtElement& x) {
        auto key = G->key_of(x);
        if (G->index_.count(key)) return;
        G->index_[key] = static_cast<long>(G->elems_.size());
        G->elems_.push_back(x);
    };
    if (!E->ramified) {
        long m = int_pow(p, static_cast<unsigned long>(level)).get_si();
        if (static_cast<size_t>(m) * m > budget) throw BudgetExceeded();
        Int mod = int_pow(p, static_cast<unsigned long>(level));
        Int delta_res(padic_residue(E->Delta, level, p));
        for (long x = 0; x < m; ++x) {
            for (long y = 0; y < m; ++y) {
                Int lhs = mod_positive(Int(x) * x - delta_res * y * y, mod);
                if (lhs != 1) continue;
                PadicNumber a1, a2;
                if ((2 * x) % p != 0) {
                    a2 = PadicNumber::from_long(f, y);
                    PadicNumber sq = PadicNumber::from_long(f, 1) + E->Delta * a2 * a2;
                    a1 = sqrt_matching(sq, x);
                } else {
                    a1 = PadicNumber::from_long(f, x);
                    PadicNumber sq = (a1 * a1 - PadicNumber::from_long(f, 1)) / E->Delta;
                    a2 = sqrt_matching(sq, y);
                }
                push_elem(ExtElement(E, a1, a2));
            }
        }
    } else {
        long m2 = int_pow(p, static_cast<unsigned long>(G->s2_)).get_si();
        if (static_cast<size_t>(m2) * 2 > budget) throw BudgetExceeded();
        for (long y = 0; y < std::max<long>(m2, 1); ++y) {
            for (int sign : {1, -1}) {
                PadicNumber a2 = PadicNumber::from_long(f, y);
                PadicNumber sq = PadicNumber::from_long(f, 1) + E->Delta * a2 * a2;
                PadicNumber a1 = sqrt_matching(sq, sign == 1 ? 1 : p - 1);
                push_elem(ExtElement(E, a1, a2));
            }
        }
    }
    G->id_ = G->index_of(ExtElement::one(E));
    for (const auto& x : G->elems_) {
        if (!(x.norm() == PadicNumber::from_long(f, 1)))
            throw Error("E^1 representative fails the norm check");
    }
    long n = static_cast<long>(G->elems_.size());
    long best = G->id_, best_ord = 1;
    for (long i = 0; i < n; ++i) {
        long o = G->element_order(i);
        if (o > best_ord) {
            best_ord = o;
            best = i;
        }
        if (best_ord == n) break;
    }
    if (best_ord != n) throw Error("E^1 quotient is unexpectedly non-cyclic");
    G->gen_ = best;
    G->dlog_.assign(n, -1);
    long x = G->id_, e = 0;
    do {
        G->dlog_[x] = e;
        x = G->mul(x, G->gen_);
        ++e;
    } while (x != G->id_);
    cache[ck] = G;
    return G;
}

long E1Group::index_of_minus_one() const { return index_of(-ExtElement::one(E_)); }

std::vector<long> E1Group::principal_unit_indices() const {
    std::vector<long> out;
    long p = E_->F->p;
    for (size_t i = 0; i < elems_.size(); ++i) {
        // mu = 1 mod p_E: a1 = 1 (mod p) and, unramified only, a2 = 0 (mod p)
        long r1 = padic_residue(elems_[i].a1(), 1, p);
        long r2 = padic_residue(elems_[i].a2(), 1, p);
        bool principal = E_->ramified ? (r1 == 1) : (r1 == 1 && r2 == 0);
        if (principal) out.push_back(static_cast<long>(i));
    }
    return out;
}

std::shared_ptr<const UnitGroup> UnitGroup::create(QuadPtr E, int level, size_t budget) {
    if (level < 1) throw Error("unit group level must be >= 1");
    auto G = std::make_shared<UnitGroup>();
    G->E_ = E;
    G->level_ = level;
    long p = E->F->p;
    if (E->ramified) {
        G->s1_ = (level + 1) / 2;
        G->s2_ = level / 2;
    } else {
        G->s1_ = level;
        G->s2_ = level;
    }
    if (2 * G->s1_ + 2 > E->F->digits) throw Error("field precision too small for this level");
    auto f = E->F;
    long m1 = int_pow(p, static_cast<unsigned long>(G->s1_)).get_si();
    long m2 = G->s2_ > 0 ? int_pow(p, static_cast<unsigned long>(G->s2_)).get_si() : 1;
    if (static_cast<size_t>(m1) * m2 > budget) throw BudgetExceeded();
    for (long x = 0; x < m1; ++x) {
        for (long y = 0; y < m2; ++y) {
            bool unit = E->ramified ? (x % p != 0) : (x % p != 0 || y % p != 0);
            if (!unit) continue;
            ExtElement el(E, PadicNumber::from_long(f, x), PadicNumber::from_long(f, y));
            auto key = G->key_of(el);
            if (G->index_.count(key)) continue;
            G->index_[key] = static_cast<long>(G->elems_.size());
            G->elems_.push_back(el);
        }
    }
    G->id_ = G->index_of(ExtElement::one(E));
    long n = static_cast<long>(G->elems_.size());
    // canonical generating set: greedy over (element order desc, index asc)
    std::vector<long> order_of(n);
    std::vector<long> by_order(n);
    for (long i = 0; i < n; ++i) {
        order_of[i] = G->element_order(i);
        by_order[i] = i;
    }
    std::sort(by_order.begin(), by_order.end(), [&](long a, long b) {
        if (order_of[a] != order_of[b]) return order_of[a] > order_of[b];
        return a < b;
    });
    std::vector<char> in_span(n, 0);
    in_span[G->id_] = 1;
    long covered = 1;
    for (long i : by_order) {
        if (covered == n) break;
        if (in_span[i]) continue;
        G->gens_.push_back(i);
        std::vector<long> span;
        span.reserve(covered);
        for (long j = 0; j < n; ++j)
            if (in_span[j]) span.push_back(j);
        for (long j : span) {
            long x = j;
            for (long step = 0; step < order_of[i]; ++step) {
                x = G->mul(x, i);
                if (!in_span[x]) {
                    in_span[x] = 1;
                    ++covered;
                }
            }
        }
    }
    G->sigma_.assign(n, -1);
    for (long i = 0; i < n; ++i) G->sigma_[i] = G->index_of(G->elems_[i].sigma());
    return G;
}

CharacterEOne::CharacterEOne(E1Ptr G, RootOfUnity gen_image) : G_(std::move(G)), gen_image_(gen_image) {
    long ord = G_->order();
    if (!gen_image_.pow(ord).is_one())
        throw ValidationFailed("E^1 character image order does not divide the group order");
}

RootOfUnity CharacterEOne::value_index(long i) const { return gen_image_.pow(G_->dlog(i)); }

RootOfUnity CharacterEOne::value(const ExtElement& mu) const { return value_index(G_->index_of(mu)); }

ExactScalar CharacterEOne::eval(const ContextPtr& ctx, const ExtElement& mu) const {
    return value(mu).eval(ctx);
}

long CharacterEOne::order() const { return gen_image_.multiplicative_order(); }

RootOfUnity CharacterEOne::at_minus_one() const { return value_index(G_->index_of_minus_one()); }

CharacterEStar::CharacterEStar(UnitPtr U, RootOfUnity at_uniformizer, std::vector<RootOfUnity> gen_images)
    : U_(std::move(U)), unif_(at_uniformizer), gen_images_(std::move(gen_images)) {
    const auto& gens = U_->generators();
    if (gen_images_.size() != gens.size())
        throw ValidationFailed("one image required per canonical unit-group generator");
    long n = static_cast<long>(U_->size());
    table_.assign(n, RootOfUnity::one());
    std::vector<char> known(n, 0);
    known[U_->identity()] = 1;
    std::queue<long> q;
    q.push(U_->identity());
    while (!q.empty()) {
        long x = q.front();
        q.pop();
        for (size_t g = 0; g < gens.size(); ++g) {
            long y = U_->mul(x, gens[g]);
            RootOfUnity v = table_[x] * gen_images_[g];
            if (!known[y]) {
                known[y] = 1;
                table_[y] = v;
                q.push(y);
            } else if (!(table_[y] == v)) {
                throw ValidationFailed("unit character images are not a homomorphism");
            }
        }
    }
    for (long i = 0; i < n; ++i)
        if (!known[i]) throw ValidationFailed("generators do not generate the unit group");
    for (long i = 0; i < n; ++i)
        for (size_t g = 0; g < gens.size(); ++g)
            if (!(table_[U_->mul(i, gens[g])] == table_[i] * gen_images_[g]))
                throw ValidationFailed("unit character table inconsistency");
}

RootOfUnity CharacterEStar::value(const ExtElement& x) const {
    if (x.is_zero()) throw ZeroInput();
    long v = x.val_E();
    ExtElement unif = ExtElement::uniformizer(U_->ext());
    ExtElement y = x * unif.pow_int(-v);
    return unif_.pow(v) * table_[U_->index_of(y)];
}

ExactScalar CharacterEStar::eval(const ContextPtr& ctx, const ExtElement& x) const {
    return value(x).eval(ctx);
}

RootOfUnity CharacterEStar::value_at_base(const PadicNumber& x) const {
    return value(ExtElement::from_base(U_->ext(), x));
}

CharacterEStar CharacterEStar::sigma_twist() const {
    std::vector<RootOfUnity> images;
    for (long g : U_->generators()) images.push_back(table_[U_->sigma_of(g)]);
    RootOfUnity unif = unif_;
    if (U_->ext()->ramified) {
        // sigma(delta) = -delta
        unif = unif_ * table_[U_->index_of(-ExtElement::one(U_->ext()))];
    }
    return CharacterEStar(U_, unif, images);
}

bool CharacterEStar::equals(const CharacterEStar& o) const {
    if (!(unif_ == o.unif_) || table_.size() != o.table_.size()) return false;
    for (size_t i = 0; i < table_.size(); ++i)
        if (!(table_[i] == o.table_[i])) return false;
    return true;
}

AdmissibilityVerdict is_admissible(const AdmissiblePair& pair) {
    const auto& Theta = pair.Theta;
    int level = Theta.level();
    if (Theta.equals(Theta.sigma_twist()))
        return {false, "factors through the norm map (Theta = Theta o sigma)", level};
    if (pair.E->ramified) {
        auto G1 = E1Group::create(pair.E, level);
        bool trivial_on_kernel = true;
        for (long i : G1->principal_unit_indices()) {
            if (!Theta.value(G1->elements()[i]).is_one()) {
                trivial_on_kernel = false;
                break;
            }
        }
        if (trivial_on_kernel)
            return {false, "condition (2): E/F ramified while Theta|U^1 factors through the norm", level};
    }
    return {true, "admissible", level};
}

RestrictedCharacter restrict_to_E1(const CharacterEStar& Theta) {
    auto G = E1Group::create(Theta.ext(), Theta.level());
    RootOfUnity image = Theta.value(G->elements()[G->generator()]);
    CharacterEOne theta(G, image);
    return {theta, theta.is_regular()};
}

RootOfUnity DetCharacter::value_root(const PadicNumber& x) const {
    int kappa = hilbert_symbol(x, pair.E->Delta);
    RootOfUnity sign = kappa == 1 ? RootOfUnity::one() : RootOfUnity::make(2, 1);
    return sign * pair.Theta.value_at_base(x);
}

ExactScalar DetCharacter::eval(const ContextPtr& ctx, const PadicNumber& x) const {
    return value_root(x).eval(ctx);
}

}  // namespace thetalift
