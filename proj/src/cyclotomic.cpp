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

#include "thetalift/cyclotomic.hpp"

#include <array>
#include <sstream>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {

constexpr uint64_t kI8Shift = 40;

inline long key_i8(uint64_t k) { return static_cast<long>(k >> kI8Shift); }
inline long key_j(uint64_t k) { return static_cast<long>(k & ((uint64_t(1) << kI8Shift) - 1)); }
inline uint64_t make_key(long i8, long j) {
    return (static_cast<uint64_t>(i8) << kI8Shift) | static_cast<uint64_t>(j);
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Arithmetic in Q(zeta8) on the basis {1, z, z^2, z^3}, z^4 = -1. Used only by
// the general inverse (extended Euclid over Q(zeta8)[y]).
struct Q8 {
    std::array<Rat, 4> c{};

    static Q8 from_rat(const Rat& r) {
        Q8 x;
        x.c[0] = r;
        return x;
    }
    bool is_zero() const {
        for (const auto& v : c)
            if (v != 0) return false;
        return true;
    }
    Q8 operator+(const Q8& o) const {
        Q8 r;
        for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    Q8 operator-(const Q8& o) const {
        Q8 r;
        for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    Q8 operator*(const Q8& o) const {
        Q8 r;
        for (int i = 0; i < 4; ++i) {
            if (c[i] == 0) continue;
            for (int j = 0; j < 4; ++j) {
                if (o.c[j] == 0) continue;
                int e = i + j;
                Rat v = c[i] * o.c[j];
                if (e >= 4) {
                    e -= 4;
                    v = -v;
                }
                r.c[e] += v;
            }
        }
        return r;
    }
    Q8 galois(int a) const {  // zeta8 -> zeta8^a, a odd
        Q8 r;
        for (int i = 0; i < 4; ++i) {
            if (c[i] == 0) continue;
            int e = (i * a) % 8;
            Rat v = c[i];
            if (e >= 4) {
                e -= 4;
                v = -v;
            }
            r.c[e] += v;
        }
        return r;
    }
    Q8 inverse() const {
        Q8 prod = galois(3) * galois(5) * galois(7);
        Q8 n = *this * prod;
        if (n.c[1] != 0 || n.c[2] != 0 || n.c[3] != 0 || n.c[0] == 0)
            throw Error("Q(zeta8) norm failure");
        Rat inv = Rat(1) / n.c[0];
        Q8 r;
        for (int i = 0; i < 4; ++i) r.c[i] = prod.c[i] * inv;
        return r;
    }
};

using Q8Poly = std::vector<Q8>;  // coefficient of y^j at index j

int poly_deg(const Q8Poly& f) {
    for (int d = static_cast<int>(f.size()) - 1; d >= 0; --d)
        if (!f[d].is_zero()) return d;
    return -1;
}

void poly_divmod(Q8Poly a, const Q8Poly& b, Q8Poly& q, Q8Poly& r) {
    int db = poly_deg(b);
    if (db < 0) throw DivisionByZero();
    Q8 lead_inv = b[db].inverse();
    int da = poly_deg(a);
    q.assign(da >= db ? da - db + 1 : 1, Q8{});
    while ((da = poly_deg(a)) >= db) {
        Q8 f = a[da] * lead_inv;
        q[da - db] = f;
        for (int i = 0; i <= db; ++i) a[da - db + i] = a[da - db + i] - f * b[i];
    }
    r = std::move(a);
}

}  // namespace

ScalarContext::ScalarContext(long p, int k) : p_(p), k_(k) {
    pk_ = 1;
    for (int i = 0; i < k; ++i) pk_ *= p;
    phi_pk_ = pk_ / p * (p - 1);
    M_ = Int(8) * pk_;
}

ContextPtr ScalarContext::create(long p, int k) {
    if (p == 2 || !is_prime(p)) throw Error("context requires an odd prime p");
    if (k < 1 || k > 14) throw Error("context level k out of range");
    return ContextPtr(new ScalarContext(p, k));
}

const std::vector<std::vector<Rat>>& ScalarContext::power_basis_inverse() const {
    if (!pb_inv_.empty()) return pb_inv_;
    long n = phi_M();
    if (n > 1024) throw LevelOverflow("context too large for power-basis serialization");
    // D: column e = tensor coordinates of zeta_M^e, e < phi(M).
    std::vector<std::vector<Rat>> D(n, std::vector<Rat>(n));
    for (long e = 0; e < n; ++e) {
        ExactScalar x = ExactScalar::root_of_unity(
            std::const_pointer_cast<ScalarContext>(shared_from_this()), Int(e));
        for (const auto& [key, coeff] : x.terms()) {
            long idx = key_i8(key) * phi_pk_ + key_j(key);
            D[idx][e] = coeff;
        }
    }
    // Gauss-Jordan inversion.
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
    for (long i = 0; i < n; ++i) inv[i][i] = 1;
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r)
            if (D[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw Error("power basis matrix is singular");
        std::swap(D[piv], D[col]);
        std::swap(inv[piv], inv[col]);
        Rat s = Rat(1) / D[col][col];
        for (long j = 0; j < n; ++j) {
            if (D[col][j] != 0) D[col][j] *= s;
            if (inv[col][j] != 0) inv[col][j] *= s;
        }
        for (long r = 0; r < n; ++r) {
            if (r == col || D[r][col] == 0) continue;
            Rat f = D[r][col];
            for (long j = 0; j < n; ++j) {
                if (D[col][j] != 0) D[r][j] -= f * D[col][j];
                if (inv[col][j] != 0) inv[r][j] -= f * inv[col][j];
            }
        }
    }
    // Store columns: pb_inv_[tensor_idx] = power coordinates of that basis element.
    pb_inv_.assign(n, std::vector<Rat>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) pb_inv_[j][i] = inv[i][j];
    return pb_inv_;
}

ExactScalar::ExactScalar(ContextPtr ctx, const Rat& rational) : ctx_(std::move(ctx)) {
    Rat rc = rational;
    rc.canonicalize();
    if (rc != 0) terms_[make_key(0, 0)] = rc;
}

void ExactScalar::add_term(long i8, const Int& j_in, const Rat& coeff) {
    if (coeff == 0) return;
    long q = ctx_->pk();
    long phi = ctx_->phi_pk();
    long p = ctx_->p();
    long step = q / p;  // p^{k-1}
    Rat c = coeff;
    c.canonicalize();
    i8 %= 8;
    if (i8 < 0) i8 += 8;
    if (i8 >= 4) {
        i8 -= 4;
        c = -c;
    }
    Int jm = mod_positive(j_in, Int(q));
    long j = jm.get_si();
    if (j < phi) {
        auto it = terms_.find(make_key(i8, j));
        if (it == terms_.end()) {
            terms_.emplace(make_key(i8, j), c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
        return;
    }
    // zeta^{(p-1)p^{k-1}} = -(1 + zeta^{p^{k-1}} + ... + zeta^{(p-2)p^{k-1}})
    long j2 = j - (p - 1) * step;
    for (long t = 0; t <= p - 2; ++t) add_term(i8, Int(j2 + t * step), -c);
}

ExactScalar ExactScalar::root_of_unity(ContextPtr ctx, const Int& e) {
    ExactScalar x(ctx);
    Int em = mod_positive(e, ctx->M());
    long i8 = mpz_fdiv_ui(em.get_mpz_t(), 8);
    Int j = mod_positive(em, Int(ctx->pk()));
    x.add_term(i8, j, Rat(1));
    return x;
}

ExactScalar ExactScalar::zeta8(ContextPtr ctx, long i) {
    ExactScalar x(ctx);
    x.add_term(i, Int(0), Rat(1));
    return x;
}

ExactScalar ExactScalar::zeta_pk(ContextPtr ctx, const Int& j) {
    ExactScalar x(ctx);
    x.add_term(0, j, Rat(1));
    return x;
}

ExactScalar ExactScalar::root_of_order(ContextPtr ctx, long d, long e) {
    if (d <= 0) throw Error("root order must be positive");
    Int M = ctx->M();
    if (mpz_divisible_ui_p(M.get_mpz_t(), static_cast<unsigned long>(d)) == 0)
        throw Error("root order does not divide M");
    Int scale = M / d;
    return root_of_unity(std::move(ctx), scale * e);
}

ExactScalar ExactScalar::sqrt_p(ContextPtr ctx) {
    long p = ctx->p();
    long step = ctx->pk() / p;
    ExactScalar g(ctx);
    for (long a = 1; a < p; ++a) {
        Int am(a);
        int leg = mpz_legendre(am.get_mpz_t(), Int(p).get_mpz_t());
        g.add_term(0, Int(a * step), Rat(leg));
    }
    if (p % 4 == 1) return g;
    // g^2 = -p here; sqrt(p) = -i * g.
    ExactScalar minus_i(ctx);
    minus_i.add_term(2, Int(0), Rat(-1));
    return minus_i * g;
}

ExactScalar ExactScalar::sqrt_positive(ContextPtr ctx, const Rat& value) {
    if (value <= 0) throw Error("sqrt_positive needs a positive rational");
    long v = rat_valuation(value, Int(ctx->p()));
    Rat unit = value / rat_pow(Rat(ctx->p()), v);
    auto s = rat_sqrt_exact(unit);
    if (!s) throw Error("magnitude is not a perfect square times a power of p");
    long half = (v >= 0) ? v / 2 : -((-v + 1) / 2);  // floor(v/2)
    ExactScalar r = ExactScalar::from_rational(ctx, *s * rat_pow(Rat(ctx->p()), half));
    if (v % 2 != 0) r = r * sqrt_p(ctx);
    return r;
}

bool ExactScalar::is_rational() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == 0;
}

Rat ExactScalar::rational_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_rational()) throw Error("scalar is not rational");
    return terms_.begin()->second;
}

void ExactScalar::check_ctx(const ExactScalar& o) const {
    if (!ctx_ || !o.ctx_ || !ctx_->same(*o.ctx_)) throw ContextMismatch();
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r(ctx_);
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    check_ctx(o);
    for (const auto& [k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    check_ctx(o);
    for (const auto& [k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, -c);
        } else {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    ExactScalar r = *this;
    r += o;
    return r;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const {
    ExactScalar r = *this;
    r -= o;
    return r;
}

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    check_ctx(o);
    ExactScalar r(ctx_);
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_)
            r.add_term(key_i8(k1) + key_i8(k2), Int(key_j(k1) + key_j(k2)), c1 * c2);
    return r;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    *this = *this * o;
    return *this;
}

ExactScalar ExactScalar::operator*(const Rat& s) const {
    Rat sc = s;
    sc.canonicalize();
    if (sc == 0) return ExactScalar(ctx_);
    ExactScalar r(ctx_);
    for (const auto& [k, c] : terms_) r.terms_[k] = c * sc;
    return r;
}

ExactScalar ExactScalar::conjugate() const {
    ExactScalar r(ctx_);
    for (const auto& [k, c] : terms_) r.add_term(-key_i8(k), Int(-key_j(k)), c);
    return r;
}

ExactScalar ExactScalar::inverse() const {
    if (terms_.empty()) throw DivisionByZero();
    if (is_monomial()) {
        const auto& [k, c] = *terms_.begin();
        ExactScalar r(ctx_);
        r.add_term(-key_i8(k), Int(-key_j(k)), Rat(1) / c);
        return r;
    }
    ExactScalar conj = conjugate();
    ExactScalar norm2 = *this * conj;
    if (norm2.is_rational()) {
        Rat n = norm2.rational_value();
        if (n == 0) throw DivisionByZero();
        return conj * (Rat(1) / n);
    }
    return general_inverse();
}

ExactScalar ExactScalar::general_inverse() const {
    long phi = ctx_->phi_pk();
    long p = ctx_->p();
    long step = ctx_->pk() / p;
    // A as a polynomial in y = zeta_{p^k} with Q(zeta8) coefficients.
    Q8Poly A(phi, Q8{});
    for (const auto& [k, c] : terms_) A[key_j(k)].c[key_i8(k)] += c;
    Q8Poly Phi(phi + 1, Q8{});
    for (long t = 0; t <= p - 1; ++t) Phi[t * step] = Q8::from_rat(Rat(1));
    // Extended Euclid: find U with A*U = gcd (a nonzero constant) mod Phi.
    Q8Poly r0 = Phi, r1 = A;
    Q8Poly s0(1, Q8{}), s1(1, Q8::from_rat(Rat(1)));
    while (poly_deg(r1) > 0) {
        Q8Poly q, rem;
        poly_divmod(r0, r1, q, rem);
        // s_new = s0 - q * s1
        Q8Poly snew(std::max(s0.size(), q.size() + s1.size()), Q8{});
        for (size_t i = 0; i < s0.size(); ++i) snew[i] = s0[i];
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i].is_zero()) continue;
            for (size_t j = 0; j < s1.size(); ++j) snew[i + j] = snew[i + j] - q[i] * s1[j];
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(snew);
    }
    if (poly_deg(r1) != 0) throw DivisionByZero();
    Q8 c_inv = r1[0].inverse();
    ExactScalar out(ctx_);
    for (size_t j = 0; j < s1.size(); ++j) {
        Q8 coeff = s1[j] * c_inv;
        for (int i = 0; i < 4; ++i)
            if (coeff.c[i] != 0) out.add_term(i, Int(static_cast<long>(j)), coeff.c[i]);
    }
    return out;
}

ExactScalar ExactScalar::operator/(const ExactScalar& o) const { return *this * o.inverse(); }

ExactScalar ExactScalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    ExactScalar acc = ExactScalar::one(ctx_);
    ExactScalar base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool ExactScalar::operator==(const ExactScalar& o) const {
    check_ctx(o);
    return terms_ == o.terms_;
}

ExactScalar ExactScalar::embed(const ContextPtr& target) const {
    if (!ctx_) throw Error("embedding an uninitialized scalar");
    if (target->p() != ctx_->p() || target->k() < ctx_->k()) throw ContextMismatch();
    long factor = 1;
    for (int i = ctx_->k(); i < target->k(); ++i) factor *= ctx_->p();
    ExactScalar r(target);
    for (const auto& [k, c] : terms_) r.add_term(key_i8(k), Int(key_j(k)) * factor, c);
    return r;
}

ExactScalar ExactScalar::compress(const ContextPtr& target) const {
    if (target->p() != ctx_->p() || target->k() > ctx_->k()) throw ContextMismatch();
    long factor = 1;
    for (int i = target->k(); i < ctx_->k(); ++i) factor *= ctx_->p();
    ExactScalar r(target);
    for (const auto& [k, c] : terms_) {
        if (key_j(k) % factor != 0) throw Error("scalar does not lie in the smaller context");
        r.add_term(key_i8(k), Int(key_j(k) / factor), c);
    }
    return r;
}

std::vector<Rat> ExactScalar::power_basis_coeffs() const {
    const auto& cols = ctx_->power_basis_inverse();
    long n = ctx_->phi_M();
    std::vector<Rat> out(n);
    for (const auto& [k, c] : terms_) {
        long idx = key_i8(k) * ctx_->phi_pk() + key_j(k);
        const auto& col = cols[idx];
        for (long i = 0; i < n; ++i)
            if (col[i] != 0) out[i] += c * col[i];
    }
    return out;
}

ExactScalar ExactScalar::from_power_basis(ContextPtr ctx, const std::vector<Rat>& coeffs) {
    if (static_cast<long>(coeffs.size()) != ctx->phi_M())
        throw SchemaError("coefficient vector has wrong length");
    ExactScalar x(ctx);
    for (size_t e = 0; e < coeffs.size(); ++e) {
        if (coeffs[e] == 0) continue;
        x += root_of_unity(ctx, Int(static_cast<long>(e))) * coeffs[e];
    }
    return x;
}

std::string ExactScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (key_i8(k) != 0) os << "*z8^" << key_i8(k);
        if (key_j(k) != 0) os << "*zq^" << key_j(k);
    }
    return os.str();
}

}  // namespace thetalift
