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

#include "thetalift/padic.hpp"

#include <sstream>

#include "thetalift/errors.hpp"

namespace thetalift {

namespace {
bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace

std::shared_ptr<const FieldConfig> FieldConfig::create(long p, int digits) {
    if (p == 2) throw Error("p = 2 is not supported (odd residue characteristic only)");
    if (!is_prime(p)) throw Error("p must be an odd prime");
    if (digits < 4) throw Error("precision must be at least 4 digits");
    auto f = std::make_shared<FieldConfig>();
    f->p = p;
    f->digits = digits;
    return f;
}

Int FieldConfig::p_pow(int e) const { return int_pow(p, static_cast<unsigned long>(e)); }

long FieldConfig::nonresidue() const {
    Int pp(p);
    for (long u = 2; u < p; ++u) {
        Int um(u);
        if (mpz_legendre(um.get_mpz_t(), pp.get_mpz_t()) == -1) return u;
    }
    throw Error("no non-residue found");
}

std::string square_class_name(SquareClass c) {
    switch (c) {
        case SquareClass::One: return "1";
        case SquareClass::U: return "u";
        case SquareClass::Pi: return "pi";
        case SquareClass::UPi: return "u_pi";
    }
    return "?";
}

SquareClass square_class_mul(SquareClass a, SquareClass b) {
    int x = static_cast<int>(a), y = static_cast<int>(b);
    return static_cast<SquareClass>((x ^ y) & 3);
}

PadicNumber PadicNumber::zero(FieldPtr f) {
    PadicNumber x;
    x.f_ = std::move(f);
    x.zero_ = true;
    x.exact_ = Rat(0);
    return x;
}

void PadicNumber::ensure_val() const {
    if (have_val_ || zero_) return;
    val_ = rat_valuation(*exact_, Int(f_->p));
    have_val_ = true;
}

void PadicNumber::ensure_unit(int digits) const {
    if (zero_) throw ZeroInput();
    if (known_ >= digits) return;
    if (!exact_) throw PrecisionLoss();
    ensure_val();
    int d = std::max(digits, 4);
    Int mod = f_->p_pow(d);
    Rat u = *exact_ / rat_pow(Rat(f_->p), val_);
    Int num = mod_positive(u.get_num(), mod);
    if (u.get_den() == 1) {
        unit_ = num;
    } else {
        Int den = mod_positive(u.get_den(), mod);
        unit_ = mod_positive(num * mod_inverse(den, mod), mod);
    }
    known_ = d;
}

PadicNumber PadicNumber::from_rational(FieldPtr f, const Rat& x) {
    PadicNumber r;
    r.f_ = std::move(f);
    Rat xc = x;
    xc.canonicalize();
    r.zero_ = (xc == 0);
    r.exact_ = std::move(xc);
    return r;
}

PadicNumber PadicNumber::truncated(FieldPtr f, long val, const Int& unit, int known) {
    if (known < 1 || known > f->digits) throw Error("truncated value with invalid digit count");
    Int mod = f->p_pow(known);
    Int u = mod_positive(unit, mod);
    if (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(f->p)))
        throw Error("truncated unit part is divisible by p");
    PadicNumber r;
    r.f_ = std::move(f);
    r.zero_ = false;
    r.have_val_ = true;
    r.val_ = val;
    r.unit_ = u;
    r.known_ = known;
    return r;
}

long PadicNumber::valuation() const {
    if (zero_) throw ZeroInput();
    ensure_val();
    return val_;
}

Int PadicNumber::unit_mod(int digits) const {
    if (zero_) throw ZeroInput();
    if (!exact_ && digits > known_) throw PrecisionLoss();
    ensure_unit(digits);
    return mod_positive(unit_, f_->p_pow(digits));
}

std::vector<int> PadicNumber::unit_digit_list() const {
    int kd = known_digits();
    Int u = unit_mod(kd);
    std::vector<int> out;
    out.reserve(kd);
    for (int i = 0; i < kd; ++i) {
        Int d = mod_positive(u, Int(f_->p));
        out.push_back(static_cast<int>(d.get_si()));
        u = (u - d) / f_->p;
    }
    return out;
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    if (exact_) return from_rational(f_, -*exact_);
    Int mod = f_->p_pow(known_);
    return truncated(f_, val_, mod - unit_, known_);
}

const Rat& PadicNumber::exact_value() const {
    if (!exact_) throw PrecisionLoss("value is truncated, no exact rational form");
    return *exact_;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
    if (!f_ || !o.f_ || f_->p != o.f_->p) throw ContextMismatch();
    if (zero_) return o;
    if (o.zero_) return *this;
    if (exact_ && o.exact_) return from_rational(f_, *exact_ + *o.exact_);
    // digit model
    long va = valuation(), vb = o.valuation();
    long v = std::min(va, vb);
    int ka = known_digits(), kb = o.known_digits();
    int avail = std::min(ka - static_cast<int>(va - v), kb - static_cast<int>(vb - v));
    if (avail <= 0) throw PrecisionLoss();
    Int mod = f_->p_pow(avail);
    Int s = mod_positive(unit_mod(ka) * f_->p_pow(static_cast<int>(va - v)) +
                             o.unit_mod(kb) * f_->p_pow(static_cast<int>(vb - v)),
                         mod);
    if (s == 0) throw PrecisionLoss("cancellation exceeds tracked digits");
    long j = int_valuation(s, Int(f_->p));
    return truncated(f_, v + j, s / f_->p_pow(static_cast<int>(j)), avail - static_cast<int>(j));
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
    if (!f_ || !o.f_ || f_->p != o.f_->p) throw ContextMismatch();
    if (zero_ || o.zero_) return zero(f_);
    if (exact_ && o.exact_) return from_rational(f_, *exact_ * *o.exact_);
    int kn = std::min(known_digits(), o.known_digits());
    Int mod = f_->p_pow(kn);
    return truncated(f_, valuation() + o.valuation(), mod_positive(unit_mod(kn) * o.unit_mod(kn), mod), kn);
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const {
    if (!f_ || !o.f_ || f_->p != o.f_->p) throw ContextMismatch();
    if (o.zero_) throw DivisionByZero();
    if (zero_) return zero(f_);
    if (exact_ && o.exact_) return from_rational(f_, *exact_ / *o.exact_);
    int kn = std::min(known_digits(), o.known_digits());
    Int mod = f_->p_pow(kn);
    Int inv = mod_inverse(o.unit_mod(kn), mod);
    return truncated(f_, valuation() - o.valuation(), mod_positive(unit_mod(kn) * inv, mod), kn);
}

bool PadicNumber::operator==(const PadicNumber& o) const {
    if (!f_ || !o.f_ || f_->p != o.f_->p) throw ContextMismatch();
    if (zero_ || o.zero_) return zero_ == o.zero_;
    if (exact_ && o.exact_ && *exact_ == *o.exact_) return true;
    if (valuation() != o.valuation()) return false;
    int kn = std::min(known_digits(), o.known_digits());
    return unit_mod(kn) == o.unit_mod(kn);
}

PadicNumber PadicNumber::pow_int(long e) const {
    if (e == 0) return from_long(f_, 1);
    if (zero_) {
        if (e < 0) throw DivisionByZero();
        return *this;
    }
    PadicNumber base = e > 0 ? *this : from_long(f_, 1) / *this;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    PadicNumber acc = from_long(f_, 1);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

int PadicNumber::legendre_of_unit() const {
    if (zero_) throw ZeroInput();
    Int u = unit_mod(1);
    return mpz_legendre(u.get_mpz_t(), Int(f_->p).get_mpz_t());
}

SquareClass PadicNumber::square_class() const {
    if (zero_) throw ZeroInput();
    bool odd = (valuation() % 2 + 2) % 2 == 1;
    bool nonres = legendre_of_unit() == -1;
    if (!odd && !nonres) return SquareClass::One;
    if (!odd && nonres) return SquareClass::U;
    if (odd && !nonres) return SquareClass::Pi;
    return SquareClass::UPi;
}

bool PadicNumber::is_square() const { return !zero_ && square_class() == SquareClass::One; }

PadicNumber PadicNumber::sqrt() const {
    if (zero_) return *this;
    if (square_class() != SquareClass::One) throw Error("element is not a square");
    if (exact_) {
        auto r = rat_sqrt_exact(*exact_);
        if (r) return from_rational(f_, *r);
    }
    long hv = valuation() / 2;
    int kn = known_digits();
    Int mod = f_->p_pow(kn);
    Int u = unit_mod(kn);
    // root mod p by scan (p is small), then Newton lifting.
    Int p(f_->p);
    Int r0 = 0;
    Int up = mod_positive(u, p);
    for (long c = 1; c < f_->p; ++c) {
        if (mod_positive(Int(c) * c, p) == up) {
            r0 = c;
            break;
        }
    }
    if (r0 == 0) throw Error("unit square root not found mod p");
    Int r = r0;
    Int m = p;
    while (m < mod) {
        m = m * m;
        if (m > mod) m = mod;
        Int inv2r = mod_inverse(mod_positive(2 * r, m), m);
        r = mod_positive(r - (mod_positive(r * r, m) - mod_positive(u, m)) * inv2r, m);
    }
    // return the exact integer representative of the lift: arithmetic stays
    // exact and agreement is decided at the tracked precision
    return from_rational(f_, Rat(r) * rat_pow(Rat(f_->p), hv));
}

std::string PadicNumber::str() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << f_->p << "^" << valuation() << " * (" << unit_mod(known_digits()).get_str() << " mod "
       << f_->p << "^" << known_digits() << ")";
    return os.str();
}

PadicNumber square_class_rep(FieldPtr f, SquareClass c) {
    switch (c) {
        case SquareClass::One: return PadicNumber::from_long(f, 1);
        case SquareClass::U: return PadicNumber::from_long(f, f->nonresidue());
        case SquareClass::Pi: return PadicNumber::from_long(f, f->p);
        case SquareClass::UPi: return PadicNumber::from_long(f, f->nonresidue() * f->p);
    }
    throw Error("bad square class");
}

SquareClass square_class_of(const PadicNumber& a) { return a.square_class(); }

int hilbert_symbol(const PadicNumber& a, const PadicNumber& b) {
    if (a.is_zero() || b.is_zero()) throw ZeroInput();
    long al = a.valuation(), bl = b.valuation();
    int lu = a.legendre_of_unit(), lv = b.legendre_of_unit();
    long p = a.field()->p;
    // (a,b) = (-1)^{alpha beta (p-1)/2} * leg(u)^beta * leg(v)^alpha
    int sign = 1;
    if ((al % 2 != 0) && (bl % 2 != 0) && ((p - 1) / 2) % 2 != 0) sign = -sign;
    if (bl % 2 != 0 && lu == -1) sign = -sign;
    if (al % 2 != 0 && lv == -1) sign = -sign;
    return sign;
}

int hilbert_symbol_classes(FieldPtr f, SquareClass a, SquareClass b) {
    PadicNumber ra = square_class_rep(f, a);
    PadicNumber rb = square_class_rep(f, b);
    return hilbert_symbol(ra, rb);
}

Rat haar_volume(const FieldPtr& f, int level) { return rat_pow(Rat(f->p), -level); }

AdditiveCharacter::AdditiveCharacter(FieldPtr f, PadicNumber twist) : f_(std::move(f)), t_(std::move(twist)) {
    if (t_.is_zero()) throw ZeroInput();
}

AdditiveCharacter AdditiveCharacter::base(FieldPtr f) {
    auto one = PadicNumber::from_long(f, 1);
    return AdditiveCharacter(std::move(f), one);
}

AdditiveCharacter AdditiveCharacter::twisted(const PadicNumber& s) const {
    return AdditiveCharacter(f_, t_ * s);
}

ExactScalar AdditiveCharacter::eval(const ContextPtr& ctx, const PadicNumber& x) const {
    if (ctx->p() != f_->p) throw ContextMismatch();
    if (x.is_zero()) return ExactScalar::one(ctx);
    PadicNumber tx = t_ * x;
    if (tx.is_zero()) return ExactScalar::one(ctx);
    long v = tx.valuation();
    if (v >= 0) return ExactScalar::one(ctx);
    long m = -v;
    if (m > ctx->k()) throw LevelOverflow();
    Int e = tx.unit_mod(static_cast<int>(m));
    // zeta_{p^m}^e = zeta_{p^k}^{e * p^{k-m}}
    Int scale = int_pow(f_->p, static_cast<unsigned long>(ctx->k() - m));
    return ExactScalar::zeta_pk(ctx, e * scale);
}

}  // namespace thetalift
