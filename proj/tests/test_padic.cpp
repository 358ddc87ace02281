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

#include <doctest.h>

#include <random>

#include "thetalift/errors.hpp"
#include "thetalift/padic.hpp"

using namespace thetalift;

namespace {

// Brute-force Hilbert oracle: (a,b) = +1 iff z^2 = a x^2 + b y^2 has a
// primitive solution over Z/p^6. A primitive triple has a unit coordinate and
// the equation is homogeneous, so it is enough to scan the three scaled forms
// x = 1, y = 1 and z = 1.
int hilbert_oracle_fast(long p, long a, long b) {
    long m = 1;
    for (int i = 0; i < 6; ++i) m *= p;
    auto norm = [&](long v) { return ((v % m) + m) % m; };
    long am = norm(a), bm = norm(b);
    std::vector<char> is_sq(m, 0), a_sq(m, 0), b_sq(m, 0);
    for (long t = 0; t < m; ++t) {
        long t2 = static_cast<long>((__int128(t) * t) % m);
        is_sq[t2] = 1;
        a_sq[static_cast<long>((__int128(am) * t2) % m)] = 1;
        b_sq[static_cast<long>((__int128(bm) * t2) % m)] = 1;
    }
    for (long y = 0; y < m; ++y) {  // x = 1: z^2 = a + b y^2
        if (is_sq[static_cast<long>((am + __int128(bm) * y * y) % m)]) return 1;
    }
    for (long x = 0; x < m; ++x) {  // y = 1: z^2 = a x^2 + b
        if (is_sq[static_cast<long>((bm + __int128(am) * x * x) % m)]) return 1;
    }
    for (long x = 0; x < m; ++x) {  // z = 1: 1 - a x^2 = b y^2
        if (b_sq[norm(1 - static_cast<long>((__int128(am) * x * x) % m))]) return 1;
    }
    return -1;
}

}  // namespace

TEST_CASE("padic arithmetic basics") {
    auto f = FieldConfig::create(3, 8);
    auto one = PadicNumber::from_long(f, 1);
    auto three = PadicNumber::from_long(f, 3);

    SUBCASE("geometric series 1/(1-3)") {
        auto x = one / (one - three);
        CHECK(x.valuation() == 0);
        // 1/(1-3) = -1/2; its 3-adic digits are 1 + 3 + 9 + ...
        Int expected = 0;
        for (int i = 0; i < 5; ++i) expected += int_pow(3, i);
        CHECK(mod_positive(x.unit_mod(5), int_pow(3, 5)) == expected);
    }
    SUBCASE("div(1, 3)") {
        auto x = one / three;
        CHECK(x.valuation() == -1);
        CHECK(x.unit_mod(1) == 1);
    }
    SUBCASE("add(1, -1) is exactly zero") {
        auto x = one + (-one);
        CHECK(x.is_zero());
    }
    SUBCASE("division by zero") {
        CHECK_THROWS_AS(one / PadicNumber::zero(f), DivisionByZero);
    }
    SUBCASE("truncated cancellation raises PrecisionLoss") {
        auto t = PadicNumber::truncated(f, 0, Int(1), 8);
        CHECK_THROWS_AS(t - t, PrecisionLoss);
    }
}

TEST_CASE("square classes") {
    auto f = FieldConfig::create(3, 6);
    CHECK(PadicNumber::from_long(f, 12).square_class() == SquareClass::Pi);  // 12 = 4*3
    CHECK(PadicNumber::from_long(f, 1).square_class() == SquareClass::One);
    CHECK(PadicNumber::from_long(f, 2).square_class() == SquareClass::U);
    CHECK_THROWS_AS(PadicNumber::zero(f).square_class(), ZeroInput);

    // constant on (F^x)^2-orbits
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(1, 400);
    for (int i = 0; i < 100; ++i) {
        Rat a(d(rng), d(rng));
        a.canonicalize();
        Rat r(d(rng), d(rng));
        r.canonicalize();
        auto x = PadicNumber::from_rational(f, a);
        auto y = PadicNumber::from_rational(f, a * r * r);
        CHECK(x.square_class() == y.square_class());
    }
}

TEST_CASE("hilbert symbol against brute-force oracle, all class pairs, p in {3,5,7}") {
    for (long p : {3L, 5L, 7L}) {
        auto f = FieldConfig::create(p, 6);
        SquareClass cls[4] = {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi};
        for (auto ca : cls)
            for (auto cb : cls) {
                auto a = square_class_rep(f, ca);
                auto b = square_class_rep(f, cb);
                int lib = hilbert_symbol(a, b);
                int oracle = hilbert_oracle_fast(p, a.exact_value().get_num().get_si(),
                                                 b.exact_value().get_num().get_si());
                CAPTURE(p);
                CAPTURE(square_class_name(ca));
                CAPTURE(square_class_name(cb));
                CHECK(lib == oracle);
            }
    }
}

TEST_CASE("hilbert symbol spec examples") {
    auto f = FieldConfig::create(3, 6);
    auto one = PadicNumber::from_long(f, 1);
    auto two = PadicNumber::from_long(f, 2);
    auto three = PadicNumber::from_long(f, 3);
    CHECK(hilbert_symbol(one, two) == 1);
    CHECK(hilbert_symbol(one, three) == 1);
    CHECK(hilbert_symbol(three, three) == -1);
    CHECK(hilbert_symbol(two, three) == -1);
}

TEST_CASE("hilbert symbol algebra") {
    for (long p : {3L, 5L, 7L}) {
        auto f = FieldConfig::create(p, 6);
        SquareClass cls[4] = {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi};
        for (auto ca : cls)
            for (auto cb : cls) {
                // symmetry
                CHECK(hilbert_symbol_classes(f, ca, cb) == hilbert_symbol_classes(f, cb, ca));
                // bimultiplicativity
                for (auto cc : cls) {
                    int lhs = hilbert_symbol_classes(f, square_class_mul(ca, cb), cc);
                    int rhs = hilbert_symbol_classes(f, ca, cc) * hilbert_symbol_classes(f, cb, cc);
                    CHECK(lhs == rhs);
                }
                // (a, -a) = 1
                auto a = square_class_rep(f, ca);
                CHECK(hilbert_symbol(a, -a) == 1);
            }
    }
}

TEST_CASE("additive character values") {
    auto f = FieldConfig::create(3, 8);
    auto ctx = ScalarContext::create(3, 2);
    auto psi = AdditiveCharacter::base(f);

    CHECK(psi.eval(ctx, PadicNumber::from_rational(f, Rat(1, 3))) == ExactScalar::zeta_pk(ctx, 3));
    CHECK(psi.eval(ctx, PadicNumber::from_long(f, 1)) == ExactScalar::one(ctx));
    CHECK(psi.eval(ctx, PadicNumber::from_rational(f, Rat(2, 9))) == ExactScalar::zeta_pk(ctx, 2));
    CHECK_THROWS_AS(psi.eval(ctx, PadicNumber::from_rational(f, Rat(1, 27))), LevelOverflow);

    SUBCASE("homomorphism on 500 random pairs within level") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<long> num(-40, 40);
        for (int i = 0; i < 500; ++i) {
            Rat x(num(rng), 9), y(num(rng), 9);
            x.canonicalize();
            y.canonicalize();
            auto px = PadicNumber::from_rational(f, x);
            auto py = PadicNumber::from_rational(f, y);
            CHECK(psi.eval(ctx, px + py) == psi.eval(ctx, px) * psi.eval(ctx, py));
        }
    }
    SUBCASE("twists") {
        auto psi2 = psi.twisted(PadicNumber::from_long(f, 3));
        CHECK(psi2.conductor() == -1);
        CHECK(psi2.eval(ctx, PadicNumber::from_rational(f, Rat(1, 3))) == ExactScalar::one(ctx));
    }
}

TEST_CASE("haar volumes") {
    auto f = FieldConfig::create(3, 6);
    CHECK(haar_volume(f, 0) == Rat(1));
    CHECK(haar_volume(f, 1) == Rat(1, 3));
    CHECK(haar_volume(f, 2) == Rat(1, 9));
}
