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

#include "thetalift/cyclotomic.hpp"
#include "thetalift/errors.hpp"

using namespace thetalift;

namespace {

ExactScalar random_scalar(const ContextPtr& ctx, std::mt19937_64& rng, int max_terms = 4) {
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<long> e8(0, 7);
    std::uniform_int_distribution<long> ej(0, ctx->pk() - 1);
    std::uniform_int_distribution<int> nt(1, max_terms);
    ExactScalar x(ctx);
    int n = nt(rng);
    for (int i = 0; i < n; ++i) {
        Rat c(num(rng), den(rng));
        c.canonicalize();
        x.add_term(e8(rng), Int(ej(rng)), c);
    }
    return x;
}

}  // namespace

TEST_CASE("normalize: zeta8^4 + 1 = 0") {
    auto ctx = ScalarContext::create(3, 1);  // M = 24
    ExactScalar x = ExactScalar::zeta8(ctx, 4) + ExactScalar::one(ctx);
    CHECK(x.is_zero());
}

TEST_CASE("normalize: zeta3 + zeta3^2 = -1") {
    auto ctx = ScalarContext::create(3, 1);
    ExactScalar x = ExactScalar::zeta_pk(ctx, 1) + ExactScalar::zeta_pk(ctx, 2);
    CHECK(x == ExactScalar::from_rational(ctx, Rat(-1)));
}

TEST_CASE("normalize: (zeta3 - zeta3^2)^2 = -3") {
    auto ctx = ScalarContext::create(3, 1);
    ExactScalar d = ExactScalar::zeta_pk(ctx, 1) - ExactScalar::zeta_pk(ctx, 2);
    CHECK(d * d == ExactScalar::from_rational(ctx, Rat(-3)));
}

TEST_CASE("field arithmetic: inverse of 1 + zeta3") {
    auto ctx = ScalarContext::create(3, 1);
    ExactScalar a = ExactScalar::one(ctx) + ExactScalar::zeta_pk(ctx, 1);
    CHECK(a * a.inverse() == ExactScalar::one(ctx));
    CHECK((ExactScalar::one(ctx) / a) * a == ExactScalar::one(ctx));
}

TEST_CASE("field arithmetic: division by zero") {
    auto ctx = ScalarContext::create(3, 1);
    CHECK_THROWS_AS(ExactScalar::one(ctx) / ExactScalar::zero(ctx), DivisionByZero);
}

TEST_CASE("field arithmetic: zeta_M * zeta_M^{M-1} = 1") {
    auto ctx = ScalarContext::create(5, 1);  // M = 40
    ExactScalar a = ExactScalar::root_of_unity(ctx, Int(1));
    ExactScalar b = ExactScalar::root_of_unity(ctx, ctx->M() - 1);
    CHECK(a * b == ExactScalar::one(ctx));
}

TEST_CASE("conjugate: order two ring automorphism") {
    auto ctx = ScalarContext::create(3, 2);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        ExactScalar a = random_scalar(ctx, rng);
        ExactScalar b = random_scalar(ctx, rng);
        CHECK(a.conjugate().conjugate() == a);
        CHECK((a + b).conjugate() == a.conjugate() + b.conjugate());
        CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
    }
    // zeta_M^k -> zeta_M^{M-k}
    ExactScalar z = ExactScalar::root_of_unity(ctx, Int(5));
    CHECK(z.conjugate() == ExactScalar::root_of_unity(ctx, ctx->M() - 5));
    // rationals are fixed
    ExactScalar r = ExactScalar::from_rational(ctx, Rat(3, 2));
    CHECK(r.conjugate() == r);
}

TEST_CASE("sqrt_p squares to p for supported primes") {
    for (long p : {3L, 5L, 7L, 13L}) {
        auto ctx = ScalarContext::create(p, 1);
        ExactScalar s = ExactScalar::sqrt_p(ctx);
        CHECK(s * s == ExactScalar::from_rational(ctx, Rat(p)));
    }
}

TEST_CASE("sqrt_p explicit Gauss sums for p=3 and p=5") {
    {
        auto ctx = ScalarContext::create(3, 1);
        // -i (zeta3 - zeta3^2)
        ExactScalar expected =
            (ExactScalar::zeta8(ctx, 6)) * (ExactScalar::zeta_pk(ctx, 1) - ExactScalar::zeta_pk(ctx, 2));
        CHECK(ExactScalar::sqrt_p(ctx) == expected);
    }
    {
        auto ctx = ScalarContext::create(5, 1);
        ExactScalar expected = ExactScalar::zeta_pk(ctx, 1) - ExactScalar::zeta_pk(ctx, 2) -
                               ExactScalar::zeta_pk(ctx, 3) + ExactScalar::zeta_pk(ctx, 4);
        CHECK(ExactScalar::sqrt_p(ctx) == expected);
    }
}

TEST_CASE("sqrt_p fixed by conjugation for p = 1 mod 4") {
    auto ctx = ScalarContext::create(5, 1);
    ExactScalar s = ExactScalar::sqrt_p(ctx);
    CHECK(s.conjugate() == s);
}

TEST_CASE("field axioms on random triples") {
    auto ctx = ScalarContext::create(3, 2);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        ExactScalar a = random_scalar(ctx, rng, 3);
        ExactScalar b = random_scalar(ctx, rng, 3);
        ExactScalar c = random_scalar(ctx, rng, 3);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
    }
}

TEST_CASE("known cyclotomic identities, M = 24 and M = 40") {
    {
        auto ctx = ScalarContext::create(3, 1);
        // Phi_24(zeta_24) = zeta^8 - zeta^4 + 1 = 0
        ExactScalar z = ExactScalar::root_of_unity(ctx, Int(1));
        CHECK((z.pow(8) - z.pow(4) + ExactScalar::one(ctx)).is_zero());
        // zeta_24^12 = -1
        CHECK(z.pow(12) == ExactScalar::from_rational(ctx, Rat(-1)));
    }
    {
        auto ctx = ScalarContext::create(5, 1);
        ExactScalar z = ExactScalar::root_of_unity(ctx, Int(1));
        // Phi_40(x) = x^16 - x^12 + x^8 - x^4 + 1
        CHECK((z.pow(16) - z.pow(12) + z.pow(8) - z.pow(4) + ExactScalar::one(ctx)).is_zero());
        CHECK(z.pow(40) == ExactScalar::one(ctx));
        CHECK_FALSE(z.pow(20) == ExactScalar::one(ctx));
    }
}

TEST_CASE("general inverse via Euclid fallback") {
    auto ctx = ScalarContext::create(5, 1);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        ExactScalar a = random_scalar(ctx, rng, 5);
        if (a.is_zero()) continue;
        CHECK(a * a.inverse() == ExactScalar::one(ctx));
    }
}

TEST_CASE("power basis round trip") {
    for (auto [p, k] : {std::pair<long, int>{3, 2}, {5, 1}, {7, 1}}) {
        auto ctx = ScalarContext::create(p, k);
        std::mt19937_64 rng(101 + p);
        for (int trial = 0; trial < 10; ++trial) {
            ExactScalar a = random_scalar(ctx, rng, 5);
            auto coeffs = a.power_basis_coeffs();
            CHECK(static_cast<long>(coeffs.size()) == ctx->phi_M());
            CHECK(ExactScalar::from_power_basis(ctx, coeffs) == a);
        }
    }
}

TEST_CASE("context embedding and compression") {
    auto small = ScalarContext::create(3, 1);
    auto big = ScalarContext::create(3, 3);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        ExactScalar a = random_scalar(small, rng);
        ExactScalar up = a.embed(big);
        CHECK(up.compress(small) == a);
    }
    ExactScalar z = ExactScalar::zeta_pk(big, 1);  // zeta_27 not in Q(zeta_24)
    CHECK_THROWS(z.compress(small));
}

TEST_CASE("sqrt_positive handles half powers of p") {
    auto ctx = ScalarContext::create(3, 1);
    ExactScalar s = ExactScalar::sqrt_positive(ctx, Rat(27, 4));
    CHECK(s * s == ExactScalar::from_rational(ctx, Rat(27, 4)));
    ExactScalar t = ExactScalar::sqrt_positive(ctx, Rat(1, 9));
    CHECK(t == ExactScalar::from_rational(ctx, Rat(1, 3)));
}
