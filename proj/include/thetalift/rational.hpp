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

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "thetalift/errors.hpp"

namespace thetalift {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int int_pow(long base, unsigned long e) { return int_pow(Int(base), e); }

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0) {
        if (e < 0) throw DivisionByZero();
        return Rat(0);
    }
    Rat r(int_pow(base.get_num(), static_cast<unsigned long>(e < 0 ? -e : e)),
          int_pow(base.get_den(), static_cast<unsigned long>(e < 0 ? -e : e)));
    r.canonicalize();
    if (e < 0) r = Rat(1) / r;
    return r;
}

// p-adic valuation of a nonzero integer.
inline long int_valuation(Int x, const Int& p) {
    if (x == 0) throw ZeroInput();
    long v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        x = q;
        ++v;
    }
    return v;
}

inline long rat_valuation(const Rat& x, const Int& p) {
    if (x == 0) throw ZeroInput();
    return int_valuation(x.get_num(), p) - int_valuation(x.get_den(), p);
}

inline Int mod_positive(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("element not invertible modulo m");
    return r;
}

// Exact square root of a perfect-square rational; nullopt otherwise.
inline std::optional<Rat> rat_sqrt_exact(const Rat& x) {
    if (x < 0) return std::nullopt;
    if (x == 0) return Rat(0);
    if (mpz_perfect_square_p(x.get_num().get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(x.get_den().get_mpz_t()) == 0) return std::nullopt;
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den().get_mpz_t());
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& x) { return x.get_str(); }

}  // namespace thetalift
