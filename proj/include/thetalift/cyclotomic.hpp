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

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "thetalift/rational.hpp"

namespace thetalift {

class ScalarContext;
using ContextPtr = std::shared_ptr<const ScalarContext>;

// Arithmetic context for the cyclotomic field Q(zeta_M), M = 8 * p^k, p an odd
// prime. Internally elements live on the tensor basis
//   { zeta8^i * zeta_{p^k}^j : 0 <= i < 4, 0 <= j < phi(p^k) },
// which multiplies by exponent arithmetic plus two local rewrite rules
// (zeta8^4 = -1 and the p^k-th cyclotomic relation). The spec's power basis
// {zeta_M^e : e < phi(M)} is used for serialization only.
class ScalarContext : public std::enable_shared_from_this<ScalarContext> {
  public:
    static ContextPtr create(long p, int k);

    long p() const { return p_; }
    int k() const { return k_; }
    const Int& M() const { return M_; }
    long pk() const { return pk_; }          // p^k
    long phi_pk() const { return phi_pk_; }  // phi(p^k)
    long phi_M() const { return 4 * phi_pk_; }

    bool same(const ScalarContext& o) const { return p_ == o.p_ && k_ == o.k_; }

    // Cached change-of-basis data for power-basis serialization. Built lazily;
    // guarded to phi(M) <= 1024 (all CLI-visible contexts are far smaller).
    const std::vector<std::vector<Rat>>& power_basis_inverse() const;

  private:
    ScalarContext(long p, int k);
    long p_;
    int k_;
    long pk_;
    long phi_pk_;
    Int M_;
    mutable std::vector<std::vector<Rat>> pb_inv_;  // tensor index -> power coords
};

// An element of Q(zeta_M) with exact rational coefficients, canonical on the
// tensor basis. Zero test is emptiness of the term map.
class ExactScalar {
  public:
    ExactScalar() = default;
    explicit ExactScalar(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    ExactScalar(ContextPtr ctx, const Rat& rational);

    static ExactScalar zero(ContextPtr ctx) { return ExactScalar(std::move(ctx)); }
    static ExactScalar one(ContextPtr ctx) { return ExactScalar(std::move(ctx), Rat(1)); }
    static ExactScalar from_rational(ContextPtr ctx, const Rat& r) { return ExactScalar(std::move(ctx), r); }
    // zeta_M^e, e arbitrary (reduced mod M).
    static ExactScalar root_of_unity(ContextPtr ctx, const Int& e);
    // zeta8^i
    static ExactScalar zeta8(ContextPtr ctx, long i);
    // zeta_{p^k}^j
    static ExactScalar zeta_pk(ContextPtr ctx, const Int& j);
    // Root of order d (requires d | M): zeta_d^e.
    static ExactScalar root_of_order(ContextPtr ctx, long d, long e);
    // The normalized Gauss-sum square root of p (positive real embedding).
    static ExactScalar sqrt_p(ContextPtr ctx);
    // sqrt(r * p^j) for positive rational r*p^j whose unit part is a perfect
    // square; used for Weil-index magnitudes and half-integral volumes.
    static ExactScalar sqrt_positive(ContextPtr ctx, const Rat& value);

    const ContextPtr& context() const { return ctx_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    Rat rational_value() const;  // throws if not rational
    bool is_monomial() const { return terms_.size() == 1; }
    size_t term_count() const { return terms_.size(); }

    ExactScalar operator-() const;
    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator*(const ExactScalar& o) const;
    ExactScalar operator/(const ExactScalar& o) const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar operator*(const Rat& r) const;
    ExactScalar inverse() const;
    ExactScalar conjugate() const;  // zeta_M -> zeta_M^{-1}
    ExactScalar pow(long e) const;

    bool operator==(const ExactScalar& o) const;
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    // Re-express in a context with the same p and k' >= k.
    ExactScalar embed(const ContextPtr& target) const;
    // Opposite direction; throws if the element does not live in the subfield.
    ExactScalar compress(const ContextPtr& target) const;

    // Power-basis coefficient vector of length phi(M) (spec serialization).
    std::vector<Rat> power_basis_coeffs() const;
    static ExactScalar from_power_basis(ContextPtr ctx, const std::vector<Rat>& coeffs);

    std::string str() const;  // debug form, deterministic

    // Term iteration (key = i8 * 2^40 + j on the tensor basis).
    const std::map<uint64_t, Rat>& terms() const { return terms_; }
    void add_term(long i8, const Int& j, const Rat& coeff);  // reduces and accumulates

  private:
    void check_ctx(const ExactScalar& o) const;
    ExactScalar general_inverse() const;

    ContextPtr ctx_;
    std::map<uint64_t, Rat> terms_;
};

inline ExactScalar operator*(const Rat& r, const ExactScalar& x) { return x * r; }

}  // namespace thetalift
