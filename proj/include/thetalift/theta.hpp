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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetalift/weil.hpp"

namespace thetalift {

// The theta lift pi_{theta,psi} acting on S(E)_theta, extended to GL(2,F)_N
// and induced to GL(2,F). Carries the operationally resolved constants.
class ThetaLiftRep {
  public:
    static ThetaLiftRep create(AdmissiblePair pair, AdditiveCharacter psi, ContextPtr ctx,
                               size_t cell_cap = 200000);

    const AdmissiblePair& pair() const { return pair_; }
    const QuadPtr& ext() const { return pair_.E; }
    const CharacterEOne& theta() const { return theta_; }
    const AdditiveCharacter& psi() const { return psi_; }
    const ContextPtr& context() const { return ctx_; }
    const ExactScalar& gamma_delta() const { return gamma_delta_; }
    const ExactScalar& selfdual_vol() const { return selfdual_; }
    const PadicNumber& eta() const { return eta_; }
    size_t cell_cap() const { return cap_; }
    // true when gamma(Delta, psi) agrees with gamma(1/2 psi) gamma(Delta/2 psi)^{-1}-free
    // product-of-Weil-indices candidate (recorded in the card)
    bool gamma_matches_product_formula() const { return gamma_product_match_; }

    // pi_{theta,psi}(g) for g in SL(2,F); validates isotypy when requested.
    SchwartzFunction act(const Mat2& g, const SchwartzFunction& phi, bool validate = false) const;
    SchwartzFunction act_gen(const SL2Gen& g, const SchwartzFunction& phi) const;
    // central element diag(x,x)
    SchwartzFunction act_center(const PadicNumber& x, const SchwartzFunction& phi) const;
    // diag(gamma, 1) with gamma a norm; zeta-independence checked when requested
    SchwartzFunction act_norm_diag(const PadicNumber& gamma, const SchwartzFunction& phi,
                                   bool check_zeta_independence = false) const;
    // any g in GL(2,F)_N via the normal form diag(det g, 1) g'
    SchwartzFunction act_gl2N(const Mat2& g, const SchwartzFunction& phi) const;

    // conjugate action pi^t(A) = pi(T A T^{-1}), T = diag(t, 1)
    SchwartzFunction act_conjugate(const PadicNumber& t, const Mat2& g,
                                   const SchwartzFunction& phi) const;

    // a nonzero theta-isotypic probe supported near the unit sphere
    SchwartzFunction isotypic_probe(int level = -1) const;

  private:
    AdmissiblePair pair_;
    CharacterEOne theta_;
    AdditiveCharacter psi_;
    ContextPtr ctx_;
    ExactScalar gamma_delta_;
    ExactScalar selfdual_;
    PadicNumber eta_;
    size_t cap_ = 200000;
    bool gamma_product_match_ = false;
};

enum class GL2Class { Central, InGL2N, Outside };
GL2Class classify_gl2(const QuadPtr& E, const Mat2& g);

// Two-coset Mackey model of Ind_{GL2N}^{GL2} pi.
struct InducedVector {
    SchwartzFunction phi1, phi2;
};
InducedVector induced_act(const ThetaLiftRep& rep, const Mat2& g, const InducedVector& v);

// ---------------------------------------------------------------------------
// Truncated intertwiner certificates
// ---------------------------------------------------------------------------

// E^1-orbit of a lattice cell, keyed by its complete invariants.
struct OrbitKey {
    long level;    // lattice exponent in uniformizer powers of E
    long v;        // v_E of the center (level for the zero cell)
    long norm_res; // unit residue of N(c) p^{-v_F(N c)} at the orbit precision
    bool operator<(const OrbitKey& o) const {
        return std::tie(level, v, norm_res) < std::tie(o.level, o.v, o.norm_res);
    }
    bool operator==(const OrbitKey& o) const {
        return level == o.level && v == o.v && norm_res == o.norm_res;
    }
};

struct IntertwinerCertificate {
    int m, n;                       // requested truncation
    std::vector<std::string> generators;
    long domain_orbits = 0;
    long codomain_orbits = 0;
    long survivors = 0;             // unknowns left after the unipotent spectra match
    long equations = 0;
    long solution_dim = 0;
    bool zero_solution() const { return solution_dim == 0; }
};

IntertwinerCertificate truncated_intertwiner_solve(const ThetaLiftRep& repA, const ThetaLiftRep& repB,
                                                   int m, int n);

// ---------------------------------------------------------------------------
// psi-independence witnesses
// ---------------------------------------------------------------------------

struct PsiWitness {
    // validated exact intertwiner between Ind pi_{Theta,psi} and Ind pi_{Theta,psi'}
    // kind: "identity" (psi' = psi), "scaling" (psi' = psi_{t}, t a norm),
    //       "swap" (psi' = psi_eta, eta the fixed non-norm)
    std::string kind;
    PadicNumber t;
    int generators_checked = 0;
    int vectors_checked = 0;
};

PsiWitness psi_independence_witness(const ThetaLiftRep& repA, const PadicNumber& t,
                                    int spanning_vectors = 12);

// ---------------------------------------------------------------------------
// Representation card
// ---------------------------------------------------------------------------

struct RepresentationCard {
    long p;
    std::string delta_class;
    bool ramified;
    int theta_level;
    long theta_order;
    std::string psi_class;  // square class of the twist
    std::vector<std::pair<std::string, RootOfUnity>> central_character;  // per square class
    bool central_matches_det;  // equals kappa * Theta|_F on all sampled classes
    IntertwinerCertificate irreducibility;       // vs the eta-twist at (2,2)
    std::optional<IntertwinerCertificate> persistence;  // same at (3,3)
    PsiWitness psi_norm_case;
    PsiWitness psi_swap_case;
    ExactScalar gamma_delta_psi;
    ExactScalar selfdual_vol;
    bool gamma_product_match;
};

RepresentationCard representation_card(const AdmissiblePair& pair, const AdditiveCharacter& psi,
                                       const ContextPtr& ctx, bool persist_3 = true);

}  // namespace thetalift
