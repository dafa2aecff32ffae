#pragma once

#include <vector>

#include "qtp/statevec.hpp"

namespace qtp {

/*
 * Generalized Bell machinery for one pair of d-level systems.
 *
 * The d^2 single-qudit Weyl operators combine a modular shift (l) with a
 * discrete Fourier phase (k):
 *   V^(kl)|j> = exp(2*pi*i*j*k/d) |(j+l) mod d>
 * They are unitary as written (no 1/sqrt(d) factor). U^(kl) is defined as
 * the transpose of V^(kl); that is the unique single-qudit operator with
 *   U^(kl) on qudit 0 of |Phi00> == V^(kl) on qudit 1 of |Phi00>
 * which is the identity the teleportation collapse rests on.
 */

// Label (k, l) of a generalized Bell state; both indices in [0, d).
struct BellLabel {
    int k = 0;
    int l = 0;

    friend bool operator==(const BellLabel& a, const BellLabel& b) {
        return a.k == b.k && a.l == b.l;
    }
};

// (j + l) mod d for digits already in [0, d)
int mod_add(int j, int l, int d);

// V^(kl): entries V[(j+l) mod d, j] = exp(2*pi*i*j*k/d), zero elsewhere
LocalOperator weyl_v(int d, BellLabel label);

// U^(kl) := transpose of V^(kl)
LocalOperator weyl_u(int d, BellLabel label);

// |Phi00> = sum_j |jj> / sqrt(d), a maximally entangled pair
StateVector phi00(int d);

// |Phi_kl> = V^(kl) applied to qudit 1 of |Phi00>
StateVector gbs_state(int d, BellLabel label);

// all d^2 Bell states in row-major (k, l) order; an orthonormal basis
std::vector<StateVector> phi_basis(int d);

}  // namespace qtp
