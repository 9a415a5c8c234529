#pragma once

#include "rydat/half_integer.hpp"
#include "rydat/states.hpp"

// Wigner 3j/6j symbols and the angular factors that connect radial integrals,
// fine-structure reduced dipole elements and hyperfine transition dipoles.
//
// Phase conventions (fixed here, used everywhere else):
//  * Condon-Shortley phases throughout; spherical basis d_q with
//    d_{+-1} = -+(d_x +- i d_y)/sqrt(2).
//  * Wigner-Eckart in the 3j form,
//      <j' m'|T^1_q|j m> = (-1)^(j'-m') (j' 1 j; -m' q m) <j'||T^1||j>,
//    which makes |<a||d||b>| = |<b||d||a>|.
//  * reduced_j_factor is signed so the hydrogen 1s_1/2 -> 2p_3/2 reduced
//    element is positive.
//  * stretched_hyperfine_factor relates a hyperfine transition dipole to the
//    lower-state-normalised reduced element D = <J'||d||J>/sqrt(2J+1); for
//    the sigma+ ladder used in rubidium AT spectroscopy
//    (5P_3/2 F=3 mF=3 -> nD_5/2 F=4 mF=4) it equals +sqrt(2/3).
//
// The Racah sums are evaluated in exact integer/rational arithmetic; the one
// square root is taken after assembling the squared value as a single exact
// rational, so symbols related by symmetry agree bit-for-bit.

namespace rydat {

/// Wigner 3j symbol. Returns 0 for any coupling violating the triangle or
/// projection rules (by convention, never throws).
double wigner3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger m1, HalfInteger m2, HalfInteger m3);

/// Wigner 6j symbol. Returns 0 on any triad violation.
double wigner6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger j4, HalfInteger j5, HalfInteger j6);

/// Reduced matrix element <l||C^(1)||l'> of the rank-1 spherical tensor.
/// Zero unless |l-l'| = 1.
double reduced_orbital_element(int l, int lp);

/// Fine-structure angular factor: <n l j||d||n' l' j'> = factor * <nl|r|n'l'>.
/// Throws SelectionRuleError unless |l-l'| = 1.
double reduced_j_factor(int l, HalfInteger j, int lp, HalfInteger jp);

/// A hyperfine dipole transition |J I F m_F> -> |J' I F' m_F'> driven by one
/// photon of polarisation q (spherical component: +1 sigma+, 0 pi, -1 sigma-).
struct HyperfineTransition {
    RydbergState lower;      // must carry F and m_F
    RydbergState upper;      // must carry F and m_F
    int q = +1;
    HalfInteger nuclear_spin;  // I, e.g. 3/2 for 87Rb
};

/// Coefficient c with mu(transition) = c * D(J -> J'), where
/// D = <J'||d||J>/sqrt(2J+1) is the lower-normalised reduced element.
/// Returns 0 when |F-F'| > 1 (dipole-forbidden); throws SelectionRuleError
/// when m_F' != m_F + q or the states carry no hyperfine numbers.
double stretched_hyperfine_factor(const HyperfineTransition& t);

} // namespace rydat
