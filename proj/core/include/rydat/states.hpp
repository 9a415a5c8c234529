#pragma once

#include <optional>
#include <string>

#include "rydat/errors.hpp"
#include "rydat/half_integer.hpp"

namespace rydat {

/// One atomic level: n, l, j, with optional hyperfine quantum numbers.
struct RydbergState {
    int n = 1;
    int l = 0;
    HalfInteger j;                   // |l - 1/2| <= j <= l + 1/2
    std::optional<HalfInteger> F;    // total angular momentum incl. nuclear spin
    std::optional<HalfInteger> m_F;  // projection, |m_F| <= F

    RydbergState() = default;
    RydbergState(int n_, int l_, HalfInteger j_) : n(n_), l(l_), j(j_) { validate(); }
    RydbergState(int n_, int l_, HalfInteger j_, HalfInteger F_, HalfInteger mF_)
        : n(n_), l(l_), j(j_), F(F_), m_F(mF_) {
        validate();
    }

    void validate() const {
        if (n < 1) throw DomainError("principal quantum number must be >= 1");
        if (l < 0 || l >= n) throw DomainError("orbital quantum number must satisfy 0 <= l < n");
        const int tl = 2 * l;
        if (j.twice() < std::abs(tl - 1) || j.twice() > tl + 1)
            throw DomainError("j must satisfy |l - 1/2| <= j <= l + 1/2");
        if (F && !m_F) return;
        if (m_F && !F) throw DomainError("m_F given without F");
        if (F && m_F && abs(*m_F) > *F) throw DomainError("|m_F| must not exceed F");
    }

    std::string str() const {
        static const char* letters = "spdfghiklmnoq";
        std::string out = std::to_string(n);
        out += (l < 13) ? letters[l] : '?';
        out += "_" + j.str();
        if (F) out += " F=" + F->str();
        if (m_F) out += " mF=" + m_F->str();
        return out;
    }

    bool operator==(const RydbergState& o) const {
        return n == o.n && l == o.l && j == o.j;
    }
};

} // namespace rydat
