#include "rydat/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rydat/errors.hpp"

namespace rydat {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
    // n is always small here (a few times the largest j); no table needed.
    cpp_int f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool triangle_ok(int ta, int tb, int tc) {
    // arguments are twice-values; perimeter must be an even twice-value
    if ((ta + tb + tc) % 2 != 0) return false;
    return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double signed_sqrt_of(const cpp_rational& squared, int sign) {
    if (squared == 0) return 0.0;
    const double v = std::sqrt(squared.convert_to<double>());
    return sign < 0 ? -v : v;
}

} // namespace

double wigner3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger m1, HalfInteger m2, HalfInteger m3) {
    const int tj1 = j1.twice(), tj2 = j2.twice(), tj3 = j3.twice();
    const int tm1 = m1.twice(), tm2 = m2.twice(), tm3 = m3.twice();

    if (tj1 < 0 || tj2 < 0 || tj3 < 0) return 0.0;
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (!triangle_ok(tj1, tj2, tj3)) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    // each j_i - m_i must be an integer
    if ((tj1 - tm1) % 2 || (tj2 - tm2) % 2 || (tj3 - tm3) % 2) return 0.0;

    // Racah sum, Sum_t (-1)^t / prod of factorials; all arguments integers.
    const int jpj_m = (tj1 + tj2 - tj3) / 2;   // j1+j2-j3
    const int j1mm1 = (tj1 - tm1) / 2;         // j1-m1
    const int j2pm2 = (tj2 + tm2) / 2;         // j2+m2
    const int A = (tj3 - tj2 + tm1) / 2;       // j3-j2+m1  (t offset)
    const int B = (tj3 - tj1 - tm2) / 2;       // j3-j1-m2  (t offset)

    const int tmin = std::max({0, -A, -B});
    const int tmax = std::min({jpj_m, j1mm1, j2pm2});
    if (tmin > tmax) return 0.0;

    cpp_rational sum = 0;
    for (int t = tmin; t <= tmax; ++t) {
        cpp_int den = factorial(t) * factorial(jpj_m - t) * factorial(j1mm1 - t) *
                      factorial(j2pm2 - t) * factorial(A + t) * factorial(B + t);
        cpp_rational term(1, den);
        sum += (t % 2 == 0) ? term : -term;
    }
    if (sum == 0) return 0.0;

    // squared prefactor: triangle coefficient times projection factorials
    cpp_rational pre(factorial((tj1 + tj2 - tj3) / 2) * factorial((tj1 - tj2 + tj3) / 2) *
                         factorial((-tj1 + tj2 + tj3) / 2),
                     factorial((tj1 + tj2 + tj3) / 2 + 1));
    pre *= factorial((tj1 + tm1) / 2) * factorial((tj1 - tm1) / 2);
    pre *= factorial((tj2 + tm2) / 2) * factorial((tj2 - tm2) / 2);
    pre *= factorial((tj3 + tm3) / 2) * factorial((tj3 - tm3) / 2);

    const cpp_rational squared = pre * sum * sum;
    int sign = sum < 0 ? -1 : 1;
    if (((tj1 - tj2 - tm3) / 2) % 2 != 0) sign = -sign;  // (-1)^(j1-j2-m3)
    return signed_sqrt_of(squared, sign);
}

double wigner6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger j4, HalfInteger j5, HalfInteger j6) {
    const int t1 = j1.twice(), t2 = j2.twice(), t3 = j3.twice();
    const int t4 = j4.twice(), t5 = j5.twice(), t6 = j6.twice();

    if (t1 < 0 || t2 < 0 || t3 < 0 || t4 < 0 || t5 < 0 || t6 < 0) return 0.0;
    if (!triangle_ok(t1, t2, t3) || !triangle_ok(t1, t5, t6) ||
        !triangle_ok(t4, t2, t6) || !triangle_ok(t4, t5, t3))
        return 0.0;

    const int a1 = (t1 + t2 + t3) / 2;
    const int a2 = (t1 + t5 + t6) / 2;
    const int a3 = (t4 + t2 + t6) / 2;
    const int a4 = (t4 + t5 + t3) / 2;
    const int b1 = (t1 + t2 + t4 + t5) / 2;
    const int b2 = (t2 + t3 + t5 + t6) / 2;
    const int b3 = (t3 + t1 + t6 + t4) / 2;

    const int tmin = std::max({a1, a2, a3, a4});
    const int tmax = std::min({b1, b2, b3});
    if (tmin > tmax) return 0.0;

    cpp_rational sum = 0;
    for (int t = tmin; t <= tmax; ++t) {
        cpp_int den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) *
                      factorial(t - a4) * factorial(b1 - t) * factorial(b2 - t) *
                      factorial(b3 - t);
        cpp_rational term(factorial(t + 1), den);
        sum += (t % 2 == 0) ? term : -term;
    }
    if (sum == 0) return 0.0;

    auto tri = [](int ta, int tb, int tc) {
        return cpp_rational(factorial((ta + tb - tc) / 2) * factorial((ta - tb + tc) / 2) *
                                factorial((-ta + tb + tc) / 2),
                            factorial((ta + tb + tc) / 2 + 1));
    };
    const cpp_rational pre =
        tri(t1, t2, t3) * tri(t1, t5, t6) * tri(t4, t2, t6) * tri(t4, t5, t3);

    const cpp_rational squared = pre * sum * sum;
    return signed_sqrt_of(squared, sum < 0 ? -1 : 1);
}

double reduced_orbital_element(int l, int lp) {
    if (l < 0 || lp < 0) throw DomainError("orbital quantum numbers must be non-negative");
    const HalfInteger zero(0);
    const double threej = wigner3j(HalfInteger(l), HalfInteger(1), HalfInteger(lp),
                                   zero, zero, zero);
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(double((2 * l + 1) * (2 * lp + 1))) * threej;
}

double reduced_j_factor(int l, HalfInteger j, int lp, HalfInteger jp) {
    if (std::abs(l - lp) != 1)
        throw SelectionRuleError("dipole radial channel requires |l - l'| = 1, got l=" +
                                 std::to_string(l) + " l'=" + std::to_string(lp));
    const HalfInteger s = HalfInteger::from_twice(1);
    const double sixj = wigner6j(HalfInteger(l), HalfInteger(lp), HalfInteger(1),
                                 jp, j, s);
    // (-1)^(l' + s + j); l'+s+j is an integer for valid couplings
    const int phase_twice = 2 * lp + s.twice() + j.twice();
    const double sign = (phase_twice / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::sqrt(double((j.twice() + 1) * (jp.twice() + 1))) * sixj *
           reduced_orbital_element(l, lp);
}

double stretched_hyperfine_factor(const HyperfineTransition& t) {
    if (!t.lower.F || !t.lower.m_F || !t.upper.F || !t.upper.m_F)
        throw SelectionRuleError("hyperfine factor needs F and m_F on both states");
    if (t.q < -1 || t.q > 1)
        throw DomainError("photon polarisation q must be in {-1, 0, +1}");

    const HalfInteger F = *t.lower.F, mF = *t.lower.m_F;
    const HalfInteger Fp = *t.upper.F, mFp = *t.upper.m_F;
    const HalfInteger J = t.lower.j, Jp = t.upper.j, I = t.nuclear_spin;

    if (mFp.twice() != mF.twice() + 2 * t.q)
        throw SelectionRuleError("projection mismatch: m_F' must equal m_F + q");
    if (std::abs(Fp.twice() - F.twice()) > 2) return 0.0;  // |F - F'| <= 1
    if (Fp.twice() == 0 && F.twice() == 0) return 0.0;

    // m_F structure: one 3j
    const double threej = wigner3j(Fp, HalfInteger(1), F,
                                   -mFp, HalfInteger(t.q), mF);
    // F recoupling with I spectator: one 6j
    const double sixj = wigner6j(Jp, Fp, I, F, J, HalfInteger(1));

    // phases: (-1)^(F' - m_F') from Wigner-Eckart, (-1)^(J' + I + F + 1) from
    // the recoupling; both exponents are integers for physical couplings
    int phase_twice = (Fp.twice() - mFp.twice()) + (Jp.twice() + I.twice() + F.twice() + 2);
    const double sign = (phase_twice / 2) % 2 == 0 ? 1.0 : -1.0;

    const double norm = std::sqrt(double((F.twice() + 1) * (Fp.twice() + 1)));
    // sqrt(2J+1) converts <J'||d||J> to the lower-normalised element D
    const double to_lower_norm = std::sqrt(double(J.twice() + 1));

    return sign * threej * norm * sixj * to_lower_norm;
}

} // namespace rydat
