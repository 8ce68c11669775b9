#include "chainspec/asymptotics.hpp"

#include <cmath>
#include <sstream>

namespace chainspec {

std::string AsymptoticTerm::str() const {
    std::ostringstream os;
    os << coef;
    if (power != 0.0) os << " * r^" << power;
    if (logpower != 0) os << " * (log r)^" << logpower;
    if (base != 1.0) os << " * " << base << "^r";
    return os.str();
}

std::optional<AsymptoticTerm> tail_term(const SequenceSpec& s) {
    switch (s.family) {
        case TailFamily::None: return std::nullopt;
        case TailFamily::Constant: return AsymptoticTerm{s.c, 0.0, 0, 1.0};
        case TailFamily::Power: return AsymptoticTerm{s.c, s.p, 0, 1.0};
        case TailFamily::Exponential: return AsymptoticTerm{s.c, 0.0, 0, s.q};
    }
    return std::nullopt;
}

AsymptoticTerm mul(const AsymptoticTerm& a, const AsymptoticTerm& b) {
    return AsymptoticTerm{a.coef * b.coef, a.power + b.power, a.logpower + b.logpower,
                          a.base * b.base};
}

AsymptoticTerm square(const AsymptoticTerm& a) { return mul(a, a); }

AsymptoticTerm reciprocal(const AsymptoticTerm& a) {
    if (a.logpower != 0) throw UnsupportedOperation("reciprocal of a log-carrying term");
    if (a.coef == 0.0) throw InvalidSpec("reciprocal of a zero term");
    return AsymptoticTerm{1.0 / a.coef, -a.power, 0, 1.0 / a.base};
}

AsymptoticTerm dominant_sum(const AsymptoticTerm& a, const AsymptoticTerm& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.base != b.base) return a.base > b.base ? a : b;
    if (a.power != b.power) return a.power > b.power ? a : b;
    if (a.logpower != b.logpower) return a.logpower > b.logpower ? a : b;
    return AsymptoticTerm{a.coef + b.coef, a.power, a.logpower, a.base};
}

AsymptoticTerm shift(const AsymptoticTerm& a, long d) {
    // term of r |-> a(r+d): the geometric factor contributes base^d
    AsymptoticTerm r = a;
    if (a.base != 1.0) r.coef *= std::pow(a.base, static_cast<double>(d));
    return r;
}

AsymptoticTerm prefix_sum(const AsymptoticTerm& a, std::optional<double> exact_constant) {
    if (a.is_zero()) return AsymptoticTerm{exact_constant.value_or(0.0), 0.0, 0, 1.0};
    if (a.base > 1.0) {
        // sum of c*q^k ~ (c*q/(q-1)) * q^r
        return AsymptoticTerm{a.coef * a.base / (a.base - 1.0), a.power, a.logpower, a.base};
    }
    if (a.base < 1.0 || a.power < -1.0) {
        // convergent: partial sums tend to a constant
        return AsymptoticTerm{exact_constant.value_or(1.0), 0.0, 0, 1.0};
    }
    if (a.power == -1.0) {
        // sum of c*(log k)^j/k ~ c*(log r)^(j+1)/(j+1)
        return AsymptoticTerm{a.coef / (a.logpower + 1.0), 0.0, a.logpower + 1, 1.0};
    }
    // p > -1: sum of c*k^p*(log k)^j ~ c*r^(p+1)*(log r)^j/(p+1)
    return AsymptoticTerm{a.coef / (a.power + 1.0), a.power + 1.0, a.logpower, 1.0};
}

std::optional<AsymptoticTerm> suffix_sum(const AsymptoticTerm& a) {
    if (a.is_zero()) return AsymptoticTerm{0.0, 0.0, 0, 1.0};
    if (a.base < 1.0) {
        // sum_{k>=r} c*q^k ~ (c/(1-q)) * q^r (polynomial factors preserved)
        return AsymptoticTerm{a.coef / (1.0 - a.base), a.power, a.logpower, a.base};
    }
    if (a.base == 1.0 && a.power < -1.0) {
        // sum_{k>=r} c*k^p ~ c*r^(p+1)/(-p-1)
        return AsymptoticTerm{a.coef / (-a.power - 1.0), a.power + 1.0, a.logpower, 1.0};
    }
    return std::nullopt;
}

TermSum series_outcome(const AsymptoticTerm& a) {
    if (a.is_zero()) return TermSum::Converges;
    if (a.base > 1.0) return TermSum::Diverges;
    if (a.base < 1.0) return TermSum::Converges;
    if (a.power > -1.0) return TermSum::Diverges;
    if (a.power == -1.0) return TermSum::Diverges; // logpower >= 0 >= -1
    return TermSum::Converges;
}

} // namespace chainspec
