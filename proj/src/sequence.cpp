#include "chainspec/sequence.hpp"

#include <cmath>
#include <limits>

#include "chainspec/dd.hpp"

namespace chainspec {

SequenceSpec SequenceSpec::constant(double c, std::vector<double> table) {
    SequenceSpec s;
    s.table = std::move(table);
    s.family = TailFamily::Constant;
    s.c = c;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::power(double c, double p, std::vector<double> table) {
    SequenceSpec s;
    s.table = std::move(table);
    s.family = TailFamily::Power;
    s.c = c;
    s.p = p;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::exponential(double c, double q, std::vector<double> table) {
    SequenceSpec s;
    s.table = std::move(table);
    s.family = TailFamily::Exponential;
    s.c = c;
    s.q = q;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::table_only(std::vector<double> table) {
    SequenceSpec s;
    s.table = std::move(table);
    s.family = TailFamily::None;
    s.validate();
    return s;
}

double SequenceSpec::at(std::size_t k) const {
    if (k < table.size()) return table[k];
    switch (family) {
        case TailFamily::None:
            throw IndexBeyondTable("index " + std::to_string(k) + " beyond table of size " +
                                   std::to_string(table.size()) + " with no tail");
        case TailFamily::Constant:
            return c;
        case TailFamily::Power:
            return c * std::pow(static_cast<double>(k) + 1.0, p);
        case TailFamily::Exponential:
            return c * std::pow(q, static_cast<double>(k));
    }
    throw InvalidSpec("unreachable tail family");
}

void SequenceSpec::validate() const {
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!(table[i] > 0.0) || !std::isfinite(table[i]))
            throw InvalidSpec("table entry " + std::to_string(i) + " not strictly positive finite");
    }
    if (family != TailFamily::None) {
        if (!(c > 0.0) || !std::isfinite(c)) throw InvalidSpec("tail coefficient must be > 0");
        if (family == TailFamily::Power && !std::isfinite(p))
            throw InvalidSpec("power exponent must be finite");
        if (family == TailFamily::Exponential && (!(q > 0.0) || !std::isfinite(q)))
            throw InvalidSpec("exponential base must be > 0");
    }
}

namespace {

// Sum of j^p over j >= N (N >= 2), for p < -1, by explicit summation up to a
// cutoff plus an Euler-Maclaurin tail. The EM remainder after the p*N^(p-1)/12
// term is bounded by |p(p-1)(p-2)| * N^(p-3) / 720.
CertifiedSum power_tail_from(double p, std::size_t N) {
    std::size_t cut = N + 20000;
    KahanSum acc;
    for (std::size_t j = N; j < cut; ++j) acc.add(std::pow(static_cast<double>(j), p));
    double x = static_cast<double>(cut);
    double em = std::pow(x, p + 1.0) / (-p - 1.0) + 0.5 * std::pow(x, p) -
                p * std::pow(x, p - 1.0) / 12.0;
    double rem = std::abs(p * (p - 1.0) * (p - 2.0)) * std::pow(x, p - 3.0) / 720.0;
    double value = acc.value() + em;
    return CertifiedSum{value, rem + 1e-15 * value};
}

// Tail of the analytic part only: sum over k >= from of c * base-form(k).
// Returns nullopt when divergent.
std::optional<CertifiedSum> analytic_tail(TailFamily family, double c, double p, double q,
                                          std::size_t from, bool reciprocal) {
    if (reciprocal) {
        // 1/(c*(k+1)^p) = (1/c)*(k+1)^(-p); 1/(c*q^k) = (1/c)*(1/q)^k
        c = 1.0 / c;
        p = -p;
        if (family == TailFamily::Exponential) q = 1.0 / q;
    }
    switch (family) {
        case TailFamily::None:
            throw IndexBeyondTable("tail sum requires an analytic tail");
        case TailFamily::Constant:
            return std::nullopt;
        case TailFamily::Exponential: {
            if (q >= 1.0) return std::nullopt;
            // sum c*q^k, k >= from: c*q^from/(1-q), exact closed form
            double v = c * std::pow(q, static_cast<double>(from)) / (1.0 - q);
            return CertifiedSum{v, 4e-16 * v};
        }
        case TailFamily::Power: {
            if (p >= -1.0) return std::nullopt;
            CertifiedSum t = power_tail_from(p, from + 1); // (k+1)^p, k >= from
            return CertifiedSum{c * t.value, c * t.error};
        }
    }
    return std::nullopt;
}

std::optional<CertifiedSum> tail_sum_impl(const SequenceSpec& s, std::size_t from, bool reciprocal) {
    if (!s.has_tail()) {
        if (from >= s.table.size()) return CertifiedSum{0.0, 0.0};
        throw IndexBeyondTable("tail sum over an undefined tail");
    }
    std::size_t T = s.table.size();
    KahanSum head;
    for (std::size_t k = from; k < T; ++k)
        head.add(reciprocal ? 1.0 / s.table[k] : s.table[k]);
    std::size_t start = from > T ? from : T;
    auto tail = analytic_tail(s.family, s.c, s.p, s.q, start, reciprocal);
    if (!tail) return std::nullopt;
    return CertifiedSum{head.value() + tail->value, tail->error};
}

} // namespace

std::optional<CertifiedSum> tail_sum(const SequenceSpec& s, std::size_t from) {
    return tail_sum_impl(s, from, false);
}

std::optional<CertifiedSum> tail_sum_reciprocal(const SequenceSpec& s, std::size_t from) {
    return tail_sum_impl(s, from, true);
}

std::string to_string(TailFamily f) {
    switch (f) {
        case TailFamily::None: return "none";
        case TailFamily::Constant: return "const";
        case TailFamily::Power: return "power";
        case TailFamily::Exponential: return "exp";
    }
    return "?";
}

} // namespace chainspec
