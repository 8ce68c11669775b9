// sequence.hpp — infinite positive sequences given as a finite table plus an
// analytic tail family. This is the representation of edge weights b(k,k+1)
// and vertex measures m(r) on chains.
#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainspec/errors.hpp"

namespace chainspec {

enum class TailFamily {
    None,        // sequence defined only on the table
    Constant,    // c for k >= T
    Power,       // c*(k+1)^p for k >= T  (shifted base avoids the k=0 singularity)
    Exponential, // c*q^k for k >= T
};

struct SequenceSpec {
    std::vector<double> table; // explicit values for indices 0..T-1
    TailFamily family = TailFamily::None;
    double c = 0.0; // tail coefficient, > 0
    double p = 0.0; // power exponent (any finite real)
    double q = 0.0; // exponential base, > 0

    static SequenceSpec constant(double c, std::vector<double> table = {});
    static SequenceSpec power(double c, double p, std::vector<double> table = {});
    static SequenceSpec exponential(double c, double q, std::vector<double> table = {});
    static SequenceSpec table_only(std::vector<double> table);

    bool has_tail() const { return family != TailFamily::None; }
    std::size_t table_size() const { return table.size(); }

    // Value at index k; IndexBeyondTable when no tail covers k.
    double at(std::size_t k) const;

    // Positivity and finiteness of every reachable value.
    void validate() const;

    bool operator==(const SequenceSpec&) const = default;
};

// A certified sum with an explicit error bracket: the true value lies in
// [value - error, value + error].
struct CertifiedSum {
    double value = 0.0;
    double error = 0.0;
};

// Sum of s(k) for k >= from. nullopt when the tail sum diverges.
// IndexBeyondTable when the tail family is None (sum not determined).
std::optional<CertifiedSum> tail_sum(const SequenceSpec& s, std::size_t from);

// Sum of 1/s(k) for k >= from, same conventions.
std::optional<CertifiedSum> tail_sum_reciprocal(const SequenceSpec& s, std::size_t from);

std::string to_string(TailFamily f);

} // namespace chainspec
