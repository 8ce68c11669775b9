// green.hpp — Green's functions: the closed-form tail sum on transient chains
// and the exhaustion construction (finite Dirichlet problems on growing balls
// with a pointwise monotonicity certificate).
#pragma once
#include <map>
#include <vector>

#include "chainspec/dd.hpp"
#include "chainspec/graph.hpp"
#include "chainspec/series.hpp"

namespace chainspec {

struct GreenFunction {
    Vertex pole;
    std::map<Vertex, double> values; // final exhaustion level, interior vertices
    std::map<Vertex, dd> values_dd;  // refined solves, for residual-sensitive uses
    std::vector<int> radii;
    // max over common vertices of g_n - g_{n+1} per step (<= slack when monotone)
    std::vector<double> monotone_certificate;

    double at(const Vertex& v) const;
    dd at_dd(const Vertex& v) const;
};

// g(r) = sum_{k>=r} 1/b(k,k+1) with a certified tail; NotTransient when the
// chain is recurrent.
double green_closed_form(const BirthDeath& chain, std::size_t r);

// Solves Delta g_n = 1_pole/m(pole) on the ball interior, g_n = 0 on the
// sphere, for each radius; checks 0 < g <= g(pole) and pointwise monotone
// growth across levels (MonotonicityViolation beyond 1e-10 slack).
GreenFunction green_exhaustion(const GraphSpec& g, const Vertex& pole,
                               const std::vector<int>& radii);

// sum_r (sum_{k>=r} 1/b)^2 m(r) on one end; errors when the end is recurrent.
SeriesVerdict green_l2_end(const SequenceSpec& edge, const SequenceSpec& measure,
                           SeriesBudget budget = {});
SeriesVerdict green_l2_end(const TwoRayStar& star, StarEnd end, SeriesBudget budget = {});

// Comparability of Green's functions with different poles: a constant C with
// C * g_{x0,n} >= g_{x,n} on the window at every computed exhaustion level.
double green_pole_comparability(const GraphSpec& g, const Vertex& x0, const Vertex& x,
                                const std::vector<int>& radii);

} // namespace chainspec
