#pragma once

#include "ndt/core.hpp"

#include <optional>
#include <vector>

namespace ndt {

struct BoundWitness {
    Rational value;
    int ell = 0;
    int s = 1;
    int s_bar = 0;
};

struct LowerBound {
    Rational value;
    std::optional<BoundWitness> witness; // empty when the unity term dominates
};

struct EnvelopePoint {
    Rational mu;
    Rational ndt;
};

// Lower convex hull of a point set with an exact piecewise-linear evaluator.
class Envelope {
public:
    explicit Envelope(std::vector<EnvelopePoint> hull) : hull_(std::move(hull)) {}
    const std::vector<EnvelopePoint>& breakpoints() const { return hull_; }
    Rational operator()(const Rational& mu) const;

private:
    std::vector<EnvelopePoint> hull_;
};

Rational delta_lb_term(const Rational& mu, int ell, int s, int K, int M);
LowerBound lower_bound(const NetworkConfig& cfg);
Rational corner_ndt(int mu_corner, int K, int M);

// Closed form for K+M <= 4. The two s=2 terms only enter when K >= 2.
Rational optimal_tradeoff_closed(const NetworkConfig& cfg);
// True when dropping the s=2 terms (K=1) changes the value vs the literal formula.
bool closed_form_conditional_fires(const NetworkConfig& cfg);

// Duplicate mu values keep the smaller ndt.
Envelope lower_convex_envelope(const std::vector<SchemePoint>& points);

Rational achievable_dof(const NetworkConfig& cfg, const Rational& ndt);

} // namespace ndt
