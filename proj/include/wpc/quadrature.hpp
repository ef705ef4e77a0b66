#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wpc/group.hpp"

// Monte-Carlo integration over the fundamental domain and hyperbolic balls.
// Proposals are indexed by a counter-based generator, per-point results are
// stored and reduced in index order, so estimates are bit-identical for a
// fixed seed at any thread count.

namespace wpc {

struct BeltramiField;  // beltrami.hpp

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long samples = 0;  // proposal count
    std::uint64_t seed = 0;
};

struct McEstimateC {
    complexd value{0.0, 0.0};
    double std_error = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
};

// Uniform-area samples of the Dirichlet domain by rejection from B(0;R) with
// R just above the domain circumradius. Throws resource_error when the
// acceptance rate collapses.
struct DomainSample {
    std::vector<complexd> points;
    std::size_t proposals = 0;
    double proposal_radius = 0.0;
    double acceptance_rate = 0.0;
    double area_estimate = 0.0;
    double area_std_error = 0.0;
    std::uint64_t seed = 0;
};

DomainSample sample_domain(const GroupEnumeration& e, std::size_t count, std::uint64_t seed);

// MC estimate of the integral of fn against the hyperbolic area element over
// the fundamental domain (over the whole disk for the trivial group, where fn
// must decay). `samples` counts proposals.
McEstimate integrate_domain(const GroupEnumeration& e, const std::function<double(complexd)>& fn,
                            std::size_t samples, std::uint64_t seed);

// Same driver with a caller-supplied batch evaluator (used for series-backed
// integrands where per-point calls would dominate).
McEstimate integrate_domain_batch(
    const GroupEnumeration& e,
    const std::function<void(const std::vector<complexd>&, std::vector<double>&)>& fn_batch,
    std::size_t samples, std::uint64_t seed);

// Weil-Petersson norm squared of the field's Beltrami differential:
// integral of |mu|^2 over the domain.
McEstimate wp_norm_squared(const BeltramiField& field, std::size_t samples, std::uint64_t seed);

// Euclidean area of h(B(0;r)) as the Jacobian integral over B(0;r).
McEstimate euclidean_area_of_image(const DiskAutomorphism& h, double r, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace wpc
