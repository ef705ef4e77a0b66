#pragma once

#include <vector>

#include "wpc/group.hpp"
#include "wpc/quadrature.hpp"

// Separated sets and epsilon-nets on the quotient surface, with the
// volume-counting bracket for the net size.

namespace wpc {

struct NetResult {
    std::vector<SurfacePoint> points;
    double epsilon = 0.0;
    double min_pairwise_distance = 0.0;
    double covering_radius_on_samples = 0.0;
    std::size_t count = 0;
    double max_injectivity_seen = 0.0;  // over the sample set, for reporting
};

// Uniform-area samples of the surface (lifts in the Dirichlet domain).
std::vector<SurfacePoint> sample_surface(const GroupEnumeration& e, std::size_t count,
                                         std::uint64_t seed);

// Greedy maximal separated subset in scan order: a sample is kept when it
// lies at surface distance >= epsilon from every kept point. Maximality
// forces the kept set to epsilon-cover the samples; both facts are measured
// and stored.
NetResult greedy_net(const std::vector<SurfacePoint>& samples, double epsilon,
                     const GroupEnumeration& e);

// Volume bracket (4 pi (g-1)/vol B(eps0), 4 pi (g-1)/vol B(eps0/2)) for the
// size of an eps0-net; valid when the surface injectivity radius is >= eps0.
std::pair<double, double> count_bracket(int genus, double epsilon0);

}  // namespace wpc
