#include "wpc/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpc {

std::vector<SurfacePoint> sample_surface(const GroupEnumeration& e, std::size_t count,
                                         std::uint64_t seed) {
    const DomainSample s = sample_domain(e, count, seed);
    std::vector<SurfacePoint> out;
    out.reserve(count);
    for (const complexd& z : s.points) out.push_back(SurfacePoint{disk_point(z)});
    return out;
}

NetResult greedy_net(const std::vector<SurfacePoint>& samples, double epsilon,
                     const GroupEnumeration& e) {
    if (samples.empty()) throw std::invalid_argument("greedy_net: samples must not be empty");
    if (!(epsilon > 0.0)) throw std::invalid_argument("greedy_net: epsilon must be > 0");

    NetResult net;
    net.epsilon = epsilon;
    for (const SurfacePoint& s : samples) {
        bool separated = true;
        for (const SurfacePoint& kept : net.points) {
            if (surface_distance(e, s, kept) < epsilon) {
                separated = false;
                break;
            }
        }
        if (separated) net.points.push_back(s);
    }
    net.count = net.points.size();

    net.min_pairwise_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.points.size(); ++i) {
        for (std::size_t j = i + 1; j < net.points.size(); ++j) {
            net.min_pairwise_distance =
                std::min(net.min_pairwise_distance, surface_distance(e, net.points[i], net.points[j]));
        }
    }
    if (net.points.size() < 2) net.min_pairwise_distance = std::numeric_limits<double>::infinity();

    net.covering_radius_on_samples = 0.0;
    for (const SurfacePoint& s : samples) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const SurfacePoint& kept : net.points) {
            nearest = std::min(nearest, surface_distance(e, s, kept));
        }
        net.covering_radius_on_samples = std::max(net.covering_radius_on_samples, nearest);
        net.max_injectivity_seen = std::max(net.max_injectivity_seen, injectivity_radius(e, s));
    }
    return net;
}

std::pair<double, double> count_bracket(int genus, double epsilon0) {
    if (genus < 2) throw std::invalid_argument("count_bracket: genus must be >= 2");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("count_bracket: epsilon0 must be > 0");
    const double area = 4.0 * M_PI * (genus - 1);
    return {area / ball_area(epsilon0), area / ball_area(0.5 * epsilon0)};
}

}  // namespace wpc
