#include "wpc/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "wpc/beltrami.hpp"
#include "wpc/rng.hpp"

namespace wpc {

namespace {

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

McEstimate reduce(const std::vector<double>& vals, double scale, std::uint64_t seed) {
    KahanSum s, sq;
    for (double v : vals) {
        s.add(v);
        sq.add(v * v);
    }
    const double n = static_cast<double>(vals.size());
    const double mean = s.sum / n;
    const double var = std::max(0.0, sq.sum / n - mean * mean);
    McEstimate est;
    est.value = scale * mean;
    est.std_error = scale * std::sqrt(var / n);
    est.samples = static_cast<long long>(vals.size());
    est.seed = seed;
    return est;
}

void check_finite(const std::vector<double>& vals, const std::vector<complexd>& where) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!std::isfinite(vals[i])) {
            std::ostringstream os;
            os << "non-finite integrand value at z = " << where[i].real() << " + "
               << where[i].imag() << "i";
            throw std::runtime_error(os.str());
        }
    }
}

}  // namespace

DomainSample sample_domain(const GroupEnumeration& e, std::size_t count, std::uint64_t seed) {
    if (e.trivial()) {
        throw std::invalid_argument("sample_domain: trivial group has no finite-area domain");
    }
    if (count == 0) throw std::invalid_argument("sample_domain: count must be >= 1");

    DomainSample out;
    out.seed = seed;
    out.proposal_radius = e.circumradius * 1.02 + 0.01;
    const double vol = ball_area(out.proposal_radius);

    std::size_t accepted_total = 0;
    const std::size_t block = 1 << 16;
    std::vector<std::uint8_t> accept(block);
    std::vector<complexd> zs(block);
    std::size_t j = 0;
    while (out.points.size() < count) {
        const std::size_t n = block;
#pragma omp parallel for schedule(static)
        for (long long k = 0; k < static_cast<long long>(n); ++k) {
            const std::uint64_t ctr = static_cast<std::uint64_t>(j + k);
            const complexd z = uniform_hyperbolic_ball(out.proposal_radius, seed, ctr);
            zs[k] = z;
            accept[k] = in_domain(e, z) ? 1 : 0;
        }
        for (std::size_t k = 0; k < n && out.points.size() < count; ++k) {
            if (accept[k]) {
                out.points.push_back(zs[k]);
                ++accepted_total;
            }
        }
        j += n;
        out.proposals = j;
        if (j >= (1u << 20) && accepted_total < j / 100000) {
            throw resource_error("sample_domain: rejection efficiency below 1e-5");
        }
        if (j > 200 * count + (1u << 22)) {
            throw resource_error("sample_domain: proposal budget exhausted");
        }
    }
    out.acceptance_rate = static_cast<double>(accepted_total) / static_cast<double>(out.proposals);
    out.area_estimate = out.acceptance_rate * vol;
    out.area_std_error =
        vol * std::sqrt(out.acceptance_rate * (1.0 - out.acceptance_rate) /
                        static_cast<double>(out.proposals));
    return out;
}

McEstimate integrate_domain_batch(
    const GroupEnumeration& e,
    const std::function<void(const std::vector<complexd>&, std::vector<double>&)>& fn_batch,
    std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("integrate_domain: samples must be >= 1");

    std::vector<complexd> zs(samples);
    std::vector<double> vals(samples, 0.0);

    if (e.trivial()) {
        // whole-disk integral; Euclidean-uniform proposals carry the metric
        // weight explicitly, so fn*rho must stay bounded
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(samples); ++j) {
            zs[j] = uniform_euclidean_disk(1.0 - 1e-12, seed, static_cast<std::uint64_t>(j));
        }
        std::vector<complexd> accepted = zs;
        std::vector<double> fvals(samples, 0.0);
        fn_batch(accepted, fvals);
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(samples); ++j) {
            vals[j] = fvals[j] * density(zs[j]);
        }
        check_finite(vals, zs);
        return reduce(vals, M_PI, seed);
    }

    const double R = e.circumradius * 1.02 + 0.01;
    std::vector<std::uint8_t> accept(samples);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(samples); ++j) {
        const complexd z = uniform_hyperbolic_ball(R, seed, static_cast<std::uint64_t>(j));
        zs[j] = z;
        accept[j] = in_domain(e, z) ? 1 : 0;
    }
    std::vector<complexd> accepted;
    std::vector<std::size_t> where;
    accepted.reserve(samples / 2);
    for (std::size_t j = 0; j < samples; ++j) {
        if (accept[j]) {
            accepted.push_back(zs[j]);
            where.push_back(j);
        }
    }
    std::vector<double> fvals(accepted.size(), 0.0);
    if (!accepted.empty()) fn_batch(accepted, fvals);
    check_finite(fvals, accepted);
    for (std::size_t k = 0; k < where.size(); ++k) vals[where[k]] = fvals[k];
    return reduce(vals, ball_area(R), seed);
}

McEstimate integrate_domain(const GroupEnumeration& e, const std::function<double(complexd)>& fn,
                            std::size_t samples, std::uint64_t seed) {
    return integrate_domain_batch(
        e,
        [&fn](const std::vector<complexd>& zs, std::vector<double>& out) {
#pragma omp parallel for schedule(static)
            for (long long j = 0; j < static_cast<long long>(zs.size()); ++j) {
                out[j] = fn(zs[j]);
            }
        },
        samples, seed);
}

McEstimate wp_norm_squared(const BeltramiField& field, std::size_t samples, std::uint64_t seed) {
    return integrate_domain_batch(
        *field.enumeration,
        [&field](const std::vector<complexd>& zs, std::vector<double>& out) {
            mu_abs_squared_batch(field, zs, out);
        },
        samples, seed);
}

McEstimate euclidean_area_of_image(const DiskAutomorphism& h, double r, std::size_t samples,
                                   std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("euclidean_area_of_image: r must be > 0");
    const double t = ball_euclidean_radius(r);
    std::vector<double> vals(samples);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(samples); ++j) {
        const complexd w = uniform_euclidean_disk(t, seed, static_cast<std::uint64_t>(j));
        vals[j] = std::norm(derivative(h, w));
    }
    return reduce(vals, M_PI * t * t, seed);
}

}  // namespace wpc
