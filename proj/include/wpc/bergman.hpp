#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wpc/group.hpp"
#include "wpc/quadrature.hpp"

// Bergman kernel of the disk, truncated Poincaré series of weight -4, and the
// numeric Bergman projection of compactly supported automorphic data.

namespace wpc {

// K(z, xi) = 12 / (pi (1 - z conj(xi))^4).
inline complexd bergman_kernel(complexd z, complexd xi) {
    const complexd w = 1.0 - z * std::conj(xi);
    const complexd w2 = w * w;
    return 12.0 / (M_PI * w2 * w2);
}

// Terms (sigma_i^{-1} . gamma)'(z)^2 for all bases i and enumerated gamma,
// sorted by displacement so that evaluation can stop once the tail bound
// 16 e^{2 dist(0,z)} (1-|z|^2)^{-2} suffix is below the requested tolerance.
// suffix[k] holds the sum of e^{-2 disp} over terms k..end.
class ThetaPool {
  public:
    ThetaPool() = default;
    ThetaPool(const GroupEnumeration& e, const std::vector<DiskPoint>& bases);

    std::size_t size() const { return are_.size(); }
    std::size_t base_count() const { return bases_; }
    int deepest_level() const { return deepest_level_; }

    DiskAutomorphism coeff(std::size_t k) const {
        return DiskAutomorphism{{are_[k], aim_[k]}, {bre_[k], bim_[k]}};
    }
    const double* are() const { return are_.data(); }
    const double* aim() const { return aim_.data(); }
    const double* bre() const { return bre_.data(); }
    const double* bim() const { return bim_.data(); }
    const std::vector<double>& disp() const { return disp_; }
    const std::vector<std::uint8_t>& level() const { return level_; }

    // index of the first term whose suffix bound at z is below eta (eta <= 0
    // keeps every term)
    std::size_t cutoff(complexd z, double eta) const;
    double suffix_bound(complexd z, std::size_t k) const;

  private:
    std::vector<double> are_, aim_, bre_, bim_;
    std::vector<double> disp_;
    std::vector<std::uint8_t> level_;
    std::vector<double> suffix_;
    std::size_t bases_ = 0;
    int deepest_level_ = 0;
};

struct ThetaEval {
    complexd value{0.0, 0.0};
    double shell_tail = 0.0;     // sum of |term| over the deepest word length
    double skipped_bound = 0.0;  // certified bound on everything cut off
    double tail() const { return shell_tail + skipped_bound; }
};

// Truncated series sum_i sum_gamma ((sigma_i^{-1} gamma)'(z))^2.
ThetaEval theta_series(const ThetaPool& pool, complexd z, double eta = 0.0);

// Plain full-length loop kept as the reference path for tests and benchmarks.
ThetaEval theta_series_serial(const ThetaPool& pool, complexd z);

// One evaluation per point, parallel over points.
void theta_series_batch(const ThetaPool& pool, const std::vector<complexd>& zs,
                        std::vector<ThetaEval>& out, double eta = 0.0);

// |theta(z)|^2 only, for quadrature inner loops: no tail bookkeeping, plain
// multi-lane accumulation. Parallel over points, deterministic order.
void theta_abs2_batch(const ThetaPool& pool, const std::vector<complexd>& zs,
                      std::vector<double>& out, double eta);

// Convenience wrapper building the pool on the fly.
ThetaEval theta_series(const GroupEnumeration& e, const std::vector<DiskPoint>& bases, complexd z);

// 12 ((e^r-1)/(e^r+1))^2 * theta(z): the closed form of the projection of the
// indicator data supported on the radius-r balls around the base orbit.
complexd closed_form_projection(const ThetaPool& pool, double r, complexd z, double eta = 0.0);

// Measurable weight -4 data presented as an evaluator plus the hyperbolic
// balls that carry its support.
struct SupportBall {
    DiskPoint center;
    double radius = 0.0;
};

struct MeasurableForm {
    std::function<complexd(complexd)> evaluator;
    std::vector<SupportBall> support;
    // optional fast path: value at xi = translator(center_k)(w), given (k, w, xi)
    std::function<complexd(std::size_t, complexd, complexd)> ball_evaluator;
};

// Stratified MC estimate of the projection integral of conj(f) K(z, .) over
// the declared support. Empty support yields a zero estimate with a warning
// on stderr; non-finite samples raise.
McEstimateC project_numeric(const MeasurableForm& f, complexd z, std::size_t samples,
                            std::uint64_t seed);

// The unimodular-factor data whose projection has the closed form above:
// on gamma(B(p_i; r)) the value is the phase of gamma' at the pulled-back
// point times the phase of sigma_i' there.
MeasurableForm make_indicator_form(const GroupEnumeration& e, const std::vector<DiskPoint>& bases,
                                   double r);

}  // namespace wpc
