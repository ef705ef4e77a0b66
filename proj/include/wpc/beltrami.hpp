#pragma once

#include <string>
#include <vector>

#include "wpc/bergman.hpp"
#include "wpc/group.hpp"
#include "wpc/quadrature.hpp"

// The harmonic Beltrami differential built from a separated set of base
// points, its subharmonic majorant, the explicit constants of the sup-norm /
// pointwise lower bound story, and the certificate assembly.

namespace wpc {

inline double separation_threshold() { return 2.0 * std::log(3.0 + 2.0 * std::sqrt(2.0)); }

// ln(3 + 2 sqrt(2)): the hyperbolic radius whose ball is B_eu(0; 1/sqrt(2)).
inline double majorant_ball_radius() { return std::log(3.0 + 2.0 * std::sqrt(2.0)); }

struct BeltramiField {
    const GroupEnumeration* enumeration = nullptr;
    std::vector<DiskPoint> bases;  // bases[0] is exactly 0
    double epsilon0 = 0.0;
    bool separation_verified = false;
    ThetaPool pool;
    double series_tol = 1e-9;  // certified cutoff for quadrature-grade evaluations
};

// Validates bases (first base must be the origin; lifts must lie in the
// domain), measures pairwise separations and injectivity radii, and marks
// separation_verified when the epsilon0 hypotheses hold.
BeltramiField make_field(const GroupEnumeration& e, const std::vector<SurfacePoint>& bases,
                         double epsilon0, double series_tol = 1e-9);

// mu(z) = theta(z)/rho(z).
complexd mu(const BeltramiField& field, complexd z, double eta = 0.0);

// f(z) = (1/4) sum over the pool of (1 - |T z|^2)^2, the termwise majorant.
double f_majorant(const BeltramiField& field, complexd z, double eta = 0.0);

struct MuF {
    complexd mu{0.0, 0.0};
    double f = 0.0;
    double tail = 0.0;  // deepest-shell magnitude plus the certified cutoff bound
};

// Single pass sharing one term set, so |mu| <= f holds termwise exactly.
MuF eval_mu_f(const BeltramiField& field, complexd z, double eta = 0.0);

void mu_abs_squared_batch(const BeltramiField& field, const std::vector<complexd>& zs,
                          std::vector<double>& out);

struct SupScan {
    double sup_f = 0.0;
    double sup_mu = 0.0;
    complexd arg_f{0.0, 0.0};
    double max_tail = 0.0;
};

// Maximum of f and |mu| over polar grids on the balls B(p_i; ln(3+2 sqrt 2)),
// which carry the global sup of f by the maximum principle.
SupScan scan_majorant_balls(const BeltramiField& field, std::size_t radial, std::size_t angular);

double sup_f_over_balls(const BeltramiField& field, std::size_t samples_per_ball);

// Euclidean gap tanh(eps0/4) - 1/sqrt(2) placing B_eu(z; delta) inside
// B(0; eps0/2) for all |z| <= 1/sqrt(2). Requires eps0 above the threshold.
double delta(double epsilon0);

struct SupLowerConstants {
    double c3 = 0.0;  // sup bound 1/(16 delta^2)
    double c4 = 0.0;  // base-point lower bound (tanh^2(eps0/4) - 1/2)/2
};
SupLowerConstants constants(double epsilon0);

// Mean-value constant (4 pi/3 (1 - (4 e^r/(1+e^r)^2)^3))^{-1}.
double mean_value_constant(double r);

struct MeanValueReport {
    double lhs = 0.0;  // |mu(p)|^2
    double rhs = 0.0;  // C1(r) * integral over B(p;r) of |mu|^2 dA
    double rhs_std_error = 0.0;
    double ratio = 0.0;
    double r = 0.0;
    bool pass = false;
};

MeanValueReport mean_value_check(const BeltramiField& field, const SurfacePoint& p, double r,
                                 std::size_t mc_samples, std::uint64_t seed);

struct BoundCertificate {
    double delta = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c1_r = 0.0;  // mean-value constant at ln(3+2 sqrt 2)
    double sup_mu_estimate = 0.0;
    double min_base_value = 0.0;
    long long samples = 0;
    double truncation_tail = 0.0;
    bool hypothesis_satisfied = false;
    // supplementary
    double sup_f_balls = 0.0;
    double sup_f_domain_samples = 0.0;
    double epsilon0 = 0.0;
    std::size_t n_bases = 0;
    std::uint64_t seed = 0;
};

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::string detail;
};

struct CertifyOptions {
    std::size_t ball_grid_radial = 48;
    std::size_t ball_grid_angular = 96;
    std::size_t check_points = 10000;     // for |mu| <= f and the domain sup scan
    std::size_t identity_draws = 10000;   // termwise majorant identity
    std::size_t area_symmetry_count = 20;
    std::size_t area_symmetry_samples = 100000;
    std::size_t laplacian_points = 20;
    double majorant_slack = 1e-12;
    double identity_slack = 1e-12;
    double laplacian_tolerance = 1e-6;
    double fd_step = 1e-4;
    std::uint64_t seed = 42;
};

struct CertifyOutcome {
    BoundCertificate certificate;
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks) {
            if (c.status == CheckStatus::fail) return false;
        }
        return true;
    }
};

// Fills every certificate field and runs the unconditional checks; the bound
// assertions are enforced only when the separation hypotheses hold and are
// reported as skipped-with-values otherwise.
CertifyOutcome certify(const BeltramiField& field, const CertifyOptions& opts = {});

}  // namespace wpc
