#include "wpc/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wpc/rng.hpp"

namespace wpc {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

BeltramiField make_field(const GroupEnumeration& e, const std::vector<SurfacePoint>& bases,
                         double epsilon0, double series_tol) {
    if (bases.empty()) throw std::invalid_argument("make_field: base list must not be empty");
    if (bases[0].lift.z != complexd{0.0, 0.0}) {
        throw std::invalid_argument("make_field: the first base must lift to the origin");
    }
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("make_field: epsilon0 must be > 0");

    BeltramiField field;
    field.enumeration = &e;
    field.epsilon0 = epsilon0;
    field.series_tol = series_tol;
    for (const auto& p : bases) {
        if (!in_domain(e, p.lift.z, 1e-10)) {
            throw std::invalid_argument("make_field: base lift is not in the fundamental domain");
        }
        field.bases.push_back(p.lift);
    }

    bool ok = epsilon0 > separation_threshold();
    for (std::size_t i = 0; ok && i < bases.size(); ++i) {
        if (injectivity_radius(e, bases[i]) < 0.5 * epsilon0 - 1e-12) ok = false;
        for (std::size_t j = i + 1; ok && j < bases.size(); ++j) {
            if (surface_distance(e, bases[i], bases[j]) < epsilon0 - 1e-12) ok = false;
        }
    }
    field.separation_verified = ok;
    field.pool = ThetaPool(e, field.bases);
    return field;
}

complexd mu(const BeltramiField& field, complexd z, double eta) {
    return theta_series(field.pool, z, eta).value / density(z);
}

double f_majorant(const BeltramiField& field, complexd z, double eta) {
    return eval_mu_f(field, z, eta).f;
}

MuF eval_mu_f(const BeltramiField& field, complexd z, double eta) {
    const ThetaPool& pool = field.pool;
    const std::size_t cut = pool.cutoff(z, eta);
    const double* are = pool.are();
    const double* aim = pool.aim();
    const double* bre = pool.bre();
    const double* bim = pool.bim();
    const auto& lev = pool.level();
    const int deepest = pool.deepest_level();
    const double s = 1.0 - std::norm(z);

    double tre = 0.0, tim = 0.0, ctre = 0.0, ctim = 0.0;  // compensated theta
    double f4 = 0.0, cf4 = 0.0;                           // compensated 4 f(z)
    double shell = 0.0;
    for (std::size_t k = 0; k < cut; ++k) {
        const double dre = bre[k] * z.real() + bim[k] * z.imag() + are[k];
        const double dim = bre[k] * z.imag() - bim[k] * z.real() - aim[k];
        const double n2 = dre * dre + dim * dim;
        const double x2 = dre * dre - dim * dim;
        const double y2 = 2.0 * dre * dim;
        const double x4 = x2 * x2 - y2 * y2;
        const double y4 = 2.0 * x2 * y2;
        const double n4 = n2 * n2;
        const double inv = 1.0 / (n4 * n4);
        double y = x4 * inv - ctre, t = tre + y;
        ctre = (t - tre) - y;
        tre = t;
        y = -y4 * inv - ctim;
        t = tim + y;
        ctim = (t - tim) - y;
        tim = t;
        // (1 - |T z|^2) = (1 - |z|^2)/|den|^2 for the normalized matrix
        const double one_minus = s / n2;
        y = one_minus * one_minus - cf4;
        t = f4 + y;
        cf4 = (t - f4) - y;
        f4 = t;
        if (lev[k] == deepest) shell += n4 * inv;  // |term| = 1/|den|^4
    }
    const complexd theta{tre, tim};
    MuF out;
    out.mu = theta / density(z);
    out.f = 0.25 * f4;
    const double skipped = cut < pool.size() ? pool.suffix_bound(z, cut) : 0.0;
    out.tail = shell / density(z) + skipped;
    return out;
}

void mu_abs_squared_batch(const BeltramiField& field, const std::vector<complexd>& zs,
                          std::vector<double>& out) {
    theta_abs2_batch(field.pool, zs, out, field.series_tol);
    for (std::size_t j = 0; j < zs.size(); ++j) {
        const double rho = density(zs[j]);
        out[j] /= rho * rho;
    }
}

SupScan scan_majorant_balls(const BeltramiField& field, std::size_t radial, std::size_t angular) {
    SupScan scan;
    const double r_ball = majorant_ball_radius();
    std::vector<complexd> pts;
    pts.reserve(field.bases.size() * (radial * angular + 1));
    for (const DiskPoint& p : field.bases) {
        const DiskAutomorphism sig = translator(p);
        pts.push_back(p.z);
        for (std::size_t i = 1; i <= radial; ++i) {
            // cosh-spaced radii give an area-uniform grid
            const double u = static_cast<double>(i) / static_cast<double>(radial);
            const double s = std::acosh(1.0 + u * (std::cosh(r_ball) - 1.0));
            const double t = std::tanh(0.5 * s);
            for (std::size_t jj = 0; jj < angular; ++jj) {
                const double phi = 2.0 * M_PI * (static_cast<double>(jj) + 0.5 * (i % 2)) /
                                   static_cast<double>(angular);
                pts.push_back(wpc::apply(sig, std::polar(t, phi)));
            }
        }
    }
    std::vector<MuF> vals(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long long j = 0; j < static_cast<long long>(pts.size()); ++j) {
        vals[j] = eval_mu_f(field, pts[j], field.series_tol);
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (vals[j].f > scan.sup_f) {
            scan.sup_f = vals[j].f;
            scan.arg_f = pts[j];
        }
        scan.sup_mu = std::max(scan.sup_mu, std::abs(vals[j].mu));
        scan.max_tail = std::max(scan.max_tail, vals[j].tail);
    }
    return scan;
}

double sup_f_over_balls(const BeltramiField& field, std::size_t samples_per_ball) {
    const auto radial = static_cast<std::size_t>(std::max(4.0, std::sqrt(samples_per_ball / 2.0)));
    const std::size_t angular = std::max<std::size_t>(8, samples_per_ball / radial);
    return scan_majorant_balls(field, radial, angular).sup_f;
}

double delta(double epsilon0) {
    if (!(epsilon0 > separation_threshold())) {
        throw std::invalid_argument("delta: epsilon0 must exceed 2 ln(3+2 sqrt 2)");
    }
    return ball_euclidean_radius(0.5 * epsilon0) - 1.0 / std::sqrt(2.0);
}

SupLowerConstants constants(double epsilon0) {
    const double d = delta(epsilon0);
    const double t = ball_euclidean_radius(0.5 * epsilon0);
    return SupLowerConstants{1.0 / (16.0 * d * d), 0.5 * (t * t - 0.5)};
}

double mean_value_constant(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("mean_value_constant: r must be > 0");
    const double er = std::exp(r);
    const double q = 4.0 * er / ((1.0 + er) * (1.0 + er));
    return 1.0 / (4.0 * M_PI / 3.0 * (1.0 - q * q * q));
}

MeanValueReport mean_value_check(const BeltramiField& field, const SurfacePoint& p, double r,
                                 std::size_t mc_samples, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("mean_value_check: r must be > 0");
    const double inj = injectivity_radius(*field.enumeration, p);
    if (r > inj + 1e-9) {
        throw std::invalid_argument("mean_value_check: r exceeds the injectivity radius estimate " +
                                    fmt(inj));
    }
    MeanValueReport rep;
    rep.r = r;
    const complexd mup = mu(field, p.lift.z, 0.0);
    rep.lhs = std::norm(mup);

    const DiskAutomorphism sig = translator(p.lift);
    std::vector<complexd> pts(mc_samples);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(mc_samples); ++j) {
        pts[j] = wpc::apply(sig, uniform_hyperbolic_ball(r, seed, static_cast<std::uint64_t>(j)));
    }
    std::vector<double> vals;
    mu_abs_squared_batch(field, pts, vals);
    double sum = 0.0, sumsq = 0.0;
    for (double v : vals) {
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(mc_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    const double c1 = mean_value_constant(r);
    rep.rhs = c1 * ball_area(r) * mean;
    rep.rhs_std_error = c1 * ball_area(r) * std::sqrt(var / n);
    if (rep.rhs <= 0.0) {
        rep.ratio = rep.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        rep.pass = rep.lhs <= 1e-30;
    } else {
        rep.ratio = rep.lhs / rep.rhs;
        rep.pass = rep.ratio <= 1.0 + 3.0 * rep.rhs_std_error / rep.rhs;
    }
    return rep;
}

namespace {

void push_check(std::vector<CheckResult>& checks, const std::string& name, bool pass,
                const std::string& detail) {
    checks.push_back(CheckResult{name, pass ? CheckStatus::pass : CheckStatus::fail, detail});
}

void push_skipped(std::vector<CheckResult>& checks, const std::string& name,
                  const std::string& detail) {
    checks.push_back(CheckResult{name, CheckStatus::skipped, detail});
}

DiskAutomorphism random_automorphism(std::uint64_t seed, std::uint64_t k) {
    const double t = 0.2 + 1.8 * u01(seed, 10, k);
    const double phi = 2.0 * M_PI * u01(seed, 11, k);
    const double psi = 2.0 * M_PI * u01(seed, 12, k);
    return DiskAutomorphism{std::polar(std::cosh(t), phi), std::polar(std::sinh(t), psi)};
}

}  // namespace

CertifyOutcome certify(const BeltramiField& field, const CertifyOptions& opts) {
    CertifyOutcome out;
    BoundCertificate& cert = out.certificate;
    const GroupEnumeration& e = *field.enumeration;
    cert.epsilon0 = field.epsilon0;
    cert.n_bases = field.bases.size();
    cert.seed = opts.seed;
    cert.c1_r = mean_value_constant(majorant_ball_radius());
    cert.hypothesis_satisfied =
        field.separation_verified && field.epsilon0 > separation_threshold();

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (field.epsilon0 > separation_threshold()) {
        cert.delta = delta(field.epsilon0);
        const SupLowerConstants c = constants(field.epsilon0);
        cert.c3 = c.c3;
        cert.c4 = c.c4;
    } else {
        cert.delta = nan;
        cert.c3 = nan;
        cert.c4 = nan;
    }

    // pointwise values at the bases
    double min_base = std::numeric_limits<double>::infinity();
    double base_tail = 0.0;
    for (const DiskPoint& p : field.bases) {
        const MuF v = eval_mu_f(field, p.z, 0.0);
        min_base = std::min(min_base, std::abs(v.mu));
        base_tail = std::max(base_tail, v.tail);
    }
    cert.min_base_value = min_base;

    // sup scan over the majorant balls
    const SupScan scan = scan_majorant_balls(field, opts.ball_grid_radial, opts.ball_grid_angular);
    cert.sup_f_balls = scan.sup_f;
    double sup_mu = std::max(scan.sup_mu, min_base);
    double max_tail = std::max(scan.max_tail, base_tail);

    // random points: majorant domination and the domain-side sup
    std::size_t viol = 0;
    double worst_gap = 0.0;
    double sup_f_domain = 0.0;
    {
        std::vector<complexd> pts(opts.check_points);
        const bool use_domain = !e.trivial();
        const double R = use_domain ? e.circumradius * 1.02 + 0.01 : 3.0;
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(opts.check_points); ++j) {
            pts[j] = uniform_hyperbolic_ball(R, opts.seed, static_cast<std::uint64_t>(j));
        }
        if (use_domain) {
            for (auto& z : pts) z = reduce_to_domain(e, z).lift.z;
        }
        std::vector<MuF> vals(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (long long j = 0; j < static_cast<long long>(pts.size()); ++j) {
            vals[j] = eval_mu_f(field, pts[j], 0.0);
        }
        for (const MuF& v : vals) {
            const double gap = std::abs(v.mu) - v.f;
            if (gap > opts.majorant_slack) ++viol;
            worst_gap = std::max(worst_gap, gap);
            sup_f_domain = std::max(sup_f_domain, v.f);
            sup_mu = std::max(sup_mu, std::abs(v.mu));
            max_tail = std::max(max_tail, v.tail);
        }
    }
    cert.sup_mu_estimate = sup_mu;
    cert.sup_f_domain_samples = sup_f_domain;
    cert.truncation_tail = max_tail;
    cert.samples = static_cast<long long>(opts.check_points);

    push_check(out.checks, "majorant_domination", viol == 0,
               "violations=" + std::to_string(viol) + " worst_gap=" + fmt(worst_gap));
    push_check(out.checks, "maximum_principle_shadow",
               scan.sup_f >= sup_f_domain - max_tail - opts.majorant_slack,
               "sup_f_balls=" + fmt(scan.sup_f) + " sup_f_domain=" + fmt(sup_f_domain) +
                   " tail=" + fmt(max_tail));

    // termwise identity |T'(z)|^2 / rho(z) = (1 - |T z|^2)^2 / 4
    {
        std::size_t bad = 0;
        double worst = 0.0;
        for (std::size_t j = 0; j < opts.identity_draws; ++j) {
            const std::size_t k = static_cast<std::size_t>(
                u01(opts.seed, 20, j) * static_cast<double>(field.pool.size()));
            const complexd z = uniform_euclidean_disk(0.93, opts.seed + 1, j);
            const DiskAutomorphism t = field.pool.coeff(std::min(k, field.pool.size() - 1));
            const double lhs = std::norm(derivative(t, z)) / density(z);
            const double om = 1.0 - std::norm(wpc::apply(t, z));
            const double rhs = 0.25 * om * om;
            const double rel = std::abs(lhs - rhs) / std::max(rhs, 1e-300);
            worst = std::max(worst, rel);
            if (rel > opts.identity_slack) ++bad;
        }
        push_check(out.checks, "termwise_majorant_identity", bad == 0,
                   "draws=" + std::to_string(opts.identity_draws) + " worst_rel=" + fmt(worst));
    }

    // image/inverse-image Euclidean areas of B(0;1) agree
    {
        std::size_t bad = 0;
        double worst_sigma = 0.0;
        for (std::size_t k = 0; k < opts.area_symmetry_count; ++k) {
            const DiskAutomorphism h = random_automorphism(opts.seed, k);
            const McEstimate fwd =
                euclidean_area_of_image(h, 1.0, opts.area_symmetry_samples, opts.seed + 2 * k);
            const McEstimate bwd = euclidean_area_of_image(inverse(h), 1.0,
                                                           opts.area_symmetry_samples,
                                                           opts.seed + 2 * k + 1);
            const double sigma =
                std::sqrt(fwd.std_error * fwd.std_error + bwd.std_error * bwd.std_error);
            const double dev = std::abs(fwd.value - bwd.value) / std::max(sigma, 1e-300);
            worst_sigma = std::max(worst_sigma, dev);
            if (dev > 3.0) ++bad;
        }
        push_check(out.checks, "area_symmetry", bad == 0,
                   "count=" + std::to_string(opts.area_symmetry_count) +
                       " worst_dev_sigma=" + fmt(worst_sigma));
    }

    // subharmonicity of the single-base majorant away from the pulled-back balls
    {
        ThetaPool base_pool(e, {field.bases[0]});
        auto f_sum = [&](complexd z) {
            double s = 0.0;
            for (std::size_t k = 0; k < base_pool.size(); ++k) {
                const double om = 1.0 - std::norm(wpc::apply(base_pool.coeff(k), z));
                s += om * om;
            }
            return s;
        };
        const double rmin = 1.0 / std::sqrt(2.0) + 0.05;
        std::size_t found = 0, bad = 0;
        double worst = 0.0;
        for (std::uint64_t j = 0; j < 4000 && found < opts.laplacian_points; ++j) {
            complexd z = uniform_hyperbolic_ball(
                e.trivial() ? 2.6 : std::min(2.0 * std::atanh(0.97), e.circumradius), opts.seed + 7, j);
            if (!e.trivial()) {
                if (!in_domain(e, z)) continue;
            }
            if (std::abs(z) < rmin + 0.01) continue;
            // every pool translate of a domain point stays at least as far out
            bool qualifies = true;
            for (std::size_t k = 0; k < base_pool.size() && qualifies; ++k) {
                if (std::abs(wpc::apply(base_pool.coeff(k), z)) < rmin) qualifies = false;
            }
            if (!qualifies) continue;
            ++found;
            const double h = opts.fd_step;
            const double lap =
                (f_sum(z + h) + f_sum(z - h) + f_sum(z + complexd{0.0, h}) +
                 f_sum(z - complexd{0.0, h}) - 4.0 * f_sum(z)) /
                (h * h);
            worst = std::min(worst, lap);
            if (lap < -opts.laplacian_tolerance) ++bad;
        }
        push_check(out.checks, "majorant_subharmonic_outside_balls", bad == 0 && found > 0,
                   "points=" + std::to_string(found) + " min_laplacian=" + fmt(worst));
    }

    // disjointness of the epsilon0/2 balls around the base orbit
    if (cert.hypothesis_satisfied) {
        std::vector<complexd> centers;
        for (const DiskPoint& p : field.bases) {
            centers.push_back(p.z);
            for (const DomainFace& face : e.near_faces) {
                centers.push_back(wpc::apply(e.elements[face.element], p.z));
            }
        }
        std::size_t bad = 0;
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers.size(); ++i) {
            for (std::size_t j = i + 1; j < centers.size(); ++j) {
                const double d = hyperbolic_distance(centers[i], centers[j]);
                if (d < 1e-12) continue;  // same orbit point seen twice
                min_dist = std::min(min_dist, d);
                if (d < field.epsilon0 - 1e-9) ++bad;
            }
        }
        push_check(out.checks, "translate_disjointness", bad == 0,
                   "orbit_points=" + std::to_string(centers.size()) +
                       " min_center_distance=" + fmt(min_dist));
    } else {
        push_skipped(out.checks, "translate_disjointness", "hypotheses not satisfied");
    }

    // bound assertions, hypothesis gated
    if (cert.hypothesis_satisfied) {
        push_check(out.checks, "base_lower_bound",
                   cert.min_base_value >= cert.c4 - max_tail - 1e-12,
                   "min_base=" + fmt(cert.min_base_value) + " C4=" + fmt(cert.c4) +
                       " tail=" + fmt(max_tail));
        push_check(out.checks, "sup_upper_bound", cert.sup_mu_estimate <= cert.c3 + max_tail + 1e-12,
                   "sup_mu=" + fmt(cert.sup_mu_estimate) + " C3=" + fmt(cert.c3));
    } else {
        push_skipped(out.checks, "base_lower_bound",
                     "hypotheses not satisfied; min_base=" + fmt(cert.min_base_value) +
                         " C4=" + fmt(cert.c4));
        push_skipped(out.checks, "sup_upper_bound",
                     "hypotheses not satisfied; sup_mu=" + fmt(cert.sup_mu_estimate) +
                         " C3=" + fmt(cert.c3));
    }

    return out;
}

}  // namespace wpc
