#include "wpc/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <numeric>

#include "wpc/rng.hpp"

namespace wpc {

ThetaPool::ThetaPool(const GroupEnumeration& e, const std::vector<DiskPoint>& bases) {
    if (bases.empty()) throw std::invalid_argument("ThetaPool: need at least one base point");
    bases_ = bases.size();
    deepest_level_ = e.max_word_length;

    const std::size_t n = e.size() * bases.size();
    std::vector<DiskAutomorphism> terms;
    terms.reserve(n);
    std::vector<std::uint8_t> levels;
    levels.reserve(n);
    for (const DiskPoint& p : bases) {
        const DiskAutomorphism sig_inv = inverse(translator(p));
        for (std::size_t j = 0; j < e.size(); ++j) {
            terms.push_back(compose(sig_inv, e.elements[j]));
            levels.push_back(e.word_length[j]);
        }
    }

    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = displacement(terms[j]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&d](std::size_t x, std::size_t y) { return d[x] < d[y]; });

    are_.resize(n);
    aim_.resize(n);
    bre_.resize(n);
    bim_.resize(n);
    disp_.resize(n);
    level_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        are_[k] = terms[j].a.real();
        aim_[k] = terms[j].a.imag();
        bre_[k] = terms[j].b.real();
        bim_[k] = terms[j].b.imag();
        disp_[k] = d[j];
        level_[k] = levels[j];
    }
    suffix_.assign(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        suffix_[k] = suffix_[k + 1] + std::exp(-2.0 * disp_[k]);
    }
}

double ThetaPool::suffix_bound(complexd z, std::size_t k) const {
    const double s = 1.0 - std::norm(z);
    const double factor = 16.0 * std::exp(2.0 * distance_to_origin(z)) / (s * s);
    return factor * suffix_[k];
}

std::size_t ThetaPool::cutoff(complexd z, double eta) const {
    if (eta <= 0.0) return size();
    const double s = 1.0 - std::norm(z);
    const double factor = 16.0 * std::exp(2.0 * distance_to_origin(z)) / (s * s);
    const double target = eta / factor;
    // suffix_ decreases, so the first admissible index is a lower bound search
    const auto it = std::lower_bound(suffix_.begin(), suffix_.end(), target,
                                     [](double suf, double tgt) { return suf > tgt; });
    return static_cast<std::size_t>(it - suffix_.begin());
}

namespace {

struct KahanC {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    void add(complexd v) {
        double y = v.real() - cre, t = re + y;
        cre = (t - re) - y;
        re = t;
        y = v.imag() - cim;
        t = im + y;
        cim = (t - im) - y;
        im = t;
    }
    complexd get() const { return {re, im}; }
};

}  // namespace

namespace {

// term = 1/den^4 = conj(den)^4 / |den|^8, division-free except one real divide
inline complexd theta_term(double are, double aim, double bre, double bim, complexd z) {
    const double dre = bre * z.real() + bim * z.imag() + are;
    const double dim = bre * z.imag() - bim * z.real() - aim;
    const double x2 = dre * dre - dim * dim;
    const double y2 = 2.0 * dre * dim;
    const double x4 = x2 * x2 - y2 * y2;
    const double y4 = 2.0 * x2 * y2;
    const double n2 = dre * dre + dim * dim;
    const double n4 = n2 * n2;
    const double inv = 1.0 / (n4 * n4);
    return {x4 * inv, -y4 * inv};
}

}  // namespace

ThetaEval theta_series(const ThetaPool& pool, complexd z, double eta) {
    const std::size_t cut = pool.cutoff(z, eta);
    const double* are = pool.are();
    const double* aim = pool.aim();
    const double* bre = pool.bre();
    const double* bim = pool.bim();
    const auto& lev = pool.level();
    const int deepest = pool.deepest_level();

    KahanC sum;
    double shell = 0.0, cshell = 0.0;
    for (std::size_t k = 0; k < cut; ++k) {
        const complexd term = theta_term(are[k], aim[k], bre[k], bim[k], z);
        sum.add(term);
        if (lev[k] == deepest) {
            const double y = std::abs(term) - cshell;
            const double t = shell + y;
            cshell = (t - shell) - y;
            shell = t;
        }
    }
    ThetaEval out;
    out.value = sum.get();
    out.shell_tail = shell;
    out.skipped_bound = cut < pool.size() ? pool.suffix_bound(z, cut) : 0.0;
    return out;
}

ThetaEval theta_series_serial(const ThetaPool& pool, complexd z) {
    const auto& lev = pool.level();
    const int deepest = pool.deepest_level();
    complexd sum{0.0, 0.0};
    double shell = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const DiskAutomorphism t = pool.coeff(k);
        const complexd den = std::conj(t.b) * z + std::conj(t.a);
        const complexd d2 = den * den;
        const complexd term = 1.0 / (d2 * d2);
        sum += term;
        if (lev[k] == deepest) shell += std::abs(term);
    }
    return ThetaEval{sum, shell, 0.0};
}

void theta_series_batch(const ThetaPool& pool, const std::vector<complexd>& zs,
                        std::vector<ThetaEval>& out, double eta) {
    out.resize(zs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long long j = 0; j < static_cast<long long>(zs.size()); ++j) {
        out[j] = theta_series(pool, zs[j], eta);
    }
}

void theta_abs2_batch(const ThetaPool& pool, const std::vector<complexd>& zs,
                      std::vector<double>& out, double eta) {
    out.resize(zs.size());
    const double* are = pool.are();
    const double* aim = pool.aim();
    const double* bre = pool.bre();
    const double* bim = pool.bim();
#pragma omp parallel for schedule(dynamic, 64)
    for (long long j = 0; j < static_cast<long long>(zs.size()); ++j) {
        const complexd z = zs[j];
        const double zr = z.real(), zi = z.imag();
        const std::size_t cut = pool.cutoff(z, eta);
        double sr0 = 0.0, si0 = 0.0, sr1 = 0.0, si1 = 0.0;
        std::size_t k = 0;
        for (; k + 1 < cut; k += 2) {
            const double dre0 = bre[k] * zr + bim[k] * zi + are[k];
            const double dim0 = bre[k] * zi - bim[k] * zr - aim[k];
            const double dre1 = bre[k + 1] * zr + bim[k + 1] * zi + are[k + 1];
            const double dim1 = bre[k + 1] * zi - bim[k + 1] * zr - aim[k + 1];
            const double x20 = dre0 * dre0 - dim0 * dim0, y20 = 2.0 * dre0 * dim0;
            const double x21 = dre1 * dre1 - dim1 * dim1, y21 = 2.0 * dre1 * dim1;
            const double n20 = dre0 * dre0 + dim0 * dim0;
            const double n21 = dre1 * dre1 + dim1 * dim1;
            const double n40 = n20 * n20, n41 = n21 * n21;
            const double inv0 = 1.0 / (n40 * n40), inv1 = 1.0 / (n41 * n41);
            sr0 += (x20 * x20 - y20 * y20) * inv0;
            si0 -= 2.0 * x20 * y20 * inv0;
            sr1 += (x21 * x21 - y21 * y21) * inv1;
            si1 -= 2.0 * x21 * y21 * inv1;
        }
        for (; k < cut; ++k) {
            const complexd term = theta_term(are[k], aim[k], bre[k], bim[k], z);
            sr0 += term.real();
            si0 += term.imag();
        }
        const double re = sr0 + sr1, im = si0 + si1;
        out[j] = re * re + im * im;
    }
}

ThetaEval theta_series(const GroupEnumeration& e, const std::vector<DiskPoint>& bases, complexd z) {
    return theta_series(ThetaPool(e, bases), z);
}

complexd closed_form_projection(const ThetaPool& pool, double r, complexd z, double eta) {
    if (!(r > 0.0)) throw std::invalid_argument("closed_form_projection: r must be > 0");
    const double t = ball_euclidean_radius(r);
    return 12.0 * t * t * theta_series(pool, z, eta).value;
}

McEstimateC project_numeric(const MeasurableForm& f, complexd z, std::size_t samples,
                            std::uint64_t seed) {
    McEstimateC est;
    est.seed = seed;
    if (f.support.empty()) {
        std::cerr << "project_numeric: empty support, returning 0\n";
        return est;
    }
    if (samples < f.support.size()) samples = f.support.size();
    const std::size_t per_ball = samples / f.support.size();

    const std::size_t nb = f.support.size();
    std::vector<complexd> ball_sum(nb, complexd{0.0, 0.0});
    std::vector<double> ball_sumsq(nb, 0.0);

#pragma omp parallel for schedule(dynamic)
    for (long long kk = 0; kk < static_cast<long long>(nb); ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        const SupportBall& ball = f.support[k];
        const DiskAutomorphism sig = translator(ball.center);
        const double t = ball_euclidean_radius(ball.radius);
        const double area = M_PI * t * t;
        KahanC sum;
        double sumsq = 0.0;
        for (std::size_t j = 0; j < per_ball; ++j) {
            const std::uint64_t ctr = static_cast<std::uint64_t>(k) * per_ball + j;
            const complexd w = uniform_euclidean_disk(t, seed, ctr);
            const complexd xi = wpc::apply(sig, w);
            const double jac = std::norm(derivative(sig, w));
            const complexd fval = f.ball_evaluator ? f.ball_evaluator(k, w, xi) : f.evaluator(xi);
            const complexd v = std::conj(fval) * bergman_kernel(z, xi) * jac;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw std::runtime_error("project_numeric: non-finite sample");
            }
            sum.add(v);
            sumsq += std::norm(v);
        }
        const double n = static_cast<double>(per_ball);
        ball_sum[k] = area * sum.get() / n;
        const complexd mean = sum.get() / n;
        const double var = std::max(0.0, sumsq / n - std::norm(mean));
        ball_sumsq[k] = area * area * var / n;  // variance of this ball's estimate
    }

    KahanC total;
    double var_total = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
        total.add(ball_sum[k]);
        var_total += ball_sumsq[k];
    }
    est.value = total.get();
    est.std_error = std::sqrt(var_total);
    est.samples = static_cast<long long>(per_ball * nb);
    return est;
}

MeasurableForm make_indicator_form(const GroupEnumeration& e, const std::vector<DiskPoint>& bases,
                                   double r) {
    if (!(r > 0.0)) throw std::invalid_argument("make_indicator_form: r must be > 0");
    MeasurableForm f;

    struct Piece {
        DiskAutomorphism gamma;
        DiskAutomorphism sigma;
        DiskAutomorphism gamma_sigma_inv;  // (gamma . sigma)^{-1}
        DiskAutomorphism gamma_inv;
        complexd center_eu;  // the ball is itself a Euclidean disk
        double radius_eu;
    };
    auto pieces = std::make_shared<std::vector<Piece>>();
    pieces->reserve(e.size() * bases.size());
    const double t = ball_euclidean_radius(r);

    for (const DiskPoint& p : bases) {
        const DiskAutomorphism sig = translator(p);
        for (std::size_t j = 0; j < e.size(); ++j) {
            const DiskAutomorphism& g = e.elements[j];
            const complexd c = wpc::apply(g, p.z);
            const double c2 = std::norm(c);
            // image of |w| < t under the translator to c: disk with
            const complexd ceu = c * (1.0 - t * t) / (1.0 - t * t * c2);
            const double reu = t * (1.0 - c2) / (1.0 - t * t * c2);
            pieces->push_back(Piece{g, sig, inverse(compose(g, sig)), inverse(g), ceu, reu});
            f.support.push_back(SupportBall{disk_point(c), r});
        }
    }

    auto value_on_piece = [](const Piece& piece, complexd xi) {
        const complexd gp = derivative(piece.gamma, wpc::apply(piece.gamma_inv, xi));
        const complexd sp = derivative(piece.sigma, wpc::apply(piece.gamma_sigma_inv, xi));
        return (gp / std::conj(gp)) * (sp / std::conj(sp));
    };

    f.ball_evaluator = [pieces, value_on_piece](std::size_t k, complexd /*w*/, complexd xi) {
        return value_on_piece((*pieces)[k], xi);
    };

    f.evaluator = [pieces, value_on_piece](complexd xi) -> complexd {
        // the support balls are disjoint Euclidean disks; first hit wins
        for (const Piece& piece : *pieces) {
            if (std::abs(xi - piece.center_eu) < piece.radius_eu) {
                return value_on_piece(piece, xi);
            }
        }
        return complexd{0.0, 0.0};
    };
    return f;
}

}  // namespace wpc
