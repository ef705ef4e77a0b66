#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

// Poincaré disk model: the open unit disk with metric rho(z)|dz|^2,
// rho(z) = 4/(1-|z|^2)^2, constant curvature -1.

namespace wpc {

using complexd = std::complex<double>;

inline constexpr double kBoundaryMargin = 1e-15;

// Metric density rho(z) = 4/(1-|z|^2)^2.
inline double density(complexd z) {
    const double s = 1.0 - std::norm(z);
    return 4.0 / (s * s);
}

struct DiskPoint {
    complexd z;
};

// Validating constructor; boundary and non-finite inputs are rejected since
// every formula downstream blows up at |z| = 1.
inline DiskPoint disk_point(complexd z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(z) >= 1.0 - kBoundaryMargin) {
        throw std::invalid_argument("disk_point: |z| must be < 1 - 1e-15 and finite");
    }
    return DiskPoint{z};
}

// Disk automorphism z -> (a z + b)/(conj(b) z + conj(a)) with |a|^2-|b|^2 = 1.
// The matrix [[a, b], [conj(b), conj(a)]] composes by matrix product and the
// determinant normalization removes drift in long products.
struct DiskAutomorphism {
    complexd a{1.0, 0.0};
    complexd b{0.0, 0.0};
};

inline DiskAutomorphism normalized(complexd a, complexd b) {
    const double det = std::norm(a) - std::norm(b);
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw std::invalid_argument("DiskAutomorphism: |a|^2 - |b|^2 must be positive");
    }
    const double s = std::sqrt(det);
    return DiskAutomorphism{a / s, b / s};
}

inline DiskAutomorphism identity_automorphism() { return DiskAutomorphism{}; }

inline complexd apply(const DiskAutomorphism& t, complexd z) {
    return (t.a * z + t.b) / (std::conj(t.b) * z + std::conj(t.a));
}

inline DiskPoint apply(const DiskAutomorphism& t, DiskPoint p) {
    return disk_point(wpc::apply(t, p.z));
}

// T'(z) = 1/(conj(b) z + conj(a))^2 in the normalized form.
inline complexd derivative(const DiskAutomorphism& t, complexd z) {
    const complexd d = std::conj(t.b) * z + std::conj(t.a);
    return 1.0 / (d * d);
}

inline DiskAutomorphism compose(const DiskAutomorphism& t, const DiskAutomorphism& s) {
    return normalized(t.a * s.a + t.b * std::conj(s.b),
                      t.a * s.b + t.b * std::conj(s.a));
}

inline DiskAutomorphism inverse(const DiskAutomorphism& t) {
    return DiskAutomorphism{std::conj(t.a), -t.b};
}

// Translation sigma_p with sigma_p(0) = p, sigma_p(z) = (z + p)/(1 + conj(p) z).
inline DiskAutomorphism translator(complexd p) {
    const double s = std::sqrt(1.0 - std::norm(p));
    if (!(s > 0.0)) throw std::invalid_argument("translator: |p| must be < 1");
    return DiskAutomorphism{1.0 / s, p / s};
}

inline DiskAutomorphism translator(DiskPoint p) { return translator(p.z); }

// dist(0, z) = ln((1+|z|)/(1-|z|)).
inline double distance_to_origin(complexd z) {
    const double r = std::abs(z);
    return std::log1p(r) - std::log1p(-r);
}

// Hyperbolic distance via the invariant cross-ratio: tanh(d/2) = |z-w|/|1 - conj(w) z|.
inline double hyperbolic_distance(complexd z, complexd w) {
    const double t = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
    return std::log1p(t) - std::log1p(-t);
}

inline double hyperbolic_distance(DiskPoint p, DiskPoint q) {
    return hyperbolic_distance(p.z, q.z);
}

// Euclidean radius of the hyperbolic ball B(0;r): (e^r - 1)/(e^r + 1) = tanh(r/2).
inline double ball_euclidean_radius(double r) {
    if (r < 0.0) throw std::invalid_argument("ball_euclidean_radius: r must be >= 0");
    return std::tanh(0.5 * r);
}

inline double ball_hyperbolic_radius(double t) {
    if (t < 0.0 || t >= 1.0) throw std::invalid_argument("ball_hyperbolic_radius: t in [0,1)");
    return std::log1p(t) - std::log1p(-t);
}

// dist(0, T(0)); |a| + |b| has |a|^2 - |b|^2 = 1, so the log form is exact
// even for deep elements where tanh saturates.
inline double displacement(const DiskAutomorphism& t) {
    return 2.0 * std::log(std::abs(t.a) + std::abs(t.b));
}

// trace of the normalized matrix is a + conj(a) = 2 Re a (real by construction)
inline double trace(const DiskAutomorphism& t) { return 2.0 * t.a.real(); }

inline bool is_hyperbolic(const DiskAutomorphism& t, double margin = 0.0) {
    return std::abs(trace(t)) > 2.0 + margin;
}

// Translation length 2 arccosh(|tr|/2) of a hyperbolic element.
inline double translation_length(const DiskAutomorphism& t) {
    const double h = 0.5 * std::abs(trace(t));
    if (h <= 1.0) return 0.0;
    return 2.0 * std::acosh(h);
}

// Hyperbolic area of B(0;r) is 2 pi (cosh r - 1).
inline double ball_area(double r) {
    return 2.0 * M_PI * (std::cosh(r) - 1.0);
}

// Klein model coordinates: x = 2 z / (1 + |z|^2). Dirichlet half-spaces are
// Euclidean-linear there, which makes domain membership a dot-product test.
inline complexd to_klein(complexd z) { return 2.0 * z / (1.0 + std::norm(z)); }

inline complexd from_klein(complexd x) {
    return x / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(x))));
}

}  // namespace wpc
