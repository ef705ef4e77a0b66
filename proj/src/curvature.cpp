#include "wpc/curvature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpc {

double hk_lower_bound(const BoundCertificate& cert, const McEstimate& norm) {
    if (!(norm.value > 0.0)) {
        throw std::runtime_error("hk_lower_bound: norm estimate must be positive");
    }
    return -2.0 * cert.sup_mu_estimate * cert.sup_mu_estimate / norm.value;
}

double tromba_wolpert_upper(int genus) {
    if (genus < 2) throw std::invalid_argument("tromba_wolpert_upper: genus must be >= 2");
    return -1.0 / (2.0 * M_PI * (genus - 1));
}

CurvatureBracket bracket_report(const BeltramiField& field, const BoundCertificate& cert,
                                const McEstimate& norm, int genus) {
    CurvatureBracket b;
    b.genus = genus;
    b.hk_lower = hk_lower_bound(cert, norm);
    // 3 sigma of the norm propagated through -2 sup^2 / norm
    b.slack = std::abs(b.hk_lower) * 3.0 * norm.std_error / norm.value;

    if (genus >= 2 && !field.enumeration->trivial()) {
        b.tw_upper = tromba_wolpert_upper(genus);
        b.asserted = true;
        b.consistent = b.hk_lower <= b.tw_upper + b.slack;
        b.width = b.tw_upper - b.hk_lower;
        b.ratio_times_genus = std::abs(b.hk_lower) * genus;
    } else {
        // trivial pseudo-surface: report only
        b.tw_upper = std::numeric_limits<double>::quiet_NaN();
        b.asserted = false;
        b.consistent = true;
        b.width = std::numeric_limits<double>::quiet_NaN();
        b.ratio_times_genus = std::numeric_limits<double>::quiet_NaN();
    }
    return b;
}

}  // namespace wpc
