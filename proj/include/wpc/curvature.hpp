#pragma once

#include "wpc/beltrami.hpp"
#include "wpc/quadrature.hpp"

// The two numerically evaluable sides of the holomorphic sectional curvature
// story: the -2 sup|mu|^2 / ||mu||^2 lower bound and the -1/(2 pi (g-1))
// upper bound, assembled into a consistency bracket.

namespace wpc {

struct CurvatureBracket {
    double hk_lower = 0.0;
    double tw_upper = 0.0;
    int genus = 0;
    double slack = 0.0;         // 3 sigma propagated from the norm estimate
    bool consistent = false;    // hk_lower <= tw_upper + slack
    bool asserted = false;      // false for the trivial pseudo-surface
    double width = 0.0;
    double ratio_times_genus = 0.0;  // |hk_lower| * g, trend reporting only
};

// -2 sup^2 / norm; throws on a nonpositive norm estimate.
double hk_lower_bound(const BoundCertificate& cert, const McEstimate& norm);

// -1/(2 pi (genus - 1)); genus must be >= 2.
double tromba_wolpert_upper(int genus);

CurvatureBracket bracket_report(const BeltramiField& field, const BoundCertificate& cert,
                                const McEstimate& norm, int genus);

}  // namespace wpc
