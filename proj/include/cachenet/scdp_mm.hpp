#pragma once

#include "cachenet/model.hpp"

namespace cachenet {

// Evaluation context for the noise-limited mmWave tier. The critical radii
// are the distances at which the received SNR equals the threshold on a LOS
// respectively NLOS link:
//
//   d = (P G beta / (phi sigma^2))^(1/alpha).
//
// A content is delivered iff the nearest caching SBS lies inside the
// matching radius, which gives closed-form delivery probabilities.
struct MmCoverageContext {
    MmTierConfig cfg;
    double phi;     // SINR threshold
    double d_los;   // critical radius with the LOS exponent
    double d_nlos;  // critical radius with the NLOS exponent

    MmCoverageContext(const MmTierConfig& config, double threshold);
};

// Delivery probability over a LOS link: the serving SBS must fall within
// min(D_L, d_los) of the user. 1 - exp(-min(D_L,d_los)^2 pi b lambda).
double scdp_content_mm_los(double b, const MmCoverageContext& ctx);

// Delivery probability over an NLOS link: the serving SBS lies in the
// annulus (D_L, max(D_L, d_nlos)]. Exactly 0 once d_nlos <= D_L.
double scdp_content_mm_nlos(double b, const MmCoverageContext& ctx);

// LOS + NLOS delivery probability for one content cached with probability b.
double scdp_content_mm(double b, const MmCoverageContext& ctx);

// Popularity-weighted total over the catalog.
double scdp_total_mm(const PlacementVector& placement, const ContentLibrary& lib,
                     const MmCoverageContext& ctx);

}  // namespace cachenet
