#pragma once

// Central numeric tolerances.  Modules take a NumericPolicy (defaulted) so
// tests can tighten or loosen comparisons without recompiling; nothing else
// in the library hardcodes an epsilon.

namespace boundarykit {

struct NumericPolicy {
    double rel = 1e-9;   // relative comparisons (norm identities, feasibility)
    double abs = 1e-12;  // absolute comparisons (dedup, tie-breaks, >= at tol)

    // derived, named so call sites read as intent rather than magic numbers
    double rank_tol = 1e-10;        // smallest/largest singular value cutoff
    double orthonormal_tol = 1e-10; // allowed Gram residual of a frame
    double spectral_gap_tol = 1e-12;// eigenvalue coincidence, relative to top
    double degenerate_normal_tol = 1e-9; // |projected mean normal| floor

    static const NumericPolicy& standard() {
        static const NumericPolicy p{};
        return p;
    }
};

}  // namespace boundarykit
