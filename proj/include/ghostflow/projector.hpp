#pragma once

#include "ghostflow/correlation.hpp"
#include "ghostflow/smallmat.hpp"

namespace ghostflow::corr {

// Projector onto the span of the conserved fields.  In the space-integrated
// (totals) representation the scalar product (phi, z^mu) is the covariance
// of the totals divided by the volume, and the Gram matrix is the covariance
// of the conserved totals themselves.
struct ProjectionBasis {
    int dim = 2;
    double volume = 0.0;
    std::vector<double> z_mean;  // d+2 entries
    SmallMat gram;               // (z, z)
    SmallMat gram_inv;
    double condition_number = 0.0;

    // projection coefficients c_nu of an observable:  P W = sum_nu c_nu Z^nu
    std::vector<double> coefficients(const Ensemble& ens, const Extractor& w) const;
    std::vector<double> coefficients_series(const Ensemble& ens, const Series& w) const;

    // slow part of each frame of the (centered) observable
    Series project_series(const Ensemble& ens, const Series& w) const;
};

// Gram matrix from snapshot totals.  Production preconditions ask for at
// least (d+2)*50 snapshots; tests may relax the count but a singular Gram
// always raises degenerate_ensemble_error.
ProjectionBasis build_projector(const Ensemble& ens, bool relax_count = false);

// w_bar = w - P w, centered; output aligned with ens members/frames
Series subtract_slow_modes(const Ensemble& ens, const Extractor& w, const ProjectionBasis& basis);
Series subtract_slow_modes_series(const Ensemble& ens, const Series& w,
                                  const ProjectionBasis& basis);

} // namespace ghostflow::corr
