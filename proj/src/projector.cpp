#include "ghostflow/projector.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"

namespace ghostflow::corr {

ProjectionBasis build_projector(const Ensemble& ens, bool relax_count) {
    const int d = ens.dim;
    const std::size_t nf = d + 2;
    const std::size_t frames = ens.total_frames();
    const std::size_t required = relax_count ? nf + 1 : nf * 50;
    if (frames < required)
        throw config_error("build_projector: need at least " + std::to_string(required) +
                           " snapshots, got " + std::to_string(frames));

    ProjectionBasis basis;
    basis.dim = d;
    basis.volume = ens.volume;
    basis.z_mean.assign(nf, 0.0);
    for (const auto& m : ens.members)
        for (const auto& f : m.frames)
            for (std::size_t mu = 0; mu < nf; ++mu) basis.z_mean[mu] += f.z[mu];
    for (auto& v : basis.z_mean) v /= static_cast<double>(frames);

    basis.gram = SmallMat(nf, nf);
    for (const auto& m : ens.members)
        for (const auto& f : m.frames)
            for (std::size_t mu = 0; mu < nf; ++mu)
                for (std::size_t nu = 0; nu < nf; ++nu)
                    basis.gram(mu, nu) += (f.z[mu] - basis.z_mean[mu]) *
                                          (f.z[nu] - basis.z_mean[nu]);
    for (std::size_t mu = 0; mu < nf; ++mu)
        for (std::size_t nu = 0; nu < nf; ++nu)
            basis.gram(mu, nu) /= static_cast<double>(frames - 1) * ens.volume;

    auto ev = symmetric_eigenvalues(basis.gram);
    double evmin = 1e300, evmax = 0.0;
    for (double e : ev) {
        evmin = std::min(evmin, e);
        evmax = std::max(evmax, std::fabs(e));
    }
    if (!(evmin > 0.0) || evmax / evmin > 1e12)
        throw degenerate_ensemble_error("projector Gram matrix is singular or ill-conditioned");
    basis.condition_number = evmax / evmin;
    basis.gram_inv = invert(basis.gram);
    return basis;
}

std::vector<double> ProjectionBasis::coefficients_series(const Ensemble& ens,
                                                         const Series& w) const {
    const std::size_t nf = static_cast<std::size_t>(dim) + 2;
    const std::size_t frames = ens.total_frames();
    double wmean = ensemble_mean(w);
    std::vector<double> cov(nf, 0.0);
    for (std::size_t m = 0; m < ens.members.size(); ++m)
        for (std::size_t t = 0; t < w[m].size(); ++t) {
            const auto& f = ens.members[m].frames[t];
            for (std::size_t mu = 0; mu < nf; ++mu)
                cov[mu] += (w[m][t] - wmean) * (f.z[mu] - z_mean[mu]);
        }
    for (auto& v : cov) v /= static_cast<double>(frames - 1) * volume;
    std::vector<double> c(nf, 0.0);
    for (std::size_t mu = 0; mu < nf; ++mu)
        for (std::size_t nu = 0; nu < nf; ++nu) c[mu] += gram_inv(mu, nu) * cov[nu];
    return c;
}

std::vector<double> ProjectionBasis::coefficients(const Ensemble& ens, const Extractor& w) const {
    return coefficients_series(ens, extract_series(ens, w));
}

Series ProjectionBasis::project_series(const Ensemble& ens, const Series& w) const {
    const std::size_t nf = static_cast<std::size_t>(dim) + 2;
    const auto c = coefficients_series(ens, w);
    Series out(ens.members.size());
    for (std::size_t m = 0; m < ens.members.size(); ++m) {
        out[m].resize(ens.members[m].frames.size());
        for (std::size_t t = 0; t < out[m].size(); ++t) {
            double v = 0.0;
            for (std::size_t mu = 0; mu < nf; ++mu)
                v += c[mu] * (ens.members[m].frames[t].z[mu] - z_mean[mu]);
            out[m][t] = v;
        }
    }
    return out;
}

Series subtract_slow_modes_series(const Ensemble& ens, const Series& w,
                                  const ProjectionBasis& basis) {
    const double wmean = ensemble_mean(w);
    const Series slow = basis.project_series(ens, w);
    Series out(w.size());
    for (std::size_t m = 0; m < w.size(); ++m) {
        out[m].resize(w[m].size());
        for (std::size_t t = 0; t < w[m].size(); ++t)
            out[m][t] = (w[m][t] - wmean) - slow[m][t];
    }
    return out;
}

Series subtract_slow_modes(const Ensemble& ens, const Extractor& w, const ProjectionBasis& basis) {
    return subtract_slow_modes_series(ens, extract_series(ens, w), basis);
}

} // namespace ghostflow::corr
