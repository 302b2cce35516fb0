#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ghostflow/currents.hpp"
#include "ghostflow/rng.hpp"

namespace ghostflow::corr {

// One equilibrium trajectory sampled at a fixed frame spacing.
struct MemberSeries {
    double frame_dt = 0.0; // microscopic time between frames
    std::vector<fields::CurrentTotals> frames;
};

// Independent trajectory members from the same Gibbs state.
struct Ensemble {
    int dim = 2;
    double volume = 0.0;
    std::vector<MemberSeries> members;

    std::size_t total_frames() const {
        std::size_t n = 0;
        for (const auto& m : members) n += m.frames.size();
        return n;
    }
    double frame_dt() const { return members.empty() ? 0.0 : members.front().frame_dt; }
};

using Extractor = std::function<double(const fields::CurrentTotals&)>;

// common channels
Extractor ex_z(int mu);                 // conserved totals: mu = 0..d+1
Extractor ex_wstar(int b, int k);       // momentum current
Extractor ex_w_energy(int k);           // energy current
Extractor ex_phi_ab(int a, int b);      // static Y kernel
Extractor ex_v_we(int g, int m);        // v^g w^{d+1,m}
Extractor ex_d_leg(int g, int m);       // v^g w^{d+1,m} + A^{gm}
Extractor ex_c_cur(int g, int s);
Extractor ex_n_cur(int g, int m);

// per-member scalar series
using Series = std::vector<std::vector<double>>;
Series extract_series(const Ensemble& ens, const Extractor& ex);
double ensemble_mean(const Series& s);
Series centered(const Series& s);

// Lagged correlation estimate with counts; stderr from a bootstrap over
// members (when enough members) or origin blocks.
struct CorrelationSeries {
    std::string label;
    double frame_dt = 0.0;
    std::vector<double> lag_time;
    std::vector<double> value;
    std::vector<long> count;
    std::vector<double> stderr_;
};

// Partial accumulator: a commutative monoid over members.  Merging partials
// in a fixed order reproduces the single-pass result exactly.
class CorrelationAccumulator {
public:
    CorrelationAccumulator(std::size_t max_lag = 0) : max_lag_(max_lag) {}

    // A and B are centered per-member series; adds every time origin of one
    // member.  C(tau) pairs A(t0 + tau) with B(t0).
    void add_member(const std::vector<double>& a, const std::vector<double>& b);
    // three-current variant: adds product leg AB at equal times against w at
    // the origin; ab_mean is subtracted from the product
    void add_member_product(const std::vector<double>& a, const std::vector<double>& b,
                            double ab_mean, const std::vector<double>& w);
    void merge(const CorrelationAccumulator& other);

    CorrelationSeries finalize(double frame_dt, double volume, const std::string& label,
                               std::uint64_t bootstrap_seed = 1234,
                               int n_boot = 200) const;

    // plain average over a member subset (bootstrap replicates)
    CorrelationSeries finalize_subset(const std::vector<std::size_t>& pick, double frame_dt,
                                      double volume, const std::string& label = "") const;

    std::size_t n_members() const { return members_.size(); }
    std::size_t max_lag() const { return max_lag_; }

private:
    struct Partial {
        std::vector<double> sum;
        std::vector<long> count;
    };
    std::size_t max_lag_ = 0;
    std::vector<Partial> members_;
};

// space-integrated two-point correlation: C(tau) = (1/V) <dA(t+tau) dB(t)>
CorrelationSeries time_correlation(const Ensemble& ens, const Extractor& a, const Extractor& b,
                                   std::size_t max_lag, const std::string& label = "");

// pre-centered series variant (used with slow-mode-subtracted series)
CorrelationSeries time_correlation_series(const Ensemble& ens, const Series& a, const Series& b,
                                          std::size_t max_lag, const std::string& label = "");

// three-current object: C3(tau) = (1/V) <[A B](t+tau) w(t)> with the product
// centered by its ensemble mean and w centered/projected by the caller
CorrelationSeries three_current_correlation(const Ensemble& ens, const Series& a, const Series& b,
                                            const Series& w, std::size_t max_lag,
                                            const std::string& label = "");

} // namespace ghostflow::corr
