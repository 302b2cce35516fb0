#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ghostflow/domain.hpp"
#include "ghostflow/field_map.hpp"
#include "ghostflow/particle_state.hpp"
#include "ghostflow/potential.hpp"
#include "ghostflow/rng.hpp"

namespace ghostflow::gibbs {

// Chemical potentials of the (local) Gibbs state.  lambda_e = -1/T must be
// negative everywhere.  The optional velocity field u enters the velocity
// marginal multiplied by eps.
struct GibbsParameters {
    enum class Mode { global, local };
    Mode mode = Mode::global;
    FieldMap lambda0;  // log activity, dimensionless
    FieldMap lambda_e; // -1/T, inverse energy
    std::optional<std::array<FieldMap, 3>> u;
    double eps = 0.1;

    static GibbsParameters global(int dim, double eps, double macro_side, double lam0,
                                  double temperature);

    double lambda0_at_micro(const Vec& xi) const { return lambda0(macro_of(xi)); }
    double temperature_at_micro(const Vec& xi) const;
    Vec shifted_mean_velocity(const Vec& xi) const; // eps * u(x)

    Vec macro_of(const Vec& xi) const {
        Vec x = xi;
        for (int k = 0; k < 3; ++k) x[k] *= eps;
        return x;
    }
};

struct SamplerDiagnostics {
    long sweeps = 0;
    long attempts = 0;
    double acceptance_rate = 0.0; // all move types combined
    double acc_displacement = 0.0;
    double acc_insert = 0.0;
    double acc_delete = 0.0;
    double energy_autocorr_sweeps = 1.0;
    bool mixing_warning = false;
    long burn_in_sweeps = 0;
};

struct McmcOptions {
    bool fixed_n = false;          // canonical mode: displacement moves only
    std::size_t n_init = 0;        // initial (and, if fixed_n, permanent) count
    double displacement = 0.3;     // half-width of the uniform displacement cube
    long refresh_interval = 100;   // sweeps between full energy recomputations
};

// Position-marginal weight of the local Gibbs state:
//   log w = sum_i lambda0(x_i) - sum_{i<j} V(r_ij) (beta_i + beta_j)/2
// with beta = -lambda_e.  Conventional Boltzmann sign.
double log_config_weight(const std::vector<Vec>& pos, const GibbsParameters& params,
                         const md::PotentialSpec& pot, const md::TorusDomain& dom);

// Interaction energy of one particle at `p` against all others (skip < 0 to
// include everyone).
double particle_pair_energy(const Vec& p, const std::vector<Vec>& pos, int skip,
                            const GibbsParameters& params, const md::PotentialSpec& pot,
                            const md::TorusDomain& dom);

// Metropolis acceptance probabilities for the three elementary moves; the
// chain below uses exactly these, and the detailed-balance tests call them
// directly.
double acceptance_displacement(const std::vector<Vec>& pos, std::size_t i, const Vec& to,
                               const GibbsParameters& params, const md::PotentialSpec& pot,
                               const md::TorusDomain& dom);
double acceptance_insert(const std::vector<Vec>& pos, const Vec& at,
                         const GibbsParameters& params, const md::PotentialSpec& pot,
                         const md::TorusDomain& dom);
double acceptance_delete(const std::vector<Vec>& pos, std::size_t i,
                         const GibbsParameters& params, const md::PotentialSpec& pot,
                         const md::TorusDomain& dom);

// Grand-canonical (or fixed-N) Metropolis chain for the position marginal.
// Move mix in grand mode is displacement : insert : delete = 2 : 1 : 1.
// Strictly sequential; run independent chains for parallelism.
class McmcChain {
public:
    McmcChain(const md::TorusDomain& dom, const md::PotentialSpec& pot,
              const GibbsParameters& params, McmcOptions opts, Rng rng);

    void run(long sweeps);
    const std::vector<Vec>& positions() const { return pos_; }
    std::vector<Vec>& positions() { return pos_; }
    SamplerDiagnostics diagnostics() const;
    Rng& rng() { return rng_; }
    const std::vector<double>& energy_series() const { return energy_series_; }

private:
    void sweep();
    md::TorusDomain dom_;
    md::PotentialSpec pot_;
    GibbsParameters params_;
    McmcOptions opts_;
    Rng rng_;
    std::vector<Vec> pos_;
    long acc_[3] = {0, 0, 0};
    long att_[3] = {0, 0, 0};
    long sweeps_ = 0;
    long moves_per_sweep_ = 8;
    std::vector<double> energy_series_;
};

std::pair<std::vector<Vec>, SamplerDiagnostics>
mcmc_positions(const md::TorusDomain& dom, const md::PotentialSpec& pot,
               const GibbsParameters& params, long sweeps, Rng& rng,
               const McmcOptions& opts = {});

// Gaussian velocity marginal: v_i ~ N(eps*u(x_i), T(x_i) * Id).
std::vector<Vec> sample_velocities(const std::vector<Vec>& pos, int dim,
                                   const GibbsParameters& params, Rng& rng);

struct LocalGibbsResult {
    md::ParticleState state;
    SamplerDiagnostics diagnostics;
};

// Burn-in (potential-energy stabilization rule) + production sweeps +
// velocity draw.
LocalGibbsResult sample_local_gibbs(const GibbsParameters& params, const md::TorusDomain& dom,
                                    const md::PotentialSpec& pot, long sweeps, Rng& rng,
                                    const McmcOptions& opts = {});

} // namespace ghostflow::gibbs
