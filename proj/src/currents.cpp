#include "ghostflow/currents.hpp"

#include <cmath>

#include "ghostflow/errors.hpp"

namespace ghostflow::fields {

PerParticleCurrents accumulate_pair_currents(const md::ParticleState& s,
                                             const md::PotentialSpec& pot,
                                             const md::TorusDomain& dom) {
    const std::size_t n = s.size();
    PerParticleCurrents pc;
    pc.pair_pot.assign(n, 0.0);
    pc.psi.assign(n * 9, 0.0);
    pc.esym.assign(n * 3, 0.0);
    pc.phi_ab.assign(n * 9, 0.0);
    if (pot.is_zero() || n < 2) return pc;

    const int d = dom.dim;
    auto at = [](std::size_t i, int a, int b) {
        return (i * 3 + static_cast<std::size_t>(a)) * 3 + static_cast<std::size_t>(b);
    };
    md::for_each_pair(s, pot, dom, md::ForceMode::cell_list,
                      [&](int ii, int jj, const Vec& dx, double r2) {
                          const auto i = static_cast<std::size_t>(ii);
                          const auto j = static_cast<std::size_t>(jj);
                          const double r = std::sqrt(r2);
                          const double v = pot.value(r);
                          const double dvr = pot.derivative_over_r(r); // V'(r)/r
                          pc.pair_pot[i] += v;
                          pc.pair_pot[j] += v;
                          for (int b = 0; b < d; ++b) {
                              for (int k = 0; k < d; ++k) {
                                  // Psi^{bk} and the phi_ab kernel have an even
                                  // number of displacement factors, so both pair
                                  // members accumulate identical values
                                  const double psi = -dvr * dx[b] * dx[k];
                                  pc.psi[at(i, b, k)] += psi;
                                  pc.psi[at(j, b, k)] += psi;
                                  // phi_ab[a][b] = V'(r)/r (xi^b)^2 (xi^a)^2
                                  const double phiab = dvr * dx[k] * dx[k] * dx[b] * dx[b];
                                  pc.phi_ab[at(i, b, k)] += phiab;
                                  pc.phi_ab[at(j, b, k)] += phiab;
                              }
                          }
                          for (int k = 0; k < d; ++k) {
                              double acc = 0.0;
                              for (int g = 0; g < d; ++g) {
                                  const double psi = -dvr * dx[g] * dx[k];
                                  acc += psi * 0.5 * (s.vel[i][g] + s.vel[j][g]);
                              }
                              pc.esym[i * 3 + static_cast<std::size_t>(k)] += 0.5 * acc;
                              pc.esym[j * 3 + static_cast<std::size_t>(k)] += 0.5 * acc;
                          }
                      });
    return pc;
}

CurrentTotals current_totals(const md::ParticleState& s, const md::PotentialSpec& pot,
                             const md::TorusDomain& dom) {
    const int d = dom.dim;
    const std::size_t n = s.size();
    CurrentTotals t;
    t.time = s.time;
    t.dim = d;
    t.volume = dom.volume();

    const PerParticleCurrents pc = accumulate_pair_currents(s, pot, dom);
    auto at = [](std::size_t i, int a, int b) {
        return (i * 3 + static_cast<std::size_t>(a)) * 3 + static_cast<std::size_t>(b);
    };

    t.z[0] = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double zi_e = 0.5 * norm2(s.vel[i], d) + 0.5 * pc.pair_pot[i];
        t.z[d + 1] += zi_e;
        for (int k = 0; k < d; ++k) {
            t.z[1 + k] += s.vel[i][k];
            const double esym_k = pc.esym[i * 3 + static_cast<std::size_t>(k)];
            t.w_energy[k] += s.vel[i][k] * zi_e + esym_k;
            for (int b = 0; b < d; ++b) {
                const double psi_bk = pc.psi[at(i, b, k)];
                t.wstar[b][k] += s.vel[i][b] * s.vel[i][k] + 0.5 * psi_bk;
                t.phi_ab[b][k] += 0.5 * pc.phi_ab[at(i, b, k)];
                t.a_cur[b][k] += zi_e * psi_bk;
                t.v_we[b][k] += s.vel[i][b] * (s.vel[i][k] * zi_e + esym_k);
                t.c_cur[b][k] += 0.5 * s.vel[i][k] * pc.esym[i * 3 + static_cast<std::size_t>(b)];
                double nsum = 0.0;
                for (int kk = 0; kk < d; ++kk)
                    nsum += pc.psi[at(i, kk, k)] * pc.psi[at(i, kk, b)];
                t.n_cur[b][k] += -0.125 * nsum;
            }
        }
    }
    return t;
}

VirialResult virial_pressure(const std::vector<md::ParticleState>& ensemble, double temperature,
                             double rho, const md::PotentialSpec& pot,
                             const md::TorusDomain& dom) {
    if (ensemble.empty()) throw config_error("virial_pressure: empty ensemble");
    const int d = dom.dim;
    const double vol = dom.volume();
    std::vector<double> samples;
    std::vector<std::vector<double>> channel(static_cast<std::size_t>(d));
    samples.reserve(ensemble.size());
    for (const auto& s : ensemble) {
        double trace = 0.0;
        double diag[3] = {0.0, 0.0, 0.0};
        if (!pot.is_zero() && s.size() >= 2) {
            md::for_each_pair(s, pot, dom, md::ForceMode::cell_list,
                              [&](int, int, const Vec& dx, double r2) {
                                  const double r = std::sqrt(r2);
                                  const double dvr = pot.derivative_over_r(r);
                                  for (int b = 0; b < d; ++b) {
                                      const double psi_bb = -dvr * dx[b] * dx[b];
                                      diag[b] += psi_bb;
                                      trace += psi_bb;
                                  }
                              });
        }
        samples.push_back(rho * temperature + trace / (d * vol));
        for (int b = 0; b < d; ++b)
            channel[static_cast<std::size_t>(b)].push_back(rho * temperature + diag[b] / vol);
    }
    VirialResult out;
    out.pressure = mean_stderr(samples);
    for (int b = 0; b < d; ++b)
        out.per_channel.push_back(mean_stderr(channel[static_cast<std::size_t>(b)]));
    return out;
}

} // namespace ghostflow::fields
