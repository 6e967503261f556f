#include "ieswpt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ieswpt/analytic.hpp"
#include "ieswpt/profile.hpp"

namespace ieswpt {

// Grid-stepped cross-check of the event engine: same protocol rules,
// forward-Euler energy accounting, transitions detected at step
// boundaries. Deliberately built on delivered-energy state (not the
// engine's clock walk) so the two implementations share nothing but the
// demand curve.
SimResult run_fixed_step(const ValidatedScenario& s, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be positive");

    const ReceiverSpec& rx = s.receiver();
    const int n = s.n();
    const double p_r = rx.p_r_w;
    const double q_ies = rx.q_ies_j;
    DemandModel dm(s.profile(), rx.q_c_j);
    const double e_init = s.initial_soc() * dm.total_energy_j();
    const double need = dm.total_energy_j() - e_init;

    enum class Mode { Initial, Coupled, Discharging, Standby, Done };
    struct R {
        double e = 0.0;  // delivered this run
        double ies = 0.0;
        Mode mode = Mode::Initial;
        double finish = -1.0;
        double standby = 0.0;
    };
    std::vector<R> r(n);

    enum class Tx { Coupled, Switching, Waiting, Parked };
    Tx tx = Tx::Parked;
    int target = -1;
    double switch_end = 0.0;

    const double conv = conventional_t_oc(rx, n, s.profile(), s.initial_soc());
    const double guard =
        10.0 * (conv + n * rx.t_d_s * (dm.total_energy_j() / q_ies + 2.0)) + 1.0;

    SimResult out;
    long switch_count = 0;
    long coupled_steps = 0;
    int done_count = 0;

    auto pending = [&](int i) {
        return r[i].mode != Mode::Done && r[i].ies < need - r[i].e;
    };
    auto demand = [&](const R& ri) { return dm.power(dm.time_at_energy(e_init + ri.e)); };
    auto couple = [&](int i) {
        r[i].mode = Mode::Coupled;
        tx = Tx::Coupled;
        target = i;
        ++switch_count;
    };
    auto retarget = [&](double t, int from) {
        for (int k = 1; k <= n; ++k) {
            const int j = (from + k) % n;
            if (pending(j)) {
                tx = Tx::Switching;
                target = j;
                switch_end = t + rx.t_d_s;
                return;
            }
        }
        tx = Tx::Parked;
        target = -1;
    };

    couple(0);

    for (long k = 0; done_count < n; ++k) {
        const double t = k * dt_s;
        if (t > guard) throw SimulationError("fixed-step guard exceeded");

        if ((tx == Tx::Switching || tx == Tx::Waiting) && target >= 0 &&
            r[target].mode == Mode::Done) {
            retarget(t, target);
        }
        if (tx == Tx::Switching && t >= switch_end) tx = Tx::Waiting;
        if (tx == Tx::Waiting && r[target].ies <= 0.0) couple(target);

        if (tx == Tx::Coupled) ++coupled_steps;

        for (int i = 0; i < n; ++i) {
            R& ri = r[i];
            switch (ri.mode) {
                case Mode::Coupled: {
                    const double d = demand(ri);
                    if (ri.ies >= q_ies && d <= p_r) {
                        ri.e += d * dt_s;
                    } else if (ri.ies <= 0.0 && d > p_r) {
                        ri.e += p_r * dt_s;
                    } else {
                        ri.e += d * dt_s;
                        ri.ies = std::clamp(ri.ies + (p_r - d) * dt_s, 0.0, q_ies);
                    }
                    if (ri.e >= need) {
                        ri.e = need;
                        ri.mode = Mode::Done;
                        ri.finish = t + dt_s;
                        ++done_count;
                        retarget(t + dt_s, i);
                    } else if (ri.ies >= q_ies) {
                        bool other = false;
                        for (int j = 0; j < n && !other; ++j)
                            if (j != i && pending(j)) other = true;
                        if (other) {
                            ri.mode = Mode::Discharging;
                            retarget(t + dt_s, i);
                        }
                        // else: saturated, stays coupled
                    }
                    break;
                }
                case Mode::Discharging: {
                    const double d = demand(ri);
                    const double take = std::min(d * dt_s, ri.ies);
                    ri.e += take;
                    ri.ies -= take;
                    if (ri.e >= need) {
                        ri.e = need;
                        ri.mode = Mode::Done;
                        ri.finish = t + dt_s;
                        ++done_count;
                    } else if (ri.ies <= 0.0) {
                        ri.ies = 0.0;
                        ri.mode = Mode::Standby;
                    }
                    break;
                }
                case Mode::Standby:
                    ri.standby += dt_s;
                    break;
                default:
                    break;
            }
        }
    }

    out.per_receiver_finish_s.resize(n);
    double t_oc = 0.0;
    double standby = 0.0;
    for (int i = 0; i < n; ++i) {
        out.per_receiver_finish_s[i] = r[i].finish;
        t_oc = std::max(t_oc, r[i].finish);
        standby += r[i].standby;
    }
    out.t_oc_s = t_oc;
    out.total_standby_s = standby;
    out.switch_count = switch_count;
    out.tx_busy_fraction = t_oc > 0.0 ? coupled_steps * dt_s / t_oc : 0.0;
    return out;
}

}  // namespace ieswpt
