#include "ieswpt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ieswpt/analytic.hpp"
#include "ieswpt/profile.hpp"

namespace ieswpt {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::CoupleStart: return "CoupleStart";
        case EventKind::IesFull: return "IesFull";
        case EventKind::IesEmpty: return "IesEmpty";
        case EventKind::BatteryFull: return "BatteryFull";
        case EventKind::SwitchDone: return "SwitchDone";
        case EventKind::TxIdleStart: return "TxIdleStart";
        case EventKind::TxIdleEnd: return "TxIdleEnd";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integration mode of a coupled receiver.
//   Fill:      battery takes the demand, buffer takes the rest of p_r
//              (net buffer flow may be negative when demand > p_r)
//   Capped:    buffer empty and demand above p_r; battery takes p_r only
//   Saturated: buffer full and demand below p_r; battery takes the demand
enum class Flow { Fill, Capped, Saturated };

enum class Mode { Initial, Coupled, Discharging, Standby, Done };

struct RxState {
    Mode mode = Mode::Initial;
    Flow flow = Flow::Fill;
    double t = 0.0;    // wall time of this snapshot
    double tau = 0.0;  // charging clock; delivered energy = cum(tau)
    double ies = 0.0;
    double couple_start = 0.0;
    double standby_since = 0.0;
    double standby_accum = 0.0;
};

// Where a closed-form walk stopped: at a protocol event, or at t_limit.
struct WalkStop {
    bool hit_event = false;
    EventKind kind = EventKind::BatteryFull;
    RxState state;
};

// Smallest root of A*x^2 + B*x + C = 0 in (0, hi]; strict zero roots are
// not transitions.
std::optional<double> smallest_positive_root(double A, double B, double C, double hi) {
    double roots[2];
    int cnt = 0;
    if (A == 0.0) {
        if (B == 0.0) return std::nullopt;
        roots[cnt++] = -C / B;
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) return std::nullopt;
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
        if (q != 0.0) {
            roots[cnt++] = q / A;
            roots[cnt++] = C / q;
        } else {
            roots[cnt++] = 0.0;
            roots[cnt++] = -B / A;
        }
    }
    std::optional<double> best;
    for (int i = 0; i < cnt; ++i) {
        const double r = roots[i];
        if (r > 0.0 && r <= hi && (!best || r < *best)) best = r;
    }
    return best;
}

class Engine {
public:
    Engine(const ValidatedScenario& s, bool trace)
        : dm_(s.profile(), s.receiver().q_c_j),
          rx_(s.receiver()),
          n_(s.n()),
          keep_trace_(trace) {
        tau_init_ = dm_.time_at_energy(s.initial_soc() * dm_.total_energy_j());
        e_init_ = dm_.cumulative(tau_init_);
        // termination guard: generous multiple of the sequential time plus
        // the worst-case switching overhead of tiny buffers
        const double conv = conventional_t_oc(rx_, n_, s.profile(), s.initial_soc());
        const double switch_overhead =
            n_ * rx_.t_d_s * (dm_.total_energy_j() / rx_.q_ies_j + 2.0);
        guard_time_ = 10.0 * (conv + switch_overhead) + 1.0;
        states_.assign(n_, RxState{});
        for (auto& st : states_) st.tau = tau_init_;
        events_.assign(n_, WalkStop{});
        has_event_.assign(n_, false);
        finish_.assign(n_, -1.0);
    }

    SimResult run();

private:
    // --- closed-form receiver dynamics -------------------------------

    // Advancing always happens inside the piece holding tau with room
    // ahead; clock values at a boundary use the next piece.
    const DemandPiece& advancing_piece(double tau) const {
        const auto& pieces = dm_.pieces();
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            if (tau < pieces[i].t_hi) return pieces[i];
        }
        return pieces.back();
    }

    WalkStop walk_coupled(RxState s, double t_limit) const;
    WalkStop walk_discharging(RxState s, double t_limit) const;

    // --- protocol ------------------------------------------------------

    double remaining(const RxState& s) const {
        return dm_.total_energy_j() - dm_.cumulative(s.tau);
    }
    bool pending(int i) const {
        const RxState& s = states_[i];
        return s.mode != Mode::Done && s.ies < remaining(s);
    }
    bool any_other_pending(int i) const {
        for (int k = 0; k < n_; ++k)
            if (k != i && pending(k)) return true;
        return false;
    }

    void refresh_event(int i);
    void commit_to(int i, double t);
    void couple(int i, double t);
    void retarget(double t, int from);
    void emit(double t, int rxid, EventKind kind);

    void handle_battery_full(int i);
    void handle_ies_full(int i);
    void handle_ies_empty(int i);
    void handle_switch_done();

    DemandModel dm_;
    ReceiverSpec rx_;
    int n_;
    bool keep_trace_;
    double tau_init_ = 0.0;
    double e_init_ = 0.0;
    double guard_time_ = 0.0;

    std::vector<RxState> states_;
    std::vector<WalkStop> events_;
    std::vector<char> has_event_;
    std::vector<double> finish_;

    enum class TxMode { Coupled, Switching, Waiting, Parked };
    TxMode tx_mode_ = TxMode::Parked;
    int tx_target_ = -1;
    double switch_done_at_ = 0.0;

    int done_count_ = 0;
    long switch_count_ = 0;
    double coupled_time_ = 0.0;
    double standby_total_ = 0.0;
    std::vector<EventRecord> trace_;
};

WalkStop Engine::walk_coupled(RxState s, double t_limit) const {
    const double p_r = rx_.p_r_w;
    const double q_ies = rx_.q_ies_j;
    for (int iter = 0; iter < 1000000; ++iter) {
        const DemandPiece& pc = advancing_piece(s.tau);
        const bool last_piece = pc.t_hi == dm_.end_time_s();
        const double d0 = pc.alpha + pc.beta * s.tau;
        const double span = pc.t_hi - s.tau;
        const double lim = t_limit - s.t;

        // candidates: (dt, what). priority on ties: battery done first,
        // then buffer full, then internal flow changes, then piece/limit.
        struct Cand { double dt; int prio; int what; };
        // what: 0 battery-full, 1 ies-full, 2 flow-change@dt, 3 piece-end, 4 limit
        std::optional<Cand> best;
        auto offer = [&](double dt, int prio, int what) {
            if (!best || dt < best->dt || (dt == best->dt && prio < best->prio))
                best = Cand{dt, prio, what};
        };

        if (lim <= 0.0) {
            WalkStop stop;
            stop.state = s;
            return stop;
        }

        double flow_change_dt = -1.0;
        if (s.flow == Flow::Fill) {
            // ies(dt) = ies + (p_r - d0)*dt - beta/2*dt^2
            if (auto r = smallest_positive_root(0.5 * pc.beta, -(p_r - d0),
                                                q_ies - s.ies, span)) {
                offer(*r, 1, 1);
            }
            if (auto r = smallest_positive_root(0.5 * pc.beta, -(p_r - d0),
                                                -s.ies, span)) {
                // drain to zero only matters if demand then exceeds p_r
                if (d0 + pc.beta * *r > p_r) {
                    flow_change_dt = *r;
                    offer(*r, 2, 2);
                }
            }
            offer(span, last_piece ? 0 : 3, last_piece ? 0 : 3);
        } else if (s.flow == Flow::Capped) {
            // battery takes p_r; clock follows delivered energy
            const double e0 = dm_.cumulative(s.tau);
            double exit_tau = pc.t_hi;
            int exit_what = last_piece ? 0 : 3;
            int exit_prio = exit_what;
            if (pc.beta < 0.0) {
                const double tau_x = (p_r - pc.alpha) / pc.beta;
                if (tau_x > s.tau && tau_x < exit_tau) {
                    exit_tau = tau_x;
                    exit_what = 2;
                    exit_prio = 2;
                }
            }
            const double dt_exit = (dm_.cumulative(exit_tau) - e0) / p_r;
            if (dt_exit >= lim) {
                // stop inside the capped stretch
                s.tau = dm_.time_at_energy(e0 + p_r * lim);
                s.t = t_limit;
                WalkStop stop;
                stop.state = s;
                return stop;
            }
            s.t += dt_exit;
            s.tau = exit_tau;
            if (exit_what == 0) {
                s.tau = dm_.end_time_s();
                WalkStop stop;
                stop.hit_event = true;
                stop.kind = EventKind::BatteryFull;
                stop.state = s;
                return stop;
            }
            if (exit_what == 2) s.flow = Flow::Fill;
            continue;
        } else {  // Saturated: ies pinned at q_ies, battery takes demand
            if (pc.beta > 0.0) {
                const double tau_x = (p_r - pc.alpha) / pc.beta;
                const double dt_x = tau_x - s.tau;
                if (dt_x > 0.0 && dt_x < span) {
                    flow_change_dt = dt_x;
                    offer(dt_x, 2, 2);
                }
            }
            offer(span, last_piece ? 0 : 3, last_piece ? 0 : 3);
        }
        offer(lim, 4, 4);

        const Cand c = *best;
        auto ies_at = [&](double dt) {
            if (s.flow == Flow::Saturated) return s.ies;
            return s.ies + (p_r - d0) * dt - 0.5 * pc.beta * dt * dt;
        };
        switch (c.what) {
            case 0: {  // battery full at profile end
                s.t += c.dt;
                s.tau = dm_.end_time_s();
                s.ies = std::clamp(ies_at(c.dt), 0.0, q_ies);
                WalkStop stop;
                stop.hit_event = true;
                stop.kind = EventKind::BatteryFull;
                stop.state = s;
                return stop;
            }
            case 1: {  // buffer full
                s.t += c.dt;
                s.tau += c.dt;
                s.ies = q_ies;
                WalkStop stop;
                stop.hit_event = true;
                stop.kind = EventKind::IesFull;
                stop.state = s;
                return stop;
            }
            case 2:  // flow change
                s.t += c.dt;
                s.tau += c.dt;
                if (s.flow == Flow::Fill) {
                    s.ies = 0.0;
                    s.flow = Flow::Capped;
                } else {  // Saturated -> demand rose past p_r, buffer drains
                    s.flow = Flow::Fill;
                }
                continue;
            case 3:  // interior piece boundary
                s.t += c.dt;
                s.ies = std::clamp(ies_at(c.dt), 0.0, q_ies);
                s.tau = pc.t_hi;
                continue;
            default: {  // reached t_limit
                s.t = t_limit;
                s.ies = std::clamp(ies_at(c.dt), 0.0, q_ies);
                s.tau += c.dt;
                WalkStop stop;
                stop.state = s;
                return stop;
            }
        }
    }
    throw SimulationError("coupled-walk failed to converge (internal)");
}

WalkStop Engine::walk_discharging(RxState s, double t_limit) const {
    for (int iter = 0; iter < 1000000; ++iter) {
        const DemandPiece& pc = advancing_piece(s.tau);
        const bool last_piece = pc.t_hi == dm_.end_time_s();
        const double d0 = pc.alpha + pc.beta * s.tau;
        const double span = pc.t_hi - s.tau;
        const double lim = t_limit - s.t;
        if (lim <= 0.0) {
            WalkStop stop;
            stop.state = s;
            return stop;
        }
        // ies(dt) = ies - d0*dt - beta/2*dt^2
        const auto dt_empty =
            smallest_positive_root(0.5 * pc.beta, d0, -s.ies, span);

        double dt = span;
        int what = last_piece ? 0 : 3;
        if (dt_empty && (*dt_empty < dt || (*dt_empty == dt && what == 3)))
            what = 1, dt = *dt_empty;
        if (lim < dt) what = 4, dt = lim;

        const double ies_next =
            std::max(0.0, s.ies - d0 * dt - 0.5 * pc.beta * dt * dt);
        switch (what) {
            case 0: {
                s.t += dt;
                s.tau = dm_.end_time_s();
                s.ies = ies_next;
                WalkStop stop;
                stop.hit_event = true;
                stop.kind = EventKind::BatteryFull;
                stop.state = s;
                return stop;
            }
            case 1: {
                s.t += dt;
                s.tau += dt;
                s.ies = 0.0;
                WalkStop stop;
                stop.hit_event = true;
                stop.kind = EventKind::IesEmpty;
                stop.state = s;
                return stop;
            }
            case 3:
                s.t += dt;
                s.tau = pc.t_hi;
                s.ies = ies_next;
                continue;
            default: {
                s.t = t_limit;
                s.tau += dt;
                s.ies = ies_next;
                WalkStop stop;
                stop.state = s;
                return stop;
            }
        }
    }
    throw SimulationError("discharge-walk failed to converge (internal)");
}

void Engine::refresh_event(int i) {
    const RxState& s = states_[i];
    if (s.mode == Mode::Coupled) {
        events_[i] = walk_coupled(s, kInf);
        has_event_[i] = true;
    } else if (s.mode == Mode::Discharging) {
        events_[i] = walk_discharging(s, kInf);
        has_event_[i] = true;
    } else {
        has_event_[i] = false;
    }
}

void Engine::commit_to(int i, double t) {
    RxState& s = states_[i];
    if (s.mode == Mode::Coupled) {
        WalkStop stop = walk_coupled(s, t);
        s = stop.state;
    } else if (s.mode == Mode::Discharging) {
        WalkStop stop = walk_discharging(s, t);
        s = stop.state;
    } else {
        s.t = t;
    }
}

void Engine::emit(double t, int rxid, EventKind kind) {
    if (!keep_trace_) return;
    EventRecord rec;
    rec.time_s = t;
    rec.receiver = rxid;
    rec.kind = kind;
    if (rxid >= 0) {
        const RxState& s = states_[rxid];
        rec.ies_energy_j = s.ies;
        rec.battery_energy_j = dm_.cumulative(s.tau) - e_init_;
    }
    trace_.push_back(rec);
}

void Engine::couple(int i, double t) {
    RxState& s = states_[i];
    if (s.mode == Mode::Standby) {
        standby_total_ += t - s.standby_since;
        s.standby_accum += t - s.standby_since;
    }
    s.mode = Mode::Coupled;
    s.t = t;
    s.couple_start = t;
    const double d = dm_.power(s.tau);
    const DemandPiece& pc = advancing_piece(s.tau);
    if (s.ies <= 0.0 && (d > rx_.p_r_w || (d == rx_.p_r_w && pc.beta > 0.0))) {
        s.flow = Flow::Capped;
    } else {
        s.flow = Flow::Fill;
    }
    ++switch_count_;
    tx_mode_ = TxMode::Coupled;
    tx_target_ = i;
    emit(t, i, EventKind::CoupleStart);
    refresh_event(i);
}

void Engine::retarget(double t, int from) {
    for (int k = 1; k <= n_; ++k) {
        const int j = (from + k) % n_;
        if (pending(j)) {
            tx_mode_ = TxMode::Switching;
            tx_target_ = j;
            switch_done_at_ = t + rx_.t_d_s;
            return;
        }
    }
    tx_mode_ = TxMode::Parked;
    tx_target_ = -1;
}

void Engine::handle_battery_full(int i) {
    const double t = states_[i].t;
    finish_[i] = t;
    states_[i].mode = Mode::Done;
    has_event_[i] = false;
    ++done_count_;
    emit(t, i, EventKind::BatteryFull);
    if (tx_mode_ == TxMode::Coupled && tx_target_ == i) {
        coupled_time_ += t - states_[i].couple_start;
        retarget(t, i);
    }
}

void Engine::handle_ies_full(int i) {
    const double t = states_[i].t;
    emit(t, i, EventKind::IesFull);
    if (any_other_pending(i)) {
        coupled_time_ += t - states_[i].couple_start;
        states_[i].mode = Mode::Discharging;
        refresh_event(i);
        retarget(t, i);
    } else {
        // nobody else needs the transmitter: stay coupled, buffer pinned
        states_[i].flow = Flow::Saturated;
        refresh_event(i);
    }
}

void Engine::handle_ies_empty(int i) {
    const double t = states_[i].t;
    emit(t, i, EventKind::IesEmpty);
    if (tx_mode_ == TxMode::Waiting && tx_target_ == i) {
        emit(t, i, EventKind::TxIdleEnd);
        couple(i, t);
    } else {
        states_[i].mode = Mode::Standby;
        states_[i].standby_since = t;
        has_event_[i] = false;
    }
}

void Engine::handle_switch_done() {
    const int j = tx_target_;
    const double t = switch_done_at_;
    commit_to(j, t);
    emit(t, j, EventKind::SwitchDone);
    if (states_[j].ies <= 0.0) {
        couple(j, t);
    } else {
        tx_mode_ = TxMode::Waiting;
        emit(t, j, EventKind::TxIdleStart);
    }
}

SimResult Engine::run() {
    // the first selection carries no switch delay: couple receiver 0 at t=0
    emit(0.0, 0, EventKind::SwitchDone);
    couple(0, 0.0);

    const long max_events = 100000000;
    for (long step = 0; done_count_ < n_; ++step) {
        if (step > max_events) {
            throw SimulationError("event budget exhausted; protocol rules are stuck");
        }
        // next event: earliest time, then kind priority, then receiver id
        double best_t = kInf;
        int best_prio = 99;
        int best_rx = -1;
        bool tx_event = false;
        auto consider = [&](double t, int prio, int rxid, bool is_tx) {
            if (t < best_t || (t == best_t && prio < best_prio) ||
                (t == best_t && prio == best_prio && rxid < best_rx)) {
                best_t = t;
                best_prio = prio;
                best_rx = rxid;
                tx_event = is_tx;
            }
        };
        for (int i = 0; i < n_; ++i) {
            if (!has_event_[i]) continue;
            const int prio = events_[i].kind == EventKind::BatteryFull ? 0
                             : events_[i].kind == EventKind::IesFull   ? 1
                                                                       : 2;
            consider(events_[i].state.t, prio, i, false);
        }
        if (tx_mode_ == TxMode::Switching) {
            consider(switch_done_at_, 3, tx_target_, true);
        }
        if (best_rx < 0 && !tx_event) {
            throw SimulationError("no runnable event with receivers unfinished (internal)");
        }
        if (best_t > guard_time_) {
            throw SimulationError("simulated time exceeded the termination guard");
        }

        if (tx_event) {
            handle_switch_done();
            continue;
        }
        const int i = best_rx;
        const EventKind kind = events_[i].kind;
        states_[i] = events_[i].state;
        has_event_[i] = false;
        switch (kind) {
            case EventKind::BatteryFull: handle_battery_full(i); break;
            case EventKind::IesFull: handle_ies_full(i); break;
            case EventKind::IesEmpty: handle_ies_empty(i); break;
            default: throw SimulationError("unexpected receiver event (internal)");
        }
    }

    SimResult out;
    out.per_receiver_finish_s = finish_;
    out.t_oc_s = *std::max_element(finish_.begin(), finish_.end());
    out.total_standby_s = standby_total_;
    out.switch_count = switch_count_;
    out.tx_busy_fraction = out.t_oc_s > 0.0 ? coupled_time_ / out.t_oc_s : 0.0;
    out.trace = std::move(trace_);
    return out;
}

}  // namespace

SimResult run_event_sim(const ValidatedScenario& s, bool trace) {
    Engine engine(s, trace);
    return engine.run();
}

}  // namespace ieswpt
