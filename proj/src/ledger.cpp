#include "ieswpt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ieswpt/profile.hpp"

namespace ieswpt {

// Conservation audit. Replays the trace against the flow rules using only
// interval arithmetic over the recorded snapshots: while coupled the
// receiver draws exactly p_r (battery + buffer), while discharging the
// battery is fed from the buffer alone, while idle nothing moves. Also
// enforces buffer bounds, battery monotonicity, coupling exclusivity, and
// the final delivered-energy totals.
LedgerReport energy_ledger_check(const SimResult& r, const ValidatedScenario& s) {
    if (r.trace.empty()) {
        throw std::invalid_argument("energy_ledger_check requires a traced run");
    }

    const ReceiverSpec& rx = s.receiver();
    const int n = s.n();
    DemandModel dm(s.profile(), rx.q_c_j);
    const double expected_delivered =
        (1.0 - s.initial_soc()) * dm.total_energy_j();

    enum class Mode { Pre, Coupled, Saturated, Discharging, Standby, Done };
    struct Rx {
        Mode mode = Mode::Pre;
        bool seen = false;
        double t = 0.0, ies = 0.0, battery = 0.0;
    };
    std::vector<Rx> st(n);

    LedgerReport rep;
    double residual = 0.0;
    auto flag = [&](double v, const EventRecord& rec, const char* what) {
        if (v > residual) residual = v;
        if (v > 1e-6 && rep.detail.empty()) {
            std::ostringstream os;
            os << what << " off by " << v << " J at t=" << rec.time_s
               << " receiver=" << rec.receiver << " event=" << to_string(rec.kind);
            rep.detail = os.str();
        }
    };
    auto structural = [&](const std::string& msg) {
        rep.ok = false;
        if (rep.detail.empty()) rep.detail = msg;
    };

    // an IesFull decouples unless it comes after the last coupling of the run
    std::size_t last_couple_idx = 0;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        if (r.trace[i].kind == EventKind::CoupleStart) last_couple_idx = i;
    }

    int coupled_rx = -1;
    double prev_time = r.trace.front().time_s;
    for (std::size_t idx = 0; idx < r.trace.size(); ++idx) {
        const EventRecord& rec = r.trace[idx];
        if (rec.time_s < prev_time) structural("trace times decrease");
        prev_time = rec.time_s;
        if (rec.receiver < 0) continue;
        if (rec.receiver >= n) {
            structural("receiver index out of range");
            continue;
        }
        Rx& x = st[rec.receiver];

        if (x.seen) {
            const double dt = rec.time_s - x.t;
            const double db = rec.battery_energy_j - x.battery;
            const double di = rec.ies_energy_j - x.ies;
            if (db < 0.0) flag(-db, rec, "battery decreased");
            switch (x.mode) {
                case Mode::Pre:
                case Mode::Standby:
                case Mode::Done:
                    flag(std::abs(db), rec, "battery moved while idle");
                    flag(std::abs(di), rec, "buffer moved while idle");
                    break;
                case Mode::Discharging:
                    flag(std::abs(db + di), rec, "discharge not conservative");
                    flag(std::max(0.0, di), rec, "buffer rose while discharging");
                    break;
                case Mode::Coupled:
                    flag(std::abs(rx.p_r_w * dt - (db + di)), rec, "coupled draw");
                    break;
                case Mode::Saturated:
                    flag(std::max(0.0, (db + di) - rx.p_r_w * dt), rec,
                         "saturated draw above p_r");
                    flag(std::max(0.0, -(db + di)), rec, "saturated draw negative");
                    break;
            }
        }
        flag(std::max(0.0, -rec.ies_energy_j), rec, "buffer below zero");
        flag(std::max(0.0, rec.ies_energy_j - rx.q_ies_j), rec, "buffer above capacity");

        switch (rec.kind) {
            case EventKind::CoupleStart:
                if (coupled_rx >= 0) structural("two receivers coupled at once");
                coupled_rx = rec.receiver;
                x.mode = Mode::Coupled;
                break;
            case EventKind::IesFull:
                if (coupled_rx != rec.receiver) structural("IesFull while not coupled");
                if (idx < last_couple_idx) {
                    x.mode = Mode::Discharging;
                    coupled_rx = -1;
                } else {
                    x.mode = Mode::Saturated;
                }
                break;
            case EventKind::IesEmpty:
                if (x.mode != Mode::Discharging) structural("IesEmpty while not discharging");
                x.mode = Mode::Standby;
                break;
            case EventKind::BatteryFull:
                flag(std::abs(rec.battery_energy_j - expected_delivered), rec,
                     "final delivered energy");
                if (coupled_rx == rec.receiver) coupled_rx = -1;
                x.mode = Mode::Done;
                break;
            default:
                break;  // SwitchDone / TxIdle*: snapshots only
        }
        x.seen = true;
        x.t = rec.time_s;
        x.ies = rec.ies_energy_j;
        x.battery = rec.battery_energy_j;
    }

    for (int i = 0; i < n; ++i) {
        if (st[i].mode != Mode::Done) structural("receiver never finished in trace");
    }

    rep.max_residual_j = residual;
    if (residual > 1e-6) rep.ok = false;
    return rep;
}

}  // namespace ieswpt
