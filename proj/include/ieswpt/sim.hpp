#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ieswpt/types.hpp"

namespace ieswpt {

enum class EventKind {
    CoupleStart,
    IesFull,
    IesEmpty,
    BatteryFull,
    SwitchDone,
    TxIdleStart,
    TxIdleEnd,
};

const char* to_string(EventKind k);

/// One timestamped row of the schedule trace. ies/battery snapshot the
/// event's receiver at the event time; receiver -1 marks a transmitter
/// event with no target.
struct EventRecord {
    double time_s = 0.0;
    int receiver = -1;
    EventKind kind = EventKind::CoupleStart;
    double ies_energy_j = 0.0;
    double battery_energy_j = 0.0;

    bool operator==(const EventRecord&) const = default;
};

struct SimResult {
    double t_oc_s = 0.0;                       // last battery-full instant
    std::vector<double> per_receiver_finish_s;
    double total_standby_s = 0.0;              // summed charge interruptions
    long switch_count = 0;                     // transmitter retargets (couplings)
    double tx_busy_fraction = 0.0;             // coupled time / t_oc
    std::vector<EventRecord> trace;            // empty unless requested
};

/// Event-driven run of the switching protocol. Exact closed-form event
/// times; no time discretization.
///
/// Rules: round-robin over receivers that still need transmitter energy
/// (buffer below remaining demand). On retarget the transmitter switches
/// for t_d and couples once the target's buffer is drained, idling if it
/// arrives early. A coupled receiver feeds its battery at the demanded
/// power and its buffer with the surplus; it decouples when the buffer
/// fills (if another receiver is waiting) or its battery completes. The
/// first coupling at t = 0 carries no switch delay. Decoupled receivers
/// drain their buffer into the battery; an empty buffer before the next
/// turn is standby time.
SimResult run_event_sim(const ValidatedScenario& s, bool trace);

/// Brute-force cross-check: the same protocol advanced on a fixed grid
/// with forward-Euler energy accounting. Event times quantize to the
/// grid. Only for validating run_event_sim.
SimResult run_fixed_step(const ValidatedScenario& s, double dt_s);

/// Conservation audit of a traced run.
struct LedgerReport {
    bool ok = true;
    double max_residual_j = 0.0;  // worst |recorded - replayed| energy
    std::string detail;           // first violation, when not ok
};

/// Replays the trace through an independent interval integrator and checks
/// the recorded buffer/battery energies, buffer bounds, battery
/// monotonicity, and coupling exclusivity. Not ok if the residual exceeds
/// 1e-6 J or any structural rule breaks.
LedgerReport energy_ledger_check(const SimResult& r, const ValidatedScenario& s);

}  // namespace ieswpt
