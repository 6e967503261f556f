#pragma once

#include <vector>

#include "ieswpt/types.hpp"

namespace ieswpt {

/// Demanded battery power at charging time t (seconds of accumulated
/// charging, not wall time). Total on t >= 0; zero past the profile end.
double profile_power(const ChargeProfile& p, double t);

/// Energy delivered by charging uninterrupted for t seconds: the exact
/// piecewise-quadratic integral of profile_power from 0 to t.
double profile_cumulative(const ChargeProfile& p, double t);

/// Charging time at which the given battery-capacity fraction has been
/// delivered. Closed-form inverse of the normalized cumulative curve.
/// q_c_j bounds the Constant case; Piecewise3 uses its own total energy.
double soc_to_time_offset(const ChargeProfile& p, double s0, double q_c_j);

/// Flattened demand curve used by the engines: linear-power pieces with
/// precomputed cumulative-energy anchors. power = alpha + beta*t on
/// [t_lo, t_hi]; cum_lo = energy delivered before t_lo.
struct DemandPiece {
    double t_lo, t_hi;
    double alpha, beta;
    double cum_lo;
};

/// Demand curve of one receiver bound to a scenario: pieces, total energy
/// target, and the end of the charging clock.
class DemandModel {
public:
    DemandModel(const ChargeProfile& p, double q_c_j);

    double power(double t) const;
    double cumulative(double t) const;
    /// Charging time at which cumulative(t) == e; e clamped to [0, total].
    double time_at_energy(double e) const;

    double total_energy_j() const { return total_j_; }
    double end_time_s() const { return end_s_; }
    const std::vector<DemandPiece>& pieces() const { return pieces_; }
    /// Index of the piece containing t (clock times at a boundary belong
    /// to the piece ending there, matching the curve's half-open segments).
    std::size_t piece_at(double t) const;

private:
    std::vector<DemandPiece> pieces_;
    double total_j_ = 0.0;
    double end_s_ = 0.0;
};

}  // namespace ieswpt
