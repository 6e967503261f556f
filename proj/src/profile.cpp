#include "ieswpt/profile.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ieswpt {

namespace {

// Antiderivative of alpha + beta*t, taken from t = 0.
double segment_integral(double alpha, double beta, double t) {
    return alpha * t + 0.5 * beta * t * t;
}

// Smallest t in [t_lo, t_hi] with alpha*t + beta*t^2/2 == k, assuming the
// power alpha + beta*t stays positive on the segment (so the integral is
// strictly increasing there and the root is unique).
double invert_segment(double alpha, double beta, double k, double t_lo, double t_hi) {
    double t;
    if (beta == 0.0) {
        t = k / alpha;
    } else if (beta > 0.0) {
        t = (-alpha + std::sqrt(std::max(alpha * alpha + 2.0 * beta * k, 0.0))) / beta;
    } else {
        const double b = -beta;
        t = (alpha - std::sqrt(std::max(alpha * alpha - 2.0 * b * k, 0.0))) / b;
    }
    return std::clamp(t, t_lo, t_hi);
}

}  // namespace

DemandModel::DemandModel(const ChargeProfile& p, double q_c_j) {
    if (p.kind == ChargeProfile::Kind::Constant) {
        const double pw = p.constant_power_w;
        end_s_ = q_c_j / pw;
        total_j_ = q_c_j;
        pieces_.push_back({0.0, end_s_, pw, 0.0, 0.0});
        return;
    }
    const double q = p.scale;
    pieces_.push_back({0.0, 2400.0, 3.0 * q, q / 2000.0, 0.0});
    pieces_.push_back({2400.0, 3600.0, q * 231.0 / 20.0, -q * 49.0 / 16000.0, 8640.0 * q});
    pieces_.push_back({3600.0, 7200.0, 0.75 * q, -q / 16000.0, 11475.0 * q});
    end_s_ = 7200.0;
    total_j_ = 12960.0 * q;
}

std::size_t DemandModel::piece_at(double t) const {
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (t <= pieces_[i].t_hi) return i;
    }
    return pieces_.size() - 1;
}

double DemandModel::power(double t) const {
    if (t > end_s_) return 0.0;
    const DemandPiece& pc = pieces_[piece_at(t)];
    return pc.alpha + pc.beta * t;
}

double DemandModel::cumulative(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= end_s_) return total_j_;
    const DemandPiece& pc = pieces_[piece_at(t)];
    return pc.cum_lo + segment_integral(pc.alpha, pc.beta, t) -
           segment_integral(pc.alpha, pc.beta, pc.t_lo);
}

double DemandModel::time_at_energy(double e) const {
    e = std::clamp(e, 0.0, total_j_);
    if (e >= total_j_) return end_s_;
    std::size_t i = 0;
    while (i + 1 < pieces_.size() && e > cumulative(pieces_[i].t_hi)) ++i;
    const DemandPiece& pc = pieces_[i];
    const double k = segment_integral(pc.alpha, pc.beta, pc.t_lo) + (e - pc.cum_lo);
    return invert_segment(pc.alpha, pc.beta, k, pc.t_lo, pc.t_hi);
}

double profile_power(const ChargeProfile& p, double t) {
    if (p.kind == ChargeProfile::Kind::Constant) return p.constant_power_w;
    if (t > 7200.0) return 0.0;
    DemandModel dm(p, 0.0);
    return dm.power(t);
}

double profile_cumulative(const ChargeProfile& p, double t) {
    if (p.kind == ChargeProfile::Kind::Constant) return p.constant_power_w * std::max(t, 0.0);
    DemandModel dm(p, 0.0);
    return dm.cumulative(t);
}

double soc_to_time_offset(const ChargeProfile& p, double s0, double q_c_j) {
    if (s0 < 0.0 || s0 >= 1.0) throw std::invalid_argument("initial SOC must be in [0, 1)");
    if (p.kind == ChargeProfile::Kind::Constant) {
        return s0 * q_c_j / p.constant_power_w;
    }
    DemandModel dm(p, q_c_j);
    return dm.time_at_energy(s0 * dm.total_energy_j());
}

}  // namespace ieswpt
