#include "lambdasim/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lambdasim/dynamics.hpp"
#include "lambdasim/errors.hpp"

namespace lambdasim {

void Envelope::validate() const {
  if (peak < 0 || width < 0 || rise < 0 || fall < 0)
    throw InvalidGeometry("Envelope: negative peak, width, or ramp");
  if (shape != RampShape::square && rise + fall > width + 1e-12)
    throw InvalidGeometry("Envelope: rise + fall exceeds width");
}

double Envelope::value(double t) const {
  const double u = t - start;
  if (u < 0.0 || u > width) return 0.0;
  if (shape == RampShape::square) return peak;

  double frac = 1.0;
  if (rise > 0.0 && u < rise)
    frac = u / rise;
  else if (fall > 0.0 && u > width - fall)
    frac = (width - u) / fall;
  if (shape == RampShape::sin2_ramp && frac < 1.0) {
    const double s = std::sin(0.5 * std::numbers::pi * frac);
    frac = s * s;
  }
  return peak * frac;
}

FieldSample PulseSequence::sample(double t) const {
  if (t < 0.0 || t > span) return {0.0, 0.0};
  double plus = 0.0, minus = 0.0;
  for (const auto& e : plus_envelopes) plus += e.value(t);
  for (const auto& e : minus_envelopes) minus += e.value(t);
  return {std::max(plus, 0.0), std::max(minus, 0.0)};
}

PulseSequence make_rabi_pair(double peak, double duration) {
  if (duration < 0.0) throw InvalidGeometry("make_rabi_pair: negative duration");
  PulseSequence seq;
  seq.span = duration;
  if (duration > 0.0) {
    Envelope e{RampShape::square, peak, 0.0, duration, 0.0, 0.0};
    e.validate();
    seq.plus_envelopes = {e};
    seq.minus_envelopes = {e};
  }
  return seq;
}

PulseSequence make_stirap_pair(double peak, double pulse_width, double t_rise,
                               double separation, RampShape ramp) {
  if (t_rise < 0.0 || t_rise > pulse_width)
    throw InvalidGeometry("make_stirap_pair: t_rise must lie in [0, W]");
  if (separation < 0.0)
    throw InvalidGeometry("make_stirap_pair: negative separation");

  const RampShape shape = (t_rise == 0.0) ? RampShape::square : ramp;
  // Omega_plus: sharp rise at t=0, trailing ramp into W.
  Envelope plus{shape, peak, 0.0, pulse_width, 0.0, t_rise};
  // Omega_minus: leading ramp from T-W, sharp fall at T.
  Envelope minus{shape, peak, separation - pulse_width, pulse_width, t_rise,
                 0.0};
  plus.validate();
  minus.validate();

  PulseSequence seq;
  seq.plus_envelopes = {plus};
  seq.minus_envelopes = {minus};
  seq.span = std::max(pulse_width, separation);
  return seq;
}

PulseSequence make_ramsey_sequence(double omega_R_target,
                                   const LambdaParams& params, double tau) {
  if (omega_R_target <= 0.0)
    throw InvalidGeometry("make_ramsey_sequence: omega_R_target must be > 0");
  if (tau < 0.0) throw InvalidGeometry("make_ramsey_sequence: negative tau");
  if (params.delta_avg == 0.0)
    throw DivisionByZero("make_ramsey_sequence: delta_avg must be nonzero");

  // Equal peaks with Omega^2 / (2 Delta) = omega_R_target.
  const double peak =
      std::sqrt(2.0 * std::abs(params.delta_avg) * omega_R_target);
  const double t_half = 0.5 * std::numbers::pi / omega_R_target;

  Envelope first{RampShape::square, peak, 0.0, t_half, 0.0, 0.0};
  Envelope second{RampShape::square, peak, t_half + tau, t_half, 0.0, 0.0};
  PulseSequence seq;
  seq.plus_envelopes = {first, second};
  seq.minus_envelopes = {first, second};
  seq.span = 2.0 * t_half + tau;
  return seq;
}

}  // namespace lambdasim
