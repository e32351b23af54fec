#pragma once

#include <vector>

#include "lambdasim/params.hpp"

namespace lambdasim {

enum class RampShape { square, trapezoid, sin2_ramp };

// One pulse on one channel.  The value is 0 outside [start, start+width],
// equals peak on the flat top, and ramps over the leading `rise` and
// trailing `fall` windows (linear for trapezoid, sin^2 for sin2_ramp).
struct Envelope {
  RampShape shape = RampShape::square;
  double peak = 0.0;   // rad/us
  double start = 0.0;  // us, may be negative (pre-t=0 part never sampled)
  double width = 0.0;  // us, full span including ramps
  double rise = 0.0;   // us
  double fall = 0.0;   // us

  double value(double t) const;
  void validate() const;  // throws InvalidGeometry
};

// Time-dependent Rabi amplitudes Omega_plus(t), Omega_minus(t) for one
// experiment shot.  Immutable after construction; sampling is const.
struct PulseSequence {
  std::vector<Envelope> plus_envelopes;
  std::vector<Envelope> minus_envelopes;
  double span = 0.0;  // us

  // Zero fields for t < 0 and t > span.
  FieldSample sample(double t) const;
};

// Two simultaneous square pulses of equal peak over [0, duration].
PulseSequence make_rabi_pair(double peak, double duration);

// STIRAP/Rabi geometry: Omega_plus occupies [0, W] with a sharp rise and a
// trailing ramp of length t_rise; Omega_minus occupies [T-W, T] with a
// leading ramp of length t_rise and a sharp fall.  T is the separation
// between the rising edge of Omega_plus and the trailing edge of
// Omega_minus; T = W overlaps the pulses completely.
PulseSequence make_stirap_pair(double peak, double pulse_width, double t_rise,
                               double separation,
                               RampShape ramp = RampShape::trapezoid);

// Two square Raman pulse pairs implementing pi/2 rotations at the target
// effective Rabi frequency, separated by a field-free gap of length tau.
// The pulse duration is (pi/2)/omega_R_target; the peak amplitude is
// chosen so that Eq.-1-style adiabatic elimination at params.delta_avg
// yields omega_R_target.
PulseSequence make_ramsey_sequence(double omega_R_target,
                                   const LambdaParams& params, double tau);

}  // namespace lambdasim
