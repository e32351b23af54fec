#pragma once

namespace lambdasim {

// Physical rates and detunings of the Lambda-system, all angular (rad/us).
//
// delta_avg is the average one-photon detuning of the two optical fields
// from the excited level; delta_two_photon is the detuning from the Raman
// resonance.  gamma_repop repopulates the ground states from the excited
// level, gamma_opt decays the optical coherences, gamma_spin the ground
// coherence.  leak_rate optionally removes excited population from the
// simulated system entirely (trace is then not conserved).
struct LambdaParams {
  double delta_avg = 0.0;
  double delta_two_photon = 0.0;
  double gamma_repop = 0.0;
  double gamma_opt = 0.0;
  double gamma_spin = 0.0;
  double leak_rate = 0.0;

  // Throws on negative rates; warns (stderr, once per call site pattern)
  // when gamma_opt < gamma_repop, which breaks complete positivity of the
  // dissipator as written.
  void validate() const;
};

// Instantaneous Rabi-frequency amplitudes of the two fields (rad/us).
struct FieldSample {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
};

}  // namespace lambdasim
