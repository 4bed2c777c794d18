#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "dobrushin/ergodicity.hpp"

namespace dobrushin {

/// Pauli-diagonal qubit channel w0 1 + w.s -> w0 1 + lambda w1 s1 + mu w2 s2 +
/// kappa w3 s3. Markov iff max(|lambda|, |mu|, |kappa|) <= 1.
class PauliChannel {
 public:
  PauliChannel(double lambda, double mu, double kappa);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double kappa() const { return kappa_; }

  /// diag(1, lambda, mu, kappa)
  Matrix bloch_matrix() const;
  MarkovOperator op() const;

 private:
  double lambda_;
  double mu_;
  double kappa_;
};

/// Phi = Phi_{-1,0,1}.
PauliChannel example_phi();

/// P = Phi_{0,0,1}, with P Phi = Phi P = P.
MarkovProjection example_projection();

/// Phi^n = Phi_{(-1)^n,0,1} for n >= 1; Phi^0 is the identity Phi_{1,1,1}.
PauliChannel phi_power(int n);

/// A_n(Phi) = diag(1, -chi_odd(n)/n, 0, 1).
Matrix cesaro_phi(int n);

struct ExampleRow {
  int n = 0;
  double norm_phi_n_minus_p = 0.0;
  double norm_cesaro_minus_p = 0.0;
  double delta_p_cesaro = 0.0;
  std::vector<bool> doeblin_phi0;  // one per tau
};

struct TauSummary {
  double tau = 0.0;
  std::optional<int> smallest_n0;  // first n0 where phi = 0 works
  int sufficient_threshold = 0;         // smallest integer n0 > 1/(1 - tau)
  bool parity_consistent = false;  // holds(n0) == (n0 even || n0 (1 - tau) >= 1)
  bool sufficient_respected = false;  // holds for every n0 > 1/(1 - tau)
};

struct ExampleReport {
  int n_max = 0;
  std::vector<double> taus;
  std::vector<ExampleRow> rows;
  std::vector<TauSummary> summaries;
  double max_formula_deviation = 0.0;  // against 1, chi_odd(n)/n, chi_odd(n)/n
  bool uniformly_ergodic = false;      // certify_uniform on the discrete semigroup
  std::optional<ErgodicityCertificate> mean_certificate;
};

/// Parity rule for phi = 0: n0 even, or n0 (1 - tau) >= 1.
bool doeblin_phi0_predicted(int n0, double tau);

ExampleReport example_report(int n_max, const std::vector<double>& taus);

/// Columns n, norm_phi_n_minus_P, norm_cesaro_minus_P, delta_P_cesaro and one
/// doeblin_holds_phi0_tau_<tau> column per tau.
void write_example_csv(const ExampleReport& report, std::ostream& os);

}  // namespace dobrushin
