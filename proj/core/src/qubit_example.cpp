#include "dobrushin/qubit_example.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dobrushin/report.hpp"

namespace dobrushin {

PauliChannel::PauliChannel(double lambda, double mu, double kappa)
    : lambda_(lambda), mu_(mu), kappa_(kappa) {
  const double m = std::max({std::abs(lambda), std::abs(mu), std::abs(kappa)});
  if (!std::isfinite(m) || m > 1.0) {
    throw PreconditionError("Pauli channel is Markov only for max(|lambda|, |mu|, |kappa|) <= 1");
  }
}

Matrix PauliChannel::bloch_matrix() const {
  return Eigen::Vector4d(1.0, lambda_, mu_, kappa_).asDiagonal();
}

MarkovOperator PauliChannel::op() const {
  return MarkovOperator(StateSpace::qubit(), bloch_matrix());
}

PauliChannel example_phi() { return PauliChannel(-1.0, 0.0, 1.0); }

MarkovProjection example_projection() {
  return MarkovProjection::from_matrix(StateSpace::qubit(), PauliChannel(0.0, 0.0, 1.0).bloch_matrix());
}

PauliChannel phi_power(int n) {
  if (n < 0) throw PreconditionError("phi_power: n must be >= 0");
  if (n == 0) return PauliChannel(1.0, 1.0, 1.0);
  return PauliChannel(n % 2 == 0 ? 1.0 : -1.0, 0.0, 1.0);
}

Matrix cesaro_phi(int n) {
  if (n < 1) throw PreconditionError("cesaro_phi: n must be >= 1");
  const double w1 = n % 2 == 1 ? -1.0 / n : 0.0;
  return Eigen::Vector4d(1.0, w1, 0.0, 1.0).asDiagonal();
}

bool doeblin_phi0_predicted(int n0, double tau) {
  return n0 % 2 == 0 || n0 * (1.0 - tau) >= 1.0 - 1e-12;
}

ExampleReport example_report(int n_max, const std::vector<double>& taus) {
  if (n_max < 2) throw PreconditionError("example_report: n_max must be >= 2");
  for (double tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw PreconditionError("example_report: every tau must lie in (0, 1)");
    }
  }
  const StateSpace qubit = StateSpace::qubit();
  const MarkovProjection p = example_projection();
  const Semigroup s = Semigroup::discrete(example_phi().op(), p);

  ExampleReport r;
  r.n_max = n_max;
  r.taus = taus;
  for (int n = 1; n <= n_max; ++n) {
    ExampleRow row;
    row.n = n;
    const Matrix avg = cesaro_phi(n);
    row.norm_phi_n_minus_p = induced_norm(qubit, phi_power(n).bloch_matrix() - p.matrix());
    row.norm_cesaro_minus_p = induced_norm(qubit, avg - p.matrix());
    row.delta_p_cesaro = delta_qubit_diagonal(avg, p.matrix()).value();
    const double chi = n % 2 == 1 ? 1.0 / n : 0.0;
    r.max_formula_deviation = std::max({r.max_formula_deviation,
                                        std::abs(row.norm_phi_n_minus_p - 1.0),
                                        std::abs(row.norm_cesaro_minus_p - chi),
                                        std::abs(row.delta_p_cesaro - chi)});
    for (double tau : taus) {
      row.doeblin_phi0.push_back(doeblin_check(s, p, p, tau, n).phi_zero);
    }
    r.rows.push_back(std::move(row));
  }

  for (std::size_t k = 0; k < taus.size(); ++k) {
    const double tau = taus[k];
    TauSummary sum;
    sum.tau = tau;
    sum.sufficient_threshold = static_cast<int>(std::floor(1.0 / (1.0 - tau))) + 1;
    sum.parity_consistent = true;
    sum.sufficient_respected = true;
    for (const ExampleRow& row : r.rows) {
      const bool holds = row.doeblin_phi0[k];
      if (holds && !sum.smallest_n0) sum.smallest_n0 = row.n;
      if (holds != doeblin_phi0_predicted(row.n, tau)) sum.parity_consistent = false;
      if (row.n * (1.0 - tau) > 1.0 && !holds) sum.sufficient_respected = false;
    }
    r.summaries.push_back(sum);
  }

  r.uniformly_ergodic = certify_uniform(s, p).certified();
  r.mean_certificate = certify_mean(s, p).certificate;
  return r;
}

void write_example_csv(const ExampleReport& report, std::ostream& os) {
  std::vector<std::string> header = {"n", "norm_phi_n_minus_P", "norm_cesaro_minus_P",
                                     "delta_P_cesaro"};
  for (double tau : report.taus) {
    std::ostringstream name;
    name << "doeblin_holds_phi0_tau_" << tau;
    header.push_back(name.str());
  }
  std::vector<std::vector<std::string>> rows;
  for (const ExampleRow& row : report.rows) {
    std::vector<std::string> cells = {std::to_string(row.n), format_double(row.norm_phi_n_minus_p),
                                      format_double(row.norm_cesaro_minus_p),
                                      format_double(row.delta_p_cesaro)};
    for (bool b : row.doeblin_phi0) cells.push_back(b ? "true" : "false");
    rows.push_back(std::move(cells));
  }
  write_csv(os, header, rows);
}

}  // namespace dobrushin
