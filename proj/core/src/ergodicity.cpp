#include "dobrushin/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "dobrushin/linalg.hpp"

namespace dobrushin {

std::string to_string(CertificateMode m) {
  switch (m) {
    case CertificateMode::Uniform: return "uniform";
    case CertificateMode::UniformMean: return "uniform_mean";
    case CertificateMode::WeakMean: return "weak_mean";
    case CertificateMode::Doeblin: return "doeblin";
  }
  return "unknown";
}

namespace {

constexpr double kRelationTol = 1e-9;

void require_same_space(const Semigroup& s, const MarkovProjection& p, const char* what) {
  if (!(s.space() == p.space())) {
    throw DimensionError(std::string(what) + ": semigroup and projection live on different spaces");
  }
}

void check_time(const Semigroup& s, double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw PreconditionError(std::string(what) + ": times must be finite and > 0");
  }
  if (s.is_discrete()) integral_time(t, what);
}

std::string format_gap(double g) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << g;
  return os.str();
}

void check_invariance(const Semigroup& s, const MarkovProjection& p,
                      const std::vector<double>& times) {
  const Matrix& pm = p.matrix();
  for (double t : times) {
    const Matrix tt = s.evaluate(t).matrix();
    const double inv = invariance_gap(tt, pm);
    const double com = commutator_gap(tt, pm);
    if (inv > kRelationTol || com > kRelationTol) {
      std::ostringstream os;
      os << "T_t P = P T_t = P fails at t = " << t << " (|TP - P| = " << format_gap(inv)
         << ", |TP - PT| = " << format_gap(com) << ")";
      throw PreconditionError(os.str());
    }
  }
}

bool certifies(const DeltaResult& d) { return d.value() <= 1.0 - kCertificationMargin; }

std::vector<double> resolve_grid(const Semigroup& s, std::vector<double> grid, const char* what) {
  if (grid.empty()) grid = default_time_grid(s);
  for (double t : grid) check_time(s, t, what);
  return grid;
}

}  // namespace

std::vector<double> default_time_grid(const Semigroup& s) {
  std::vector<double> grid;
  if (s.is_continuous()) {
    for (int k = 0; k <= 6; ++k) grid.push_back(std::ldexp(1.0, k));
  } else {
    for (int n = 1; n <= 64; ++n) grid.push_back(n);
  }
  return grid;
}

CertifyOutcome certify_uniform(const Semigroup& s, const MarkovProjection& p,
                               std::vector<double> t_grid, const DeltaFn& delta) {
  require_same_space(s, p, "certify_uniform");
  t_grid = resolve_grid(s, std::move(t_grid), "certify_uniform");
  check_invariance(s, p, t_grid);

  CertifyOutcome out;
  for (double t : t_grid) {
    GridValue g{t, delta(s.evaluate(t).matrix(), p)};
    out.scanned.push_back(g);
    if (!certifies(g.delta)) continue;
    ErgodicityCertificate c;
    c.mode = CertificateMode::Uniform;
    c.t0 = t;
    c.q = g.delta.value();
    const double qf = std::max(c.q, kMinCertifiedQ);
    c.C = 2.0 / qf;
    c.alpha = std::log(1.0 / qf) / t;
    c.projection = p.describe();
    c.method = g.delta.method;
    c.grid = t_grid;
    c.scanned = out.scanned;
    out.certificate = std::move(c);
    return out;
  }
  out.reason = "delta_P(T_t) > 1 - 1e-6 at every grid time";
  return out;
}

double decay_envelope(const ErgodicityCertificate& cert, double t) {
  if (cert.mode != CertificateMode::Uniform || !cert.alpha) {
    throw PreconditionError("decay_envelope needs a uniform certificate");
  }
  if (!(t >= 0.0)) throw PreconditionError("decay_envelope: t must be >= 0");
  return std::min(2.0, cert.C * std::exp(-*cert.alpha * t));
}

std::vector<CurvePoint> uniform_curve(const Semigroup& s, const MarkovProjection& p,
                                      const ErgodicityCertificate& cert, int points,
                                      std::optional<double> t_max) {
  if (points < 2) throw PreconditionError("uniform_curve: need at least 2 points");
  const double hi = t_max.value_or(50.0 * cert.t0);
  std::vector<double> times;
  if (s.is_discrete()) {
    std::set<long long> unique;
    for (int i = 0; i < points; ++i) unique.insert(std::llround(hi * i / (points - 1)));
    times.assign(unique.begin(), unique.end());
  } else {
    for (int i = 0; i < points; ++i) times.push_back(hi * i / (points - 1));
  }
  std::vector<CurvePoint> curve;
  curve.reserve(times.size());
  for (double t : times) {
    const Matrix diff = s.evaluate(t).matrix() - p.matrix();
    curve.push_back({t, induced_norm(s.space(), diff), decay_envelope(cert, t)});
  }
  return curve;
}

SpectralReport spectral_check(const Semigroup& s, const MarkovProjection& p,
                              const ErgodicityCertificate& cert, int n_max) {
  require_same_space(s, p, "spectral_check");
  if (cert.mode != CertificateMode::Uniform) {
    throw PreconditionError("spectral_check needs a uniform certificate");
  }
  if (n_max < 1) throw PreconditionError("spectral_check: n_max must be >= 1");
  if (!p.space().is_classical() || !p.has_blocks()) {
    throw PreconditionError("spectral_check needs a classical block projection");
  }
  auto exact_delta = [&](const Matrix& m) {
    const DeltaResult d = delta_auto(m, p);
    if (!d.is_exact()) {
      throw PreconditionError("spectral_check needs an exact coefficient (" + p.describe() + ")");
    }
    return d.value();
  };

  SpectralReport r;
  const Matrix e = s.evaluate(1.0).matrix() - p.matrix();
  r.r = linalg::spectral_radius(e);

  // Normalised powers keep the roots accurate when (T_1 - P)^n underflows.
  Matrix power = e;
  double log_scale = 0.0;
  bool vanished = false;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1 && !vanished) power = power * e;
    const double s_n = vanished ? 0.0 : power.cwiseAbs().maxCoeff();
    if (s_n == 0.0) {
      vanished = true;
      r.delta_roots.push_back(0.0);
      continue;
    }
    power /= s_n;
    log_scale += std::log(s_n);
    const double d = exact_delta(power);
    r.delta_roots.push_back(d > 0.0 ? std::exp((log_scale + std::log(d)) / n) : 0.0);
  }
  r.gap = std::abs(r.delta_roots.back() - r.r);

  r.fit_grid = s.is_continuous() ? std::vector<double>{0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}
                                 : std::vector<double>{1, 2, 3, 4, 5, 6, 8};
  const double d1 = exact_delta(s.evaluate(1.0).matrix());
  r.alpha = d1 > 0.0 ? -std::log(d1) : std::numeric_limits<double>::infinity();
  for (double t : r.fit_grid) {
    const Matrix tt = s.evaluate(t).matrix();
    const double d = exact_delta(tt);
    const double model = std::isinf(r.alpha) ? 0.0 : std::exp(-r.alpha * t);
    r.exp_fit_residual = std::max(r.exp_fit_residual, std::abs(d - model));
    const double rho = linalg::spectral_radius(tt - p.matrix());
    r.spectral_fit_residual = std::max(r.spectral_fit_residual, std::abs(d - rho));
  }
  r.exp_fit = r.exp_fit_residual <= kFitTol;
  r.spectral_fit = r.spectral_fit_residual <= kFitTol;
  return r;
}

CertifyOutcome certify_mean(const Semigroup& s, const MarkovProjection& q,
                            std::vector<double> t_grid, const DeltaFn& delta) {
  require_same_space(s, q, "certify_mean");
  t_grid = resolve_grid(s, std::move(t_grid), "certify_mean");

  CertifyOutcome out;
  for (double t : t_grid) {
    const Matrix avg = s.cesaro(t).matrix();
    const double com = commutator_gap(avg, q.matrix());
    if (com > kRelationTol) {
      std::ostringstream os;
      os << "A_t Q = Q A_t fails at t = " << t << " (gap " << format_gap(com) << ")";
      throw PreconditionError(os.str());
    }
    GridValue g{t, delta(avg, q)};
    out.scanned.push_back(g);
    if (!certifies(g.delta)) continue;
    ErgodicityCertificate c;
    c.mode = CertificateMode::UniformMean;
    c.t0 = t;
    c.q = g.delta.value();
    c.C = 2.0 * t / (1.0 - c.q);
    c.projection = q.describe();
    c.method = g.delta.method;
    c.grid = t_grid;
    c.scanned = out.scanned;
    out.certificate = std::move(c);
    return out;
  }
  out.reason = "delta_Q(A_t) > 1 - 1e-6 at every grid time";
  return out;
}

double ume_bound(const ErgodicityCertificate& cert, double t) {
  if (cert.mode != CertificateMode::UniformMean) {
    throw PreconditionError("ume_bound needs a uniform-mean certificate");
  }
  if (!(t > 0.0)) throw PreconditionError("ume_bound: t must be > 0");
  return 2.0 * cert.t0 / ((1.0 - cert.q) * t);
}

std::vector<CurvePoint> mean_curve(const Semigroup& s, const MarkovProjection& q,
                                   const ErgodicityCertificate& cert, int points,
                                   std::optional<double> t_max) {
  if (points < 2) throw PreconditionError("mean_curve: need at least 2 points");
  const double lo = cert.t0;
  const double hi = t_max.value_or(100.0 * cert.t0);
  std::vector<double> times;
  if (s.is_discrete()) {
    std::set<long long> unique;
    for (int i = 0; i < points; ++i) {
      unique.insert(std::llround(lo + (hi - lo) * i / (points - 1)));
    }
    times.assign(unique.begin(), unique.end());
  } else {
    for (int i = 0; i < points; ++i) times.push_back(lo + (hi - lo) * i / (points - 1));
  }
  std::vector<CurvePoint> curve;
  curve.reserve(times.size());
  for (double t : times) {
    const Matrix diff = s.cesaro(t).matrix() - q.matrix();
    curve.push_back({t, induced_norm(s.space(), diff), ume_bound(cert, t)});
  }
  return curve;
}

WeakMeanReport weak_mean_check(const Semigroup& s, const MarkovProjection& p, double t0, int n0,
                               const DeltaFn& delta) {
  require_same_space(s, p, "weak_mean_check");
  check_time(s, t0, "weak_mean_check");
  if (n0 < 1) throw PreconditionError("weak_mean_check: n0 must be >= 1");

  WeakMeanReport r;
  const Matrix avg = s.cesaro(t0).matrix();
  r.delta = delta(linalg::matrix_power(avg, static_cast<unsigned long long>(n0)), p);
  r.q = r.delta.value();
  r.certifies = certifies(r.delta);
  if (!r.certifies) return r;
  for (int k = 0; k <= 6; ++k) {
    const double t = t0 * std::ldexp(1.0, k);
    r.decay.push_back({t, delta(s.cesaro(t).matrix(), p)});
  }
  ErgodicityCertificate c;
  c.mode = CertificateMode::WeakMean;
  c.t0 = t0;
  c.q = r.q;
  c.C = 2.0;
  c.n0 = n0;
  c.projection = p.describe();
  c.method = r.delta.method;
  c.grid = {t0};
  c.scanned = r.decay;
  r.certificate = std::move(c);
  return r;
}

DoeblinReport doeblin_check(const Semigroup& s, const MarkovProjection& p,
                            const MarkovProjection& q, double tau, double t0,
                            const DeltaFn& delta) {
  require_same_space(s, p, "doeblin_check");
  require_same_space(s, q, "doeblin_check");
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw PreconditionError("doeblin_check: tau must lie in (0, 1]");
  }
  check_time(s, t0, "doeblin_check");
  const ProjectionRelations rel = projection_relations(p, q, p.op());
  if (!rel.q_leq_p) throw PreconditionError("doeblin_check: Q <= P fails (Q = QP = PQ)");

  const StateSpace& space = s.space();
  const Matrix avg = s.cesaro(t0).matrix();
  const Matrix m = tau * q.matrix() - avg;

  DoeblinReport r;
  if (space.is_classical()) {
    // x -> |(M x)_+|_1 is convex, so its maximum over the simplex sits at a vertex.
    r.max_phi_norm = -1.0;
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
      const double v = m.col(i).cwiseMax(0.0).sum();
      if (v > r.max_phi_norm) {
        r.max_phi_norm = v;
        r.argmax = Vector::Unit(m.rows(), i);
      }
    }
  } else {
    const Eigen::Vector3d b = m.block<1, 3>(0, 1).transpose();
    const Eigen::Vector3d c = m.block<3, 1>(1, 0);
    const Eigen::Matrix3d l = m.block<3, 3>(1, 1);
    if (b.norm() <= 1e-15 && c.norm() <= 1e-15) {
      // Image of (1/2, n/2) is (m00/2, L n/2); |y_+| grows with |L n|.
      Eigen::JacobiSVD<Eigen::Matrix3d> svd(l, Eigen::ComputeFullV);
      const double y0 = 0.5 * m(0, 0);
      const double rad = 0.5 * svd.singularValues()(0);
      r.max_phi_norm = std::max(y0 + rad, 0.0) + std::max(y0 - rad, 0.0);
      r.argmax = qubit_pure_state(Eigen::Vector3d(svd.matrixV().col(0)));
    } else {
      const SphereMax best = maximize_on_sphere(
          [&](const Eigen::Vector3d& n) {
            return base_norm(space, positive_part(space, m * qubit_pure_state(n)));
          },
          16, 11);
      r.max_phi_norm = best.value;
      r.argmax = qubit_pure_state(best.direction);
      r.heuristic = true;
    }
  }
  r.phi_zero = r.max_phi_norm <= kPhiZeroTol;
  r.holds = r.max_phi_norm <= tau / 4.0 + kPhiZeroTol;
  r.direct_delta = delta(avg, p);
  if (r.holds) {
    r.implied_delta = 1.0 - tau / 2.0;
    r.cross_check = r.direct_delta.value() <= *r.implied_delta + 1e-9;
    ErgodicityCertificate cert;
    cert.mode = CertificateMode::Doeblin;
    cert.t0 = t0;
    cert.q = *r.implied_delta;
    cert.C = 2.0;
    cert.tau = tau;
    cert.max_phi_norm = r.max_phi_norm;
    cert.projection = p.describe();
    cert.method = r.direct_delta.method;
    cert.grid = {t0};
    r.certificate = std::move(cert);
  }
  return r;
}

}  // namespace dobrushin
