#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dobrushin/coefficient.hpp"
#include "dobrushin/semigroup.hpp"

namespace dobrushin {

enum class CertificateMode { Uniform, UniformMean, WeakMean, Doeblin };

std::string to_string(CertificateMode m);

/// Margin below 1 a coefficient must clear to certify.
inline constexpr double kCertificationMargin = 1e-6;

/// Floor applied to q before forming C = 2/q and alpha = ln(1/q)/t0.
inline constexpr double kMinCertifiedQ = 1e-12;

struct CurvePoint {
  double t = 0.0;
  double measured = 0.0;  // |T_t - P| or |A_t - Q|
  double bound = 0.0;     // envelope at t
};

struct GridValue {
  double t = 0.0;
  DeltaResult delta;
};

struct ErgodicityCertificate {
  CertificateMode mode = CertificateMode::Uniform;
  double t0 = 0.0;
  double q = 1.0;
  double C = 2.0;
  std::optional<double> alpha;
  std::string projection;
  DeltaMethod method = DeltaMethod::Bracket;
  std::optional<int> n0;
  std::optional<double> tau;
  std::optional<double> max_phi_norm;
  std::vector<double> grid;
  std::vector<GridValue> scanned;
  std::vector<CurvePoint> measured_curve;
  // Filled by ergodize / openness_radius.
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<double> radius;
  std::optional<int> N;
};

/// Either a certificate or the reason none exists on the scanned grid.
struct CertifyOutcome {
  std::optional<ErgodicityCertificate> certificate;
  std::vector<GridValue> scanned;
  std::string reason;

  bool certified() const { return certificate.has_value(); }
};

using DeltaFn = std::function<DeltaResult(const Matrix&, const MarkovProjection&)>;

/// {1, 2, 4, ..., 64} for continuous semigroups, {1, ..., 64} for discrete ones.
std::vector<double> default_time_grid(const Semigroup& s);

/// First grid time t0 with delta_P(T_t0) <= 1 - margin. Emits C = 2/q and
/// alpha = ln(1/q)/t0, so that |T_t - P| <= C exp(-alpha t) for t >= 0.
/// Throws PreconditionError when T_t P = P T_t = P fails on the grid.
CertifyOutcome certify_uniform(const Semigroup& s, const MarkovProjection& p,
                               std::vector<double> t_grid = {}, const DeltaFn& delta = delta_auto);

/// min(2, C exp(-alpha t)) for a Uniform certificate.
double decay_envelope(const ErgodicityCertificate& cert, double t);

/// |T_t - P| against the envelope at `points` equally spaced times in
/// [0, t_max] (t_max defaults to 50 t0).
std::vector<CurvePoint> uniform_curve(const Semigroup& s, const MarkovProjection& p,
                                      const ErgodicityCertificate& cert, int points = 200,
                                      std::optional<double> t_max = std::nullopt);

struct SpectralReport {
  std::vector<double> delta_roots;  // delta_P(T_n)^(1/n), n = 1..n_max
  double r = 0.0;                   // spectral radius of T_1 - P
  double gap = 0.0;                 // |delta_roots.back() - r|
  double alpha = 0.0;               // -ln delta_P(T_1)
  std::vector<double> fit_grid;
  double exp_fit_residual = 0.0;       // max |delta_P(T_t) - exp(-alpha t)|
  double spectral_fit_residual = 0.0;  // max |delta_P(T_t) - r(T_t - P)|
  bool exp_fit = false;
  bool spectral_fit = false;
  bool consistent() const { return exp_fit == spectral_fit; }
};

/// Tolerance for both fits in SpectralReport.
inline constexpr double kFitTol = 1e-8;

/// Root sequence delta_P(T_n)^(1/n) against r(T_1 - P). Powers are formed as
/// (T_1 - P)^n, which equals T_n - P and has the same coefficient as T_n.
SpectralReport spectral_check(const Semigroup& s, const MarkovProjection& p,
                              const ErgodicityCertificate& cert, int n_max);

/// First grid time with delta_Q(A_t0) <= 1 - margin; the certificate carries
/// C = 2 t0 / (1 - q) for the bound |A_t - Q| <= C / t, t >= t0.
/// Throws PreconditionError when A_t Q = Q A_t fails on the grid.
CertifyOutcome certify_mean(const Semigroup& s, const MarkovProjection& q,
                            std::vector<double> t_grid = {}, const DeltaFn& delta = delta_auto);

/// 2 t0 / ((1 - q) t).
double ume_bound(const ErgodicityCertificate& cert, double t);

std::vector<CurvePoint> mean_curve(const Semigroup& s, const MarkovProjection& q,
                                   const ErgodicityCertificate& cert, int points = 200,
                                   std::optional<double> t_max = std::nullopt);

struct WeakMeanReport {
  double q = 1.0;  // delta_P(A_t0^n0)
  DeltaResult delta;
  bool certifies = false;
  std::vector<GridValue> decay;  // delta_P(A_t) on t0 * 2^k, k = 0..6
  std::optional<ErgodicityCertificate> certificate;
};

WeakMeanReport weak_mean_check(const Semigroup& s, const MarkovProjection& p, double t0, int n0,
                               const DeltaFn& delta = delta_auto);

/// Threshold below which the minimal compensator counts as zero.
inline constexpr double kPhiZeroTol = 1e-12;

struct DoeblinReport {
  bool holds = false;
  bool phi_zero = false;        // sup |phi_x| <= kPhiZeroTol
  double max_phi_norm = 0.0;    // sup over the base of |(tau Q x - A x)_+|
  bool heuristic = false;       // sup found by search rather than exactly
  Vector argmax;                // maximising base element
  std::optional<double> implied_delta;  // 1 - tau/2 when holds
  DeltaResult direct_delta;             // delta_P(A_t0)
  bool cross_check = true;              // direct <= implied + 1e-9 when holds
  std::optional<ErgodicityCertificate> certificate;
};

/// Doeblin-type mean condition with the minimal compensator
/// phi_x = (tau Q x - A_t0 x)_+. Classical: exact maximum over the vertices
/// e_i. Qubit: exact when tau Q - A_t0 has no affine part, search otherwise.
DoeblinReport doeblin_check(const Semigroup& s, const MarkovProjection& p,
                            const MarkovProjection& q, double tau, double t0,
                            const DeltaFn& delta = delta_auto);

}  // namespace dobrushin
