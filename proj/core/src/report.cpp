#include "dobrushin/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dobrushin {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_string(std::ostream& os, const std::string& s) {
  os << Json(s).dump();
}

void write_value(std::ostream& os, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_string(os, key);
        os << ": ";
        write_value(os, value, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const Json& e) { return e.is_structured(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_value(os, j[i], depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, j[i], depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        const std::string s = format_double(v);
        os << s;
        // Keep floats recognisable as such after a round trip.
        if (s.find_first_of(".eEn") == std::string::npos) os << ".0";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

void write_json(std::ostream& os, const Json& j) {
  write_value(os, j, 0);
  os << "\n";
}

std::string dump_json(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << csv_field(cells[i]);
    }
    os << "\r\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(curve.size());
  for (const CurvePoint& c : curve) {
    rows.push_back({format_double(c.t), format_double(c.measured), format_double(c.bound)});
  }
  write_csv(os, {"t", "measured_norm", "envelope_bound"}, rows);
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const DeltaResult& d) {
  Json j;
  j["method"] = to_string(d.method);
  j["exact"] = d.is_exact();
  if (d.is_exact()) {
    j["value"] = d.value();
  } else {
    j["value"] = nullptr;
  }
  j["lower"] = d.lower;
  j["upper"] = d.upper;
  j["witness"] = d.witness ? to_json(*d.witness) : Json(nullptr);
  j["note"] = d.note;
  return j;
}

Json to_json(const ErgodicityCertificate& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["t0"] = c.t0;
  j["q"] = c.q;
  j["C"] = c.C;
  j["alpha"] = optional_number(c.alpha);
  j["tau"] = optional_number(c.tau);
  j["n0"] = c.n0 ? Json(*c.n0) : Json(nullptr);
  j["max_phi_norm"] = optional_number(c.max_phi_norm);
  j["projection"] = c.projection;
  j["method"] = to_string(c.method);
  Json grid = Json::array();
  for (double t : c.grid) grid.push_back(t);
  j["grid"] = grid;
  Json scanned = Json::array();
  for (const GridValue& g : c.scanned) {
    scanned.push_back(Json{{"t", g.t}, {"lower", g.delta.lower}, {"upper", g.delta.upper}});
  }
  j["scanned"] = scanned;
  Json curve = Json::array();
  for (const CurvePoint& p : c.measured_curve) curve.push_back(Json::array({p.t, p.measured}));
  j["measured_curve"] = curve;
  if (c.lambda) j["lambda"] = *c.lambda;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.radius) j["radius"] = *c.radius;
  if (c.N) j["N"] = *c.N;
  return j;
}

Json to_json(const MetricValue& m) {
  return Json{{"value", m.value}, {"certified_error", m.certified_error}, {"parameter", m.parameter}};
}

Json to_json(const SpectralReport& r) {
  Json j;
  j["delta_roots"] = to_json(Vector(Eigen::Map<const Vector>(r.delta_roots.data(),
                                                             static_cast<Eigen::Index>(r.delta_roots.size()))));
  j["r"] = r.r;
  j["gap"] = r.gap;
  j["alpha"] = r.alpha;
  Json grid = Json::array();
  for (double t : r.fit_grid) grid.push_back(t);
  j["fit_grid"] = grid;
  j["exp_fit"] = r.exp_fit;
  j["exp_fit_residual"] = r.exp_fit_residual;
  j["spectral_fit"] = r.spectral_fit;
  j["spectral_fit_residual"] = r.spectral_fit_residual;
  j["consistent"] = r.consistent();
  return j;
}

Json to_json(const WeakMeanReport& r) {
  Json j;
  j["q"] = r.q;
  j["delta"] = to_json(r.delta);
  j["certifies"] = r.certifies;
  Json decay = Json::array();
  for (const GridValue& g : r.decay) decay.push_back(Json{{"t", g.t}, {"delta", g.delta.value()}});
  j["decay"] = decay;
  return j;
}

Json to_json(const DoeblinReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["phi_zero"] = r.phi_zero;
  j["max_phi_norm"] = r.max_phi_norm;
  j["heuristic"] = r.heuristic;
  j["argmax"] = to_json(r.argmax);
  j["implied_delta"] = optional_number(r.implied_delta);
  j["direct_delta"] = to_json(r.direct_delta);
  j["cross_check"] = r.cross_check;
  return j;
}

Json to_json(const NeighborProbe& r) {
  Json j;
  j["mu"] = r.mu;
  j["distance"] = to_json(r.distance);
  j["inside"] = r.inside;
  j["delta"] = to_json(r.delta);
  j["bound"] = r.bound;
  j["certified"] = r.certified;
  return j;
}

Json to_json(const ExampleReport& r) {
  Json j;
  j["n_max"] = r.n_max;
  j["max_formula_deviation"] = r.max_formula_deviation;
  j["uniformly_ergodic"] = r.uniformly_ergodic;
  j["mean_certificate"] = r.mean_certificate ? to_json(*r.mean_certificate) : Json(nullptr);
  Json taus = Json::array();
  for (const TauSummary& s : r.summaries) {
    taus.push_back(Json{{"tau", s.tau},
                        {"smallest_n0", s.smallest_n0 ? Json(*s.smallest_n0) : Json(nullptr)},
                        {"sufficient_threshold", s.sufficient_threshold},
                        {"parity_consistent", s.parity_consistent},
                        {"sufficient_condition_respected", s.sufficient_respected}});
  }
  j["doeblin"] = taus;
  return j;
}

}  // namespace dobrushin
