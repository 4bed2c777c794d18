#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dobrushin/perturbation.hpp"
#include "dobrushin/qubit_example.hpp"

namespace dobrushin {

using Json = nlohmann::ordered_json;

/// Report schema version written into every report.json.
inline constexpr const char* kReportSchemaVersion = "1.0";

/// %.17g; non-finite values print as "nan", "inf" or "-inf".
std::string format_double(double v);

/// Deterministic JSON text: keys in insertion order, doubles at 17
/// significant digits, non-finite doubles as null, two-space indent.
void write_json(std::ostream& os, const Json& j);
std::string dump_json(const Json& j);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Columns t, measured_norm, envelope_bound.
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const DeltaResult& d);
Json to_json(const ErgodicityCertificate& c);
Json to_json(const MetricValue& m);
Json to_json(const SpectralReport& r);
Json to_json(const WeakMeanReport& r);
Json to_json(const DoeblinReport& r);
Json to_json(const NeighborProbe& r);
Json to_json(const ExampleReport& r);

}  // namespace dobrushin
