#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conflab/classify.hpp"
#include "conflab/config.hpp"
#include "conflab/flowprops.hpp"
#include "conflab/kms_finite.hpp"

namespace conflab {

inline constexpr const char* kSchemaVersion = "conflab-report/1";

// Doubles rounded to 12 significant digits; non-finite values become strings.
Json num(double v);

Json to_json(const CesaroStats& c, bool with_averages = false);
Json to_json(const ExistenceResult& r);
Json to_json(const SpectrumVerdict& v);
Json to_json(const ConformalReport& r);
Json to_json(const TailFit& f);
Json to_json(const TypeVerdict& v);
Json to_json(const InvariantMeasureEstimate& e);
Json to_json(const FlowPropertyReport& r);
Json to_json(const DefectReport& d);
Json to_json(const std::vector<ConditionCheck>& checks);
Json to_json(const std::vector<Residual>& r);

// Pretty JSON with a trailing newline.
void write_json(const std::string& path, const Json& j);

// Columns: beta, verdict, tail_max_fwd, tail_max_bwd, horizon.
void write_spectrum_csv(const std::string& path, const SpectrumVerdict& v);
// Columns: k, S_k, weight. S_k(k) supplies the cocycle values.
void write_measure_csv(const std::string& path, const WeightedAtomicMeasure& m, const std::function<double(std::int64_t)>& S_k);

}  // namespace conflab
