#pragma once

#include "ndt/gap.hpp"
#include "ndt/ia.hpp"

#include "json.hpp"

namespace ndt {

using nlohmann::json;

inline constexpr const char* kSchema = "ndt-lab/1";

// Rationals always travel as "num/den" strings.
inline json rat(const Rational& r) { return r.frac(); }

json to_json(const SymbolId& s);   // [file, T, U, fragment]
json to_json(const OneShotCounts& c);
json to_json(const DeliveryPlan& p);
json to_json(const DecodabilityReport& r);
json to_json(const StepCheck& s);
json to_json(const GapReport& g);
json to_json(const SchemeTrace& tr, bool include_frames);

} // namespace ndt
