#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "toepdecomp/decomposition.hpp"
#include "toepdecomp/oracle.hpp"
#include "toepdecomp/polyroots.hpp"

namespace toepdecomp::io {

using nlohmann::json;

// Complex numbers travel as [re, im]; a bare number is read as real.
Complex complex_from_json(const json& j);
std::vector<Complex> complex_list_from_json(const json& j, const std::string& field);
json to_json(Complex z);

json to_json(const SpectralAtom& atom);
json to_json(const CandidateResult& result, bool verbose);
json to_json(const DecomposeAllResult& result, bool verbose);
json to_json(const UnimodularityReport& report);
json to_json(const oracle::PlantedInstance& inst);

// Serializer with every floating-point value written as %.17g so output
// is bit-stable across runs and platforms.
std::string dump(const json& j, bool pretty);

}  // namespace toepdecomp::io
