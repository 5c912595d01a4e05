#pragma once

#include <json.hpp>

#include "ergokit/map.hpp"

namespace ergokit {

using ojson = nlohmann::ordered_json;

ojson to_json(const Scalar& x);
ojson to_json(const IntervalSet& s);
ojson to_json(const PMap& T);
ojson to_json(const PartialIso& phi);
ojson to_json(const ExtMeasure& m);

// Parsers throw PARSE_ERROR naming the JSON path `where`.
Scalar scalar_from_json(const ojson& j, const std::string& where);
IntervalSet set_from_json(const ojson& j, const std::string& where);
// Raw pieces; the caller validates.
PMap map_from_json(const ojson& j, const std::string& where);

}  // namespace ergokit
