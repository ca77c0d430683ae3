#pragma once

#include <string>

#include "json.hpp"

#include "ellgen/fixed_data.hpp"
#include "ellgen/localization.hpp"

namespace ellgen {

using Json = nlohmann::ordered_json;

constexpr int kDatasetFormat = 1;

// Dataset document (format 1, see docs/dataset-format.md). Shape errors throw
// ParseError naming the JSON pointer; semantic errors throw InvalidDataset.
ActionData dataset_from_json(const Json& doc);
// Malformed JSON throws ParseError with line and column.
ActionData dataset_from_text(const std::string& text);
ActionData load_dataset(const std::string& path);

Json dataset_to_json(const ActionData& data, const std::string& name = "");

// "p/q" form of the rotation weight: a JSON integer when integral.
Json rat_json(const Rat& r);

// {"num": {exp: coeff}, "den": {...}, "text": ...}, exponents of w as "e" or "e/2".
Json wrat_json(const WRat& x, int w_resolution);

Json result_to_json(const GenusResult& result);
std::string result_to_text(const GenusResult& result);

}  // namespace ellgen
