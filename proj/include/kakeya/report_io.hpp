#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kakeya/covering.hpp"
#include "kakeya/verify.hpp"

namespace kakeya {

using json = nlohmann::json;

json box_to_json(const Box& b);
Box box_from_json(const json& j);

json field_to_json(const VectorField& v);
VectorField field_from_json(const json& j);

json rect_to_json(const Rect& r);
Rect rect_from_json(const json& j);

// Family files carry the field, the threshold, and the rectangles with their
// densities, so a covering run is reproducible from the file alone.
json family_to_json(const RectFamily& fam, const VectorField& v);
struct FamilyFile {
    RectFamily family;
    VectorField field;
};
FamilyFile family_from_json(const json& j);

json covering_to_json(const CoveringResult& cr);
json ud_to_json(const UDecomposition& ud);
json reports_to_json(const std::vector<EstimateReport>& reps);

// One decision per line: "select <id>" or "discard <id> round=<k>".
std::string selection_log_text(const CoveringResult& cr);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace kakeya
