#pragma once

#include "coarselab/amenability.hpp"
#include "coarselab/groups.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/metric.hpp"
#include "coarselab/spectral.hpp"
#include "coarselab/witness.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace coarselab::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "coarselab/1";

Json read_json_file(const std::string& path);
/// Two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& doc);
void write_text_file(const std::string& path, const std::string& text);

/// Raises SchemaError("$", ...) unless doc["schema"] == kSchema.
void check_schema(const Json& doc);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& path);

Json space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const Json& doc, const std::string& path = "$");

struct WitnessDocument {
  Witness witness;
  std::optional<FiniteMetricSpace> space;
};

Json witness_to_json(const Witness& w, const FiniteMetricSpace* space = nullptr);
WitnessDocument witness_from_json(const Json& doc);

Json kernel_to_json(const Kernel& k, const FiniteMetricSpace* space = nullptr);
Kernel kernel_from_json(const Json& doc);

Json graph_to_json(const RegularGraph& g);
/// Accepts any simple graph; regularity is checked by RegularGraph itself.
Adjacency adjacency_from_json(const Json& doc);
std::optional<std::vector<std::vector<int>>> colors_from_json(const Json& doc);

Json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const Json& doc);

Json action_to_json(const GroupAction& a);
GroupAction action_from_json(const Json& doc, const FiniteGroup& g, const FiniteMetricSpace& space);

Json folner_to_json(const FiniteGroup& g, const FolnerFunction& f, const std::string& group_id);
FolnerFunction folner_from_json(const Json& doc, const FiniteGroup& g);

Json report_to_json(const WitnessReport& r, const FiniteMetricSpace& space);
Json conversion_to_json(const Conversion& c);

/// r_lo,r_hi,rho1,rho2
std::string profile_csv(const CompressionProfile& profile);
/// target,form,R,eps,S,optimal_defect
std::string diam_csv(const std::vector<DiamTable>& tables);
/// id,x0,x1,...
std::string embedding_csv(const FiniteMetricSpace& space, const Matrix& coords);

/// Shortest round-trip decimal form, as used in the JSON output.
std::string format_double(double v);

}  // namespace coarselab::io
