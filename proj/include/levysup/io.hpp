#pragma once

// Plain-text model descriptions, CSV tables and JSON reports.
//
// Model text: whitespace- or newline-separated key=value pairs.
//   family       bm | cauchy | stable | sn-stable | cpp
//   drift        bm, cpp
//   alpha        stable, sn-stable
//   rho          stable
//   rate         cpp jump rate
//   jump_mean    cpp mean absolute jump
//   jump_sign    cpp, +1 or -1
//   gamma_seed, gamma_samples   cpp, Monte Carlo settings for gamma
// Unknown keys and keys that do not belong to the family are errors.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "levysup/model.hpp"
#include "levysup/quadrature.hpp"

namespace levysup {

inline constexpr std::string_view kToolVersion = "0.3.0";

std::string family_key(Family f);
Family parse_family(std::string_view name);

std::map<std::string, std::string> parse_key_values(std::string_view text);
ProcessModel model_from_text(std::string_view text);
ProcessModel model_from_keys(const std::map<std::string, std::string>& kv);
std::string model_to_text(const ProcessModel& m);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

nlohmann::ordered_json model_json(const ProcessModel& m);
nlohmann::ordered_json quadrature_json(const QuadratureConfig& cfg);
nlohmann::ordered_json provenance_json(const ProcessModel* m, const QuadratureConfig& cfg,
                                       std::uint64_t seed);

}  // namespace levysup
