#pragma once

#include <string>
#include <string_view>

#include "vennabers/baselines.hpp"
#include "vennabers/cvap.hpp"
#include "vennabers/ivap.hpp"
#include "vennabers/scorers.hpp"

namespace vennabers {

// Versioned JSON model files; see docs/formats.md. Doubles are written in
// shortest round-trip form, so stored vectors reload bit-exactly.
inline constexpr int kFormatVersion = 1;

std::string ivap_to_json(const IvapRule& rule);
IvapRule ivap_from_json(std::string_view text);

std::string scorer_to_json(const TrainedScorer& scorer);
TrainedScorer scorer_from_json(std::string_view text);

struct CvapBundle {
    CvapModel model;
    MergeLoss merge = MergeLoss::log;
};

std::string cvap_to_json(const CvapModel& model, MergeLoss merge);
CvapBundle cvap_from_json(std::string_view text);

std::string platt_to_json(const PlattModel& model);
PlattModel platt_from_json(std::string_view text);

std::string direct_isotonic_to_json(const DirIsoModel& model);
DirIsoModel direct_isotonic_from_json(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace vennabers
