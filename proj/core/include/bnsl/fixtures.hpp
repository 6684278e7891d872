#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/knowledge.hpp"
#include "bnsl/params.hpp"

namespace bnsl::fixtures {

/// Binary chain A -> B -> C.
ParameterizedBn chain_bn();
/// Binary collider A -> B <- C.
ParameterizedBn collider_bn();

/// Ten-variable survey-like network with a diarrhoea outcome, wealth and
/// education drivers, and a household water/sanitation block. Twelve arcs;
/// its equivalence class contains this DAG only.
ParameterizedBn survey_bn();

inline constexpr const char* kSurveyTarget = "DIA_HadDiarrhoea";

/// Tiers 1..8 for the survey network. With `required`, adds the four
/// required arcs into the target from breastfeeding, immunisation, water
/// (standing in for the WASH node unless `wash` is set) and weight for
/// height.
KnowledgeSpec survey_knowledge(bool required, bool wash = false);

/// The variables named as candidate causes of the target.
std::vector<std::string> survey_causes(bool wash = false);

/// HOU_WASH: improved iff both water and sanitation are improved.
SyntheticSpec survey_wash_spec();

/// Mutually independent uniform columns V0..V{k-1}.
Dataset independent_dataset(int vars, int cardinality, std::size_t rows, std::uint64_t seed);

/// Random connected network (in/out degree <= 3) with 2-3 states per
/// variable and skewed CPT rows.
ParameterizedBn random_bn(int vars, std::uint64_t seed);

}  // namespace bnsl::fixtures
