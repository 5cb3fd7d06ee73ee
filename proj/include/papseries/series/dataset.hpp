#pragma once

#include "papseries/series/series.hpp"

#include <string_view>
#include <vector>

namespace papseries {

struct DatasetEntry {
  std::string_view representative;
  std::string_view oeis;
  std::vector<std::string_view> coefficients;
};

/// The sixteen length-5 Wilf class sequences, as published.
const std::vector<DatasetEntry>& dataset_entries();

/// Lookup by representative ("25314") or OEIS id ("A256195").
ExactSeries dataset_series(std::string_view key);
std::vector<ExactSeries> dataset();

}  // namespace papseries
