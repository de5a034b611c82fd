#pragma once

#include <istream>
#include <string>

#include "tsmw/ustat.hpp"

namespace tsmw {

// Reads a trial file with header "group,stage,value": group is x or y, stage is 1 or 2,
// value a decimal literal. Malformed rows raise InputError carrying the line number.
TwoStageData read_trial_csv(std::istream& in);
TwoStageData read_trial_csv_file(const std::string& path);

}  // namespace tsmw
