#include "tsmw/trial_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "tsmw/errors.hpp"

namespace tsmw {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

TwoStageData read_trial_csv(std::istream& in) {
    TwoStageData data;
    std::string line;
    int number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != "group,stage,value") throw InputError("expected header 'group,stage,value'", number);
            header_seen = true;
            continue;
        }
        const auto c1 = row.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
        if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
            throw InputError("expected three comma-separated fields", number);
        }
        const std::string_view group = trim(row.substr(0, c1));
        const std::string_view stage = trim(row.substr(c1 + 1, c2 - c1 - 1));
        const std::string_view text = trim(row.substr(c2 + 1));

        double value = 0;
        const char* begin = text.data() + (!text.empty() && text[0] == '+' ? 1 : 0);
        const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
            throw InputError("value '" + std::string(text) + "' is not a decimal number", number);
        }
        if (stage != "1" && stage != "2") throw InputError("stage must be 1 or 2", number);
        const bool first = stage == "1";
        if (group == "x") {
            (first ? data.x_stage1 : data.x_stage2).push_back(value);
        } else if (group == "y") {
            (first ? data.y_stage1 : data.y_stage2).push_back(value);
        } else {
            throw InputError("group must be x or y", number);
        }
    }
    if (!header_seen) throw InputError("empty trial file", number);
    if (data.x_stage1.empty() || data.y_stage1.empty()) {
        throw InputError("trial file needs stage-1 observations in both groups", number);
    }
    return data;
}

TwoStageData read_trial_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_trial_csv(in);
}

}  // namespace tsmw
